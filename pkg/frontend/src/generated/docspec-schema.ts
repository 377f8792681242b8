// GENERATED by scripts/gen-schema.mjs from docs/docspec.schema.json — do not edit.
// Regenerate with: npm run gen
export const docspecSchema = {
  "$defs": {
    "binding": {
      "description": "A numeric literal or an expression source string.",
      "minLength": 1,
      "type": [
        "number",
        "string"
      ]
    },
    "color": {
      "minLength": 1,
      "type": "string"
    },
    "constraint": {
      "additionalProperties": false,
      "properties": {
        "description": {
          "type": "string"
        },
        "predicate": {
          "$ref": "#/$defs/expression"
        },
        "tolerance": {
          "exclusiveMinimum": 0,
          "type": "number"
        }
      },
      "required": [
        "predicate"
      ],
      "type": "object"
    },
    "expression": {
      "minLength": 1,
      "type": "string"
    },
    "identifier": {
      "pattern": "^[A-Za-z][A-Za-z0-9_]*$",
      "type": "string"
    },
    "interaction": {
      "additionalProperties": false,
      "properties": {
        "constraint": {
          "$ref": "#/$defs/constraint"
        },
        "render": {
          "$ref": "#/$defs/render"
        },
        "state": {
          "items": {
            "$ref": "#/$defs/state_variable"
          },
          "type": "array"
        },
        "transitions": {
          "items": {
            "$ref": "#/$defs/transition"
          },
          "type": "array"
        }
      },
      "required": [
        "state",
        "render",
        "transitions"
      ],
      "type": "object"
    },
    "primitive": {
      "allOf": [
        {
          "if": {
            "properties": {
              "kind": {
                "const": "circle"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "center_x": {
                "$ref": "#/$defs/binding"
              },
              "center_y": {
                "$ref": "#/$defs/binding"
              },
              "color": {
                "$ref": "#/$defs/color"
              },
              "kind": true,
              "radius": {
                "$ref": "#/$defs/binding"
              }
            },
            "required": [
              "center_x",
              "center_y",
              "radius",
              "color"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "rect"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "color": {
                "$ref": "#/$defs/color"
              },
              "height": {
                "$ref": "#/$defs/binding"
              },
              "kind": true,
              "width": {
                "$ref": "#/$defs/binding"
              },
              "x": {
                "$ref": "#/$defs/binding"
              },
              "y": {
                "$ref": "#/$defs/binding"
              }
            },
            "required": [
              "x",
              "y",
              "width",
              "height",
              "color"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "line"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "color": {
                "$ref": "#/$defs/color"
              },
              "kind": true,
              "x1": {
                "$ref": "#/$defs/binding"
              },
              "x2": {
                "$ref": "#/$defs/binding"
              },
              "y1": {
                "$ref": "#/$defs/binding"
              },
              "y2": {
                "$ref": "#/$defs/binding"
              }
            },
            "required": [
              "x1",
              "y1",
              "x2",
              "y2",
              "color"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "polyline"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "color": {
                "$ref": "#/$defs/color"
              },
              "kind": true,
              "points": {
                "items": {
                  "items": {
                    "$ref": "#/$defs/binding"
                  },
                  "maxItems": 2,
                  "minItems": 2,
                  "type": "array"
                },
                "minItems": 2,
                "type": "array"
              }
            },
            "required": [
              "points",
              "color"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "label"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "color": {
                "$ref": "#/$defs/color"
              },
              "decimals": {
                "maximum": 12,
                "minimum": 0,
                "type": "integer"
              },
              "kind": true,
              "text_template": {
                "minLength": 1,
                "type": "string"
              },
              "x": {
                "$ref": "#/$defs/binding"
              },
              "y": {
                "$ref": "#/$defs/binding"
              }
            },
            "required": [
              "x",
              "y",
              "text_template",
              "color"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "plot"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "color": {
                "$ref": "#/$defs/color"
              },
              "expr": {
                "$ref": "#/$defs/expression"
              },
              "kind": true,
              "var": {
                "$ref": "#/$defs/identifier"
              },
              "x_max": {
                "type": "number"
              },
              "x_min": {
                "type": "number"
              }
            },
            "required": [
              "var",
              "expr",
              "x_min",
              "x_max",
              "color"
            ]
          }
        }
      ],
      "properties": {
        "kind": {
          "enum": [
            "circle",
            "rect",
            "line",
            "polyline",
            "label",
            "plot"
          ]
        }
      },
      "required": [
        "kind"
      ],
      "type": "object"
    },
    "render": {
      "additionalProperties": false,
      "properties": {
        "note": {
          "type": "string"
        },
        "primitives": {
          "items": {
            "$ref": "#/$defs/primitive"
          },
          "type": "array"
        }
      },
      "required": [
        "primitives"
      ],
      "type": "object"
    },
    "state_variable": {
      "allOf": [
        {
          "if": {
            "properties": {
              "kind": {
                "const": "slider"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "default": {
                "type": "number"
              },
              "kind": true,
              "max": {
                "type": "number"
              },
              "min": {
                "type": "number"
              },
              "name": true,
              "step": {
                "exclusiveMinimum": 0,
                "type": "number"
              }
            },
            "required": [
              "min",
              "max",
              "step",
              "default"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "dropdown"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "default_index": {
                "minimum": 0,
                "type": "integer"
              },
              "kind": true,
              "name": true,
              "options": {
                "items": {
                  "additionalProperties": false,
                  "properties": {
                    "label": {
                      "minLength": 1,
                      "type": "string"
                    },
                    "value": {
                      "type": "number"
                    }
                  },
                  "required": [
                    "label",
                    "value"
                  ],
                  "type": "object"
                },
                "minItems": 2,
                "type": "array"
              }
            },
            "required": [
              "options",
              "default_index"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "toggle"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "default": {
                "type": "boolean"
              },
              "kind": true,
              "name": true
            },
            "required": [
              "default"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "drag"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "default": {
                "items": {
                  "type": "number"
                },
                "maxItems": 2,
                "minItems": 2,
                "type": "array"
              },
              "kind": true,
              "name": true,
              "x_max": {
                "type": "number"
              },
              "x_min": {
                "type": "number"
              },
              "y_max": {
                "type": "number"
              },
              "y_min": {
                "type": "number"
              }
            },
            "required": [
              "x_min",
              "x_max",
              "y_min",
              "y_max",
              "default"
            ]
          }
        },
        {
          "if": {
            "properties": {
              "kind": {
                "const": "derived"
              }
            },
            "required": [
              "kind"
            ]
          },
          "then": {
            "additionalProperties": false,
            "properties": {
              "formula": {
                "$ref": "#/$defs/expression"
              },
              "kind": true,
              "name": true
            },
            "required": [
              "formula"
            ]
          }
        }
      ],
      "properties": {
        "kind": {
          "enum": [
            "slider",
            "dropdown",
            "toggle",
            "drag",
            "derived"
          ]
        },
        "name": {
          "$ref": "#/$defs/identifier"
        }
      },
      "required": [
        "kind",
        "name"
      ],
      "type": "object"
    },
    "transition": {
      "additionalProperties": false,
      "properties": {
        "control": {
          "$ref": "#/$defs/identifier"
        },
        "effect": {
          "$ref": "#/$defs/expression"
        }
      },
      "required": [
        "control"
      ],
      "type": "object"
    },
    "unit": {
      "additionalProperties": false,
      "properties": {
        "id": {
          "pattern": "^[A-Za-z0-9][A-Za-z0-9_-]*$",
          "type": "string"
        },
        "interaction": {
          "$ref": "#/$defs/interaction"
        },
        "summary": {
          "minLength": 1,
          "type": "string"
        },
        "text_description": {
          "minLength": 1,
          "type": "string"
        }
      },
      "required": [
        "id",
        "summary",
        "text_description",
        "interaction"
      ],
      "type": "object"
    }
  },
  "$id": "https://docweave.dev/schemas/docspec.schema.json",
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "additionalProperties": false,
  "description": "A topic plus an ordered list of knowledge units, each pairing explanatory text guidance with one declarative interaction spec.",
  "properties": {
    "spec_version": {
      "const": "1.0"
    },
    "topic": {
      "minLength": 1,
      "type": "string"
    },
    "units": {
      "items": {
        "$ref": "#/$defs/unit"
      },
      "minItems": 1,
      "type": "array"
    }
  },
  "required": [
    "spec_version",
    "topic",
    "units"
  ],
  "title": "DocSpec",
  "type": "object"
} as const;
