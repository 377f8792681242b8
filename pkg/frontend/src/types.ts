/** Plain JSON shapes of the document spec, as served and accepted over HTTP.
 *
 * These mirror the wire format exactly; optional fields keep their wire
 * defaults (`effectOf`, `decimalsOf`, `toleranceOf` below apply them).
 */

export interface SliderVar {
  kind: "slider";
  name: string;
  min: number;
  max: number;
  step: number;
  default: number;
}

export interface DropdownOption {
  label: string;
  value: number;
}

export interface DropdownVar {
  kind: "dropdown";
  name: string;
  options: DropdownOption[];
  default_index: number;
}

export interface ToggleVar {
  kind: "toggle";
  name: string;
  default: boolean;
}

export interface DragVar {
  kind: "drag";
  name: string;
  x_min: number;
  x_max: number;
  y_min: number;
  y_max: number;
  default: [number, number];
}

export interface DerivedVar {
  kind: "derived";
  name: string;
  formula: string;
}

export type StateVariable = SliderVar | DropdownVar | ToggleVar | DragVar | DerivedVar;

/** A numeric literal or an expression source string. */
export type Binding = number | string;

export interface CirclePrim {
  kind: "circle";
  center_x: Binding;
  center_y: Binding;
  radius: Binding;
  color: string;
}

export interface RectPrim {
  kind: "rect";
  x: Binding;
  y: Binding;
  width: Binding;
  height: Binding;
  color: string;
}

export interface LinePrim {
  kind: "line";
  x1: Binding;
  y1: Binding;
  x2: Binding;
  y2: Binding;
  color: string;
}

export interface PolylinePrim {
  kind: "polyline";
  points: [Binding, Binding][];
  color: string;
}

export interface LabelPrim {
  kind: "label";
  x: Binding;
  y: Binding;
  text_template: string;
  color: string;
  decimals?: number;
}

export interface PlotPrim {
  kind: "plot";
  var: string;
  expr: string;
  x_min: number;
  x_max: number;
  color: string;
}

export type RenderPrimitive =
  | CirclePrim
  | RectPrim
  | LinePrim
  | PolylinePrim
  | LabelPrim
  | PlotPrim;

export interface RenderSpec {
  primitives: RenderPrimitive[];
  note?: string;
}

export interface TransitionRule {
  control: string;
  /** "direct", or an expression over the raw control `value`. */
  effect?: string;
}

export interface Constraint {
  predicate: string;
  tolerance?: number;
  description?: string;
}

export interface InteractionSpec {
  state: StateVariable[];
  render: RenderSpec;
  transitions: TransitionRule[];
  constraint?: Constraint;
}

export interface KnowledgeUnit {
  id: string;
  summary: string;
  text_description: string;
  interaction: InteractionSpec;
}

export interface DocSpec {
  spec_version: string;
  topic: string;
  units: KnowledgeUnit[];
}

export const effectOf = (t: TransitionRule): string => t.effect ?? "direct";
export const decimalsOf = (p: LabelPrim): number => p.decimals ?? 5;
export const toleranceOf = (c: Constraint): number => c.tolerance ?? 1e-3;

/** One thing wrong with a spec, anchored to a JSON-pointer-style path. */
export interface Violation {
  path: string;
  message: string;
  category: "syntax" | "schema" | "semantic";
}

export interface ValidationReport {
  ok: boolean;
  violations: Violation[];
}

export const cleanReport = (): ValidationReport => ({ ok: true, violations: [] });

/** A compiled widget fragment as returned by the compile endpoint. */
export interface WidgetFragment {
  container_id: string;
  html: string;
  style: string;
  script: string;
  manifest: [string, string][];
}

/** One changed field in a structured spec diff. */
export interface FieldChange {
  path: string;
  to: unknown;
  from?: unknown;
}

export interface UnitEdit {
  id: string;
  changes: FieldChange[];
}

export interface SpecDiff {
  changes?: FieldChange[];
  units?: {
    removed?: string[];
    added?: KnowledgeUnit[];
    edited?: UnitEdit[];
    order?: string[];
  };
}
