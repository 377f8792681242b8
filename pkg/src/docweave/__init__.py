"""docweave: interactive explainer documents from declarative interaction specs."""

__version__ = "0.1.0"
