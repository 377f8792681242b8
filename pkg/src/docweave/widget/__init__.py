"""Self-contained interactive HTML widgets compiled from interaction specs."""

from .compiler import (
    PLOT_SAMPLES,
    WidgetError,
    WidgetFragment,
    compile_widget,
    render_initial_state,
)
from .contract import validate_widget_contract
from .jscodegen import format_fixed, js_expr

__all__ = [
    "PLOT_SAMPLES",
    "WidgetError",
    "WidgetFragment",
    "compile_widget",
    "format_fixed",
    "js_expr",
    "render_initial_state",
    "validate_widget_contract",
]
