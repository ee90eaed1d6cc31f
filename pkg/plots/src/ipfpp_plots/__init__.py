from .figures import (
    FIGURE_KINDS,
    FigureSpec,
    SchemaError,
    model,
    read_fit,
    read_grid,
    read_slice,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_KINDS",
    "FigureSpec",
    "SchemaError",
    "model",
    "read_fit",
    "read_grid",
    "read_slice",
    "render",
    "__version__",
]
