from .figures import KINDS, FigureRequest, PlotError, render

__all__ = ["KINDS", "FigureRequest", "PlotError", "render"]
