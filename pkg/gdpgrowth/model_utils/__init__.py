from .metrics import band_coverage, correlation, rmse
from .search import golden_section_search, grid_search

__all__ = ["band_coverage", "correlation", "rmse", "golden_section_search", "grid_search"]
