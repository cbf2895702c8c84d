"""Catalog of non-isomorphic four-message problems with their reference sum rates."""

from .catalog import (
    CATALOG_SIZE,
    catalog_number,
    filter_catalog,
    get_entry,
    get_problem,
    load_catalog,
)

__all__ = [
    "CATALOG_SIZE",
    "catalog_number",
    "filter_catalog",
    "get_entry",
    "get_problem",
    "load_catalog",
]
