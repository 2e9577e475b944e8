"""User interface components for ppbound."""

from ppbound.ui.render import (
    bound_table,
    census_table,
    display_analysis,
    display_case,
    preperiodic_table,
    scan_table,
    verification_table,
)

__all__ = [
    "bound_table",
    "census_table",
    "display_analysis",
    "display_case",
    "preperiodic_table",
    "scan_table",
    "verification_table",
]
