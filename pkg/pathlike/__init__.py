"""Path-like length integrals on constant-curvature surfaces."""

__version__ = "0.1.0"
