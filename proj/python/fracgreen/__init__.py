"""Fractional Dirichlet problems with measure data on the unit ball."""

try:
    from ._fracgreen import *  # noqa: F401,F403  (installed layout)
    from ._fracgreen import __doc__ as _doc
except ImportError:  # build-tree layout: extension module on sys.path
    from _fracgreen import *  # noqa: F401,F403
    from _fracgreen import __doc__ as _doc

__doc__ = _doc

__all__ = [
    "FracParams",
    "FracgreenError",
    "GreenTable",
    "Grid",
    "OperatorTable",
    "ProblemSpec",
    "apply_operator",
    "assemble_operator",
    "build_green",
    "critical_sweep",
    "fractional_normal_limit",
    "grid",
    "green_apply_atom",
    "green_apply_density",
    "green_kernel_ball",
    "normalization_constant",
    "normalization_constant_fourier",
    "params",
    "parse_spec",
    "solve",
    "w1q_norm",
    "weak_residual",
]
