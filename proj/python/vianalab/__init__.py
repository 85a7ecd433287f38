"""Numerical laboratory for skew products of an expanding circle map with a
quadratic family: Lyapunov exponents, hyperbolic times, Ulam transfer-operator
discretizations and finite-model equilibrium states."""

try:
    from ._vianalab import *  # noqa: F401,F403
    from ._vianalab import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: extension next to the package on sys.path
    from _vianalab import *  # noqa: F401,F403

__version__ = "0.1.0"
