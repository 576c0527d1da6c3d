"""LOS-channel capacity scaling: cooperative MIMO bounds, hierarchical
cooperation planning, and Monte Carlo lemma checks (C++ core)."""

try:
    from ._core import *  # noqa: F401,F403  (installed wheel layout)
    from ._core import __version__  # noqa: F401
except ImportError:  # in-tree builds put _core next to the package on sys.path
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
