"""Differential geometry of curve pairs on strict Walker 3-manifolds."""

try:
    from ._walker import *  # noqa: F401,F403  (installed layout)
except ImportError:  # build-tree layout: extension sits on PYTHONPATH
    from _walker import *  # noqa: F401,F403
