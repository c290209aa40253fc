"""Pick the branch-and-bound kernel at import time.

The compiled ``_bnb_ext`` is preferred; set ``ACCESSNET_PURE_PYTHON=1`` to
force the interpreted fallback.
"""

import os

from . import _bnb_py

OPTIMAL = _bnb_py.OPTIMAL
INFEASIBLE = _bnb_py.INFEASIBLE
BUDGET = _bnb_py.BUDGET

search_py = _bnb_py.search
search_ext = None

try:
    from ._bnb_ext import search as search_ext
except ImportError:
    pass

if search_ext is not None and not os.environ.get("ACCESSNET_PURE_PYTHON"):
    search = search_ext
    KERNEL = "cython"
else:
    search = search_py
    KERNEL = "python"
