"""Kernel dispatch. The compiled extension is used when it imports, the
pure-Python module otherwise. RSWORK_PURE_PYTHON=1 forces the fallback."""
import os

import numpy as np

from . import _kernels_py

UNDEFINED = _kernels_py.UNDEFINED
OVERFLOW = _kernels_py.OVERFLOW

_impl = _kernels_py
if os.environ.get("RSWORK_PURE_PYTHON", "") not in {"1", "true", "yes"}:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def find_nonassociative(table):
    return _impl.find_nonassociative(_i64(table))


def natural_leq_matrix(table, lam):
    return _impl.natural_leq_matrix(_i64(table), _i64(lam))


def find_ample_violation(table, proj):
    return _impl.find_ample_violation(_i64(table), _i64(proj))


def find_order_split_violation(table, lam, rho, leq):
    return _impl.find_order_split_violation(_i64(table), _i64(lam), _i64(rho),
                                         np.ascontiguousarray(leq, dtype=bool))


def find_category_assoc_violation(comp):
    return _impl.find_category_assoc_violation(_i64(comp))


def find_left_cancel_violation(comp):
    return _impl.find_left_cancel_violation(_i64(comp))


def conv_accumulate(xs, ys, zs, f, g, out):
    if out.dtype == object:
        for x, y, z in zip(xs, ys, zs):
            out[z] += f[x] * g[y]
        return
    _impl.conv_accumulate(_i64(xs), _i64(ys), _i64(zs),
                          np.ascontiguousarray(f, dtype=complex),
                          np.ascontiguousarray(g, dtype=complex), out)
