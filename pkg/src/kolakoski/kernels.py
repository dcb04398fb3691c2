"""Hot-loop dispatch: the compiled Cython core when built, numpy/Python otherwise."""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]


def get_backend(name=None):
    """Kernel module by name (``"cython"`` or ``"python"``); default is the active one."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


def kolakoski_self(p, q, n):
    return _impl.kolakoski_self(p, q, n)


def kolakoski_alternating(p, q, n):
    return _impl.kolakoski_alternating(p, q, n)


def run_lengths(a):
    return _impl.run_lengths(a)


def exp_sum(u, weights, num, den):
    return _impl.exp_sum(u, weights, num, den)


def autocorrelation(u, weights, z):
    return _impl.autocorrelation(u, weights, z)


def occurrence_gcd(u, size):
    return _impl.occurrence_gcd(u, size)
