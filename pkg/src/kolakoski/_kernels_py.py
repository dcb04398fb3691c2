"""Pure-Python/numpy versions of the hot loops.

Signatures match the compiled ``_kernels`` module one for one; ``kernels``
picks whichever is importable.
"""

import math

import numpy as np


def kolakoski_self(p, q, n):
    """First ``n`` letters of Kol(p, q), read off its own run lengths."""
    a = []
    i = 0
    while len(a) < n:
        x = p if i % 2 == 0 else q
        length = a[i] if i < len(a) else x
        a.extend([x] * length)
        i += 1
    return np.array(a[:n], dtype=np.int64)


def kolakoski_alternating(p, q, n):
    """First ``n`` letters of Kol(p, q) by iterating sigma_0 / sigma_1.

    Letters on even positions x become p^x, on odd positions q^x.  For p == 1
    the one-letter seed is a fixed point of the iteration, so the seed is
    ``p q`` instead.
    """
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    w = [p] if p > 1 else [p, q]
    while len(w) < n:
        new = []
        for idx, x in enumerate(w):
            new.extend([p if idx % 2 == 0 else q] * x)
            if len(new) >= n:
                break
        if len(new) <= len(w):
            raise RuntimeError("alternating iteration does not grow")
        w = new
    return np.array(w[:n], dtype=np.int64)


def run_lengths(a):
    """Lengths of all maximal runs of ``a``, the final (possibly cut) run included."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros(0, dtype=np.int64)
    breaks = np.flatnonzero(a[1:] != a[:-1]) + 1
    edges = np.concatenate(([0], breaks, [a.size]))
    return np.diff(edges).astype(np.int64)


def exp_sum(u, weights, num, den):
    """(1/N) sum_n weights[u_n] exp(-2 pi i num n / den), phases from reduced residues."""
    u = np.asarray(u, dtype=np.int64)
    n = u.size
    if n == 0:
        return 0j
    w = np.asarray(weights, dtype=np.complex128)
    r = (np.arange(n, dtype=np.int64) * (num % den)) % den
    phase = np.exp(-2j * np.pi * (r / den))
    return complex(np.sum(w[u] * phase) / n)


def autocorrelation(u, weights, z):
    """(1/(N-|z|)) sum_n conj(w[u_n]) w[u_{n+z}] over all valid n."""
    u = np.asarray(u, dtype=np.int64)
    n = u.size
    w = np.asarray(weights, dtype=np.complex128)
    v = w[u]
    if z >= 0:
        left, right = v[: n - z], v[z:]
    else:
        left, right = v[-z:], v[: n + z]
    return complex(np.sum(np.conj(left) * right) / (n - abs(z)))


def occurrence_gcd(u, size):
    """Per letter id < size: gcd of gaps between successive occurrences (0 if < 2 hits)."""
    u = np.asarray(u, dtype=np.int64)
    out = np.zeros(size, dtype=np.int64)
    for letter in range(size):
        pos = np.flatnonzero(u == letter)
        if pos.size >= 2:
            out[letter] = math.gcd(*np.diff(pos).tolist())
    return out
