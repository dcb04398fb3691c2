# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; see _kernels_py for the reference semantics."""

import numpy as np

from libc.math cimport cos, sin, M_PI


def kolakoski_self(long long p, long long q, Py_ssize_t n):
    cdef Py_ssize_t cap = n + (p if p > q else q) + 1
    out = np.empty(cap, dtype=np.int64)
    cdef long long[::1] a = out
    cdef Py_ssize_t filled = 0, i = 0, j
    cdef long long x, length
    while filled < n:
        x = p if i % 2 == 0 else q
        length = a[i] if i < filled else x
        for j in range(length):
            a[filled + j] = x
        filled += length
        i += 1
    return out[:n].copy()


def kolakoski_alternating(long long p, long long q, Py_ssize_t n):
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    cdef Py_ssize_t cap = n + (p if p > q else q) + 2
    buf_a = np.empty(cap, dtype=np.int64)
    buf_b = np.empty(cap, dtype=np.int64)
    cdef long long[::1] w = buf_a
    cdef long long[::1] nxt = buf_b
    cdef long long[::1] tmp
    cdef Py_ssize_t length, new_len, idx, j
    cdef long long x, letter
    w[0] = p
    length = 1
    if p == 1:
        w[1] = q
        length = 2
    while length < n:
        new_len = 0
        for idx in range(length):
            x = w[idx]
            letter = p if idx % 2 == 0 else q
            for j in range(x):
                nxt[new_len + j] = letter
            new_len += x
            if new_len >= n:
                break
        if new_len <= length:
            raise RuntimeError("alternating iteration does not grow")
        tmp = w
        w = nxt
        nxt = tmp
        length = new_len
    return np.asarray(w)[:n].copy()


def run_lengths(a):
    arr = np.ascontiguousarray(a, dtype=np.int64)
    cdef long long[::1] v = arr
    cdef Py_ssize_t n = v.shape[0], i, k = 0
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] r = out
    if n == 0:
        return out
    cdef long long count = 1
    for i in range(1, n):
        if v[i] == v[i - 1]:
            count += 1
        else:
            r[k] = count
            k += 1
            count = 1
    r[k] = count
    return out[: k + 1].copy()


def exp_sum(u, weights, long long num, long long den):
    arr = np.ascontiguousarray(u, dtype=np.int64)
    wts = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef long long[::1] v = arr
    cdef double[::1] wre = np.ascontiguousarray(wts.real)
    cdef double[::1] wim = np.ascontiguousarray(wts.imag)
    cdef Py_ssize_t n = v.shape[0], i
    if n == 0:
        return 0j
    cdef long long step = num % den
    if step < 0:
        step += den
    cdef long long r = 0
    cdef double ang, c, s, acc_re = 0.0, acc_im = 0.0
    cdef long long letter
    for i in range(n):
        ang = -2.0 * M_PI * (<double> r) / (<double> den)
        c = cos(ang)
        s = sin(ang)
        letter = v[i]
        acc_re += wre[letter] * c - wim[letter] * s
        acc_im += wre[letter] * s + wim[letter] * c
        r += step
        if r >= den:
            r -= den
    return complex(acc_re / n, acc_im / n)


def autocorrelation(u, weights, long long z):
    arr = np.ascontiguousarray(u, dtype=np.int64)
    wts = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef long long[::1] v = arr
    cdef double[::1] wre = np.ascontiguousarray(wts.real)
    cdef double[::1] wim = np.ascontiguousarray(wts.imag)
    cdef Py_ssize_t n = v.shape[0], i, lo, hi
    cdef long long a, b
    cdef double acc_re = 0.0, acc_im = 0.0
    lo = -z if z < 0 else 0
    hi = n - z if z > 0 else n
    for i in range(lo, hi):
        a = v[i]
        b = v[i + z]
        # conj(w_a) * w_b
        acc_re += wre[a] * wre[b] + wim[a] * wim[b]
        acc_im += wre[a] * wim[b] - wim[a] * wre[b]
    return complex(acc_re / (n - (z if z > 0 else -z)), acc_im / (n - (z if z > 0 else -z)))


cdef long long _gcd(long long a, long long b):
    while b:
        a, b = b, a % b
    return a


def occurrence_gcd(u, Py_ssize_t size):
    arr = np.ascontiguousarray(u, dtype=np.int64)
    cdef long long[::1] v = arr
    out = np.zeros(size, dtype=np.int64)
    cdef long long[::1] g = out
    last_arr = np.full(size, -1, dtype=np.int64)
    cdef long long[::1] last = last_arr
    cdef Py_ssize_t n = v.shape[0], i
    cdef long long letter
    for i in range(n):
        letter = v[i]
        if last[letter] >= 0:
            g[letter] = _gcd(g[letter], i - last[letter])
        last[letter] = i
    return out
