"""Exact integer/rational linear algebra used by the spectral tests.

The characteristic polynomial is computed multimodularly: Hessenberg reduction
modulo word-sized primes, recombined by the Chinese remainder theorem against
an a-priori coefficient bound. No floating point is involved anywhere.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, prod

import numpy as np

# products of two residues stay below 2**52; row dot products of up to 2**11
# such terms stay below 2**63
_PRIME_CEILING = 1 << 26
_MAX_DIM = 1 << 11


def _is_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.4e14
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _primes_below_ceiling(count):
    out = []
    candidate = _PRIME_CEILING - 1
    while len(out) < count:
        if _is_prime(candidate):
            out.append(candidate)
        candidate -= 2
    return tuple(out)


def distinct_primes(n):
    """Sorted distinct prime divisors of a positive integer."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _as_int_rows(a):
    rows = [[int(x) for x in row] for row in a]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    return rows


def _charpoly_mod(rows, p):
    n = len(rows)
    h = np.array(rows, dtype=np.int64) % p
    # reduce to upper Hessenberg form by similarity transforms
    for m in range(1, n - 1):
        col = h[m:, m - 1]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            h[[i, m], :] = h[[m, i], :]
            h[:, [i, m]] = h[:, [m, i]]
        inv = pow(int(h[m, m - 1]), -1, p)
        u = (h[m + 1 :, m - 1] * inv) % p
        if not u.any():
            continue
        h[m + 1 :, :] = (h[m + 1 :, :] - np.outer(u, h[m, :]) % p) % p
        h[:, m] = (h[:, m] + (h[:, m + 1 :] @ u) % p) % p
    # polys stored lowest degree first
    polys = [np.array([1], dtype=np.int64)]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = np.zeros(k + 1, dtype=np.int64)
        cur[1:] = prev
        cur[:k] = (cur[:k] - prev * int(h[k - 1, k - 1])) % p
        t = 1
        for i in range(1, k):
            t = t * int(h[k - i, k - i - 1]) % p
            if t == 0:
                break
            coef = t * int(h[k - i - 1, k - 1]) % p
            if coef:
                other = polys[k - i - 1]
                cur[: other.size] = (cur[: other.size] - other * coef) % p
        polys.append(cur)
    return polys[n]


def charpoly(a):
    """Characteristic polynomial det(xI - A) of an integer matrix.

    Returns the coefficient list, highest degree first (monic).
    """
    rows = _as_int_rows(a)
    n = len(rows)
    if n == 0:
        return [1]
    if n > _MAX_DIM:
        raise ValueError(f"dimension {n} exceeds {_MAX_DIM}")
    rho = max(sum(abs(x) for x in row) for row in rows)
    bound = max(comb(n, k) * rho**k for k in range(n + 1))
    count = 1
    while prod(_primes_below_ceiling(count)) <= 2 * bound:
        count += 1
    primes = _primes_below_ceiling(count)
    modulus = prod(primes)
    coeffs = [0] * (n + 1)
    for p in primes:
        residues = _charpoly_mod(rows, p)
        cofactor = modulus // p
        lift = cofactor * pow(cofactor, -1, p)
        for k in range(n + 1):
            coeffs[k] += int(residues[k]) * lift
    out = []
    for c in coeffs:
        c %= modulus
        if c > modulus // 2:
            c -= modulus
        out.append(c)
    return out[::-1]


def poly_mul(a, b):
    """Product of two coefficient lists (highest degree first)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_from_roots(roots):
    """Monic integer polynomial with the given roots (multiset)."""
    out = [1]
    for r in roots:
        out = poly_mul(out, [1, -r])
    return out


def root_multiplicity(coeffs, root):
    """Multiplicity of ``root`` as a zero of an integer polynomial (exact)."""
    coeffs = list(coeffs)
    if not any(coeffs):
        raise ValueError("zero polynomial")
    mult = 0
    while len(coeffs) > 1:
        quotient = [coeffs[0]]
        for c in coeffs[1:]:
            quotient.append(c + quotient[-1] * root)
        if quotient.pop() != 0:
            break
        coeffs = quotient
        mult += 1
    return mult


def format_poly(coeffs, var="x"):
    terms = []
    deg = len(coeffs) - 1
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = deg - i
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        body = str(mag) if (mag != 1 or e == 0) else ""
        if body and mono:
            body += "*"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body + mono))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, t in terms[1:]:
        text += f" {sign} {t}"
    return text


def int_matmul(a, b):
    """Exact product of two integer matrices (Python ints, no overflow)."""
    return (np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)).tolist()


def int_matpow(a, k):
    result = np.identity(len(a), dtype=int).astype(object)
    base = np.asarray(a, dtype=object)
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result.tolist()


def boolean_powers(a, kmax):
    """Yield (k, support of A^k) for k = 1..kmax as boolean arrays."""
    base = np.asarray(a) != 0
    cur = base.copy()
    for k in range(1, kmax + 1):
        yield k, cur
        cur = (cur.astype(np.int64) @ base.astype(np.int64)) > 0


def primitivity_exponent(a, kmax=None):
    """Smallest k with A^k strictly positive, or None within Wielandt's bound."""
    r = len(a)
    if kmax is None:
        kmax = (r - 1) ** 2 + 1
    for k, support in boolean_powers(a, kmax):
        if support.all():
            return k
    return None


def nullspace(a):
    """Basis of the right nullspace of a rational matrix (Fraction Gauss-Jordan)."""
    rows = [[Fraction(x) for x in row] for row in a]
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def left_eigenvectors(a, eigenvalue):
    """Basis of {v : v A = eigenvalue v} over the rationals."""
    n = len(a)
    shifted_t = [[Fraction(a[j][i]) - (eigenvalue if i == j else 0) for j in range(n)] for i in range(n)]
    return nullspace(shifted_t)
