"""Constant-length substitutions for Kol(2m, 2n) and their spectral tests.

Every Kol(2m, 2n) is built from two super-blocks X (from A^m B^m) and
Y (from A^n B^n) with X -> X^m Y^m and Y -> X^n Y^n; numbering the letters
inside the blocks and cutting the images into pieces of length m + n yields
the constant-length substitutions below. Heights, coincidences and the
coincidence matrix then decide pure point spectrum.
"""

from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import InternalConsistencyError, ParameterError, ValidationError
from .exact import boolean_powers, charpoly, distinct_primes, int_matpow, root_multiplicity
from .substitution import (
    KolParams,
    Substitution,
    fixed_point_prefix,
    is_constant_length,
    position_gcd_of,
    prefix_stable_letters,
)

KINDS = ("blocked", "numbered", "theta", "theta_tilde")


@dataclass(frozen=True)
class DerivedSubstitution:
    """A substitution derived from Kol(2m, 2n) with the atomic content of each letter.

    ``expansion[i]`` lists the Kolakoski letters (2m or 2n) that letter ``i``
    stands for.
    """

    kind: str
    params: KolParams
    sub: Substitution
    expansion: tuple

    @property
    def ell(self):
        return is_constant_length(self.sub)

    def expand(self, word):
        """Kolakoski letter values of a word over this alphabet."""
        table = [np.array(e, dtype=np.int64) for e in self.expansion]
        if len(word) == 0:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([table[i] for i in np.asarray(word)])


def _split_blocks(word, size):
    return [tuple(word[i : i + size]) for i in range(0, len(word), size)]


def _block_images(x_letters, y_letters, m, n, ell):
    """Images of the letters of X and Y under X -> X^m Y^m, Y -> X^n Y^n cut into length ell."""
    x, y = list(x_letters), list(y_letters)
    x_img = _split_blocks(x * m + y * m, ell)
    y_img = _split_blocks(x * n + y * n, ell)
    if len(x_img) != len(x) or len(y_img) != len(y):
        raise InternalConsistencyError("block images do not match the block sizes")
    return dict(zip(x + y, x_img + y_img))


def _merge(labels, rules, expansion, keep, drop):
    """Identify letter ``drop`` with ``keep``; both must have the same image and content."""
    if rules[drop] != rules[keep] or expansion[drop] != expansion[keep]:
        raise InternalConsistencyError(f"cannot identify {labels[drop]} with {labels[keep]}: images differ")
    remap = {}
    for old in range(len(labels)):
        if old == drop:
            remap[old] = remap[keep] if keep < drop else None
        else:
            remap[old] = old - (1 if old > drop else 0)
    if remap[drop] is None:
        remap[drop] = remap[keep]
    new_labels = tuple(lab for i, lab in enumerate(labels) if i != drop)
    new_rules = tuple(tuple(remap[x] for x in img) for i, img in enumerate(rules) if i != drop)
    new_exp = tuple(e for i, e in enumerate(expansion) if i != drop)
    return new_labels, new_rules, new_exp


def block_substitution(params):
    """sigma: A -> A^m B^m, B -> A^n B^n with A = pp, B = qq."""
    m, n = params.even_pair()
    sub = Substitution(("A", "B"), ((0,) * m + (1,) * m, (0,) * n + (1,) * n), f"sigma{params}")
    expansion = ((params.p, params.p), (params.q, params.q))
    return DerivedSubstitution("blocked", params, sub, expansion)


def numbered_substitution(params, reduce=True):
    """Constant-length m+n substitution on the numbered letters A_i, B_i.

    Alphabet order: A_1..A_m, B_1..B_m, A_{m+1}..A_{m+n}, B_{m+1}..B_{m+n}.
    With ``reduce`` the letter A_{m+1} is identified with A_1.
    """
    m, n = params.even_pair()
    ell = m + n
    x = [f"A{i}" for i in range(1, m + 1)] + [f"B{i}" for i in range(1, m + 1)]
    y = [f"A{i}" for i in range(m + 1, ell + 1)] + [f"B{i}" for i in range(m + 1, ell + 1)]
    labels = tuple(x + y)
    index = {lab: i for i, lab in enumerate(labels)}
    images = _block_images(x, y, m, n, ell)
    rules = tuple(tuple(index[s] for s in images[lab]) for lab in labels)
    expansion = tuple((params.p, params.p) if lab[0] == "A" else (params.q, params.q) for lab in labels)
    if reduce:
        labels, rules, expansion = _merge(labels, rules, expansion, index["A1"], index[f"A{m + 1}"])
    sub = Substitution(labels, rules, f"numbered{params}")
    return DerivedSubstitution("numbered", params, sub, expansion)


def _theta_core(params):
    m, n = params.even_pair()
    ell = m + n
    x = [f"a{i}" for i in range(1, m + 1)]
    y = [f"b{i}" for i in range(1, n + 1)]
    labels = tuple(x + y)
    index = {lab: i for i, lab in enumerate(labels)}
    images = _block_images(x, y, m, n, ell)
    rules = tuple(tuple(index[s] for s in images[lab]) for lab in labels)
    # X = p^{2m} q^{2m}, Y = p^{2n} q^{2n}; every lower-case letter covers 4 atoms
    x_atoms = [params.p] * (2 * m) + [params.q] * (2 * m)
    y_atoms = [params.p] * (2 * n) + [params.q] * (2 * n)
    expansion = tuple(_split_blocks(x_atoms, 4) + _split_blocks(y_atoms, 4))
    return labels, rules, expansion, index


def theta(params):
    """The constant-length m+n substitution over a_1..a_m, b_2..b_n (n > 1, b_1 = a_1)."""
    m, n = params.even_pair()
    if n == 1:
        raise ParameterError("theta needs n > 1; use theta_tilde for n = 1")
    labels, rules, expansion, index = _theta_core(params)
    labels, rules, expansion = _merge(labels, rules, expansion, index["a1"], index["b1"])
    return DerivedSubstitution("theta", params, Substitution(labels, rules, f"theta{params}"), expansion)


def theta_tilde(m):
    """The constant-length m+1 substitution over a_1..a_m, b_1 (the n = 1 case)."""
    if isinstance(m, KolParams):
        params = m
    else:
        params = KolParams.from_mn(m, 1)
    mm, n = params.even_pair()
    if n != 1:
        raise ParameterError("theta_tilde needs n = 1; use theta for n > 1")
    labels, rules, expansion, _ = _theta_core(params)
    return DerivedSubstitution("theta_tilde", params, Substitution(labels, rules, f"theta~{params}"), expansion)


def constant_length_substitution(params):
    """theta_tilde for n = 1, theta otherwise."""
    _, n = params.even_pair()
    return theta_tilde(params) if n == 1 else theta(params)


def derive(params, kind):
    if kind == "blocked":
        return block_substitution(params)
    if kind == "numbered":
        return numbered_substitution(params)
    if kind in ("theta", "theta_tilde", "constant"):
        return constant_length_substitution(params)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")


def _as_sub(sub):
    return sub.sub if isinstance(sub, DerivedSubstitution) else sub


def _require_constant(sub):
    ell = is_constant_length(sub)
    if ell is None:
        raise ValidationError(f"{sub.name or 'substitution'} is not of constant length")
    return ell


def default_seed(sub):
    """First prefix-stable letter (the one-sided fixed point starts with it)."""
    seeds = prefix_stable_letters(_as_sub(sub))
    if not seeds:
        raise ValidationError("no prefix-stable letter; pass an explicit seed or use a power")
    return seeds[0]


def _prefix_length(ell, depth):
    return ell**depth


def position_gcd(sub, letter, depth):
    """gcd of the return positions i > 0 of ``letter`` in its own fixed point, prefix ell^depth."""
    sub = _as_sub(sub)
    ell = _require_constant(sub)
    seed = sub.letter_id(letter)
    u = fixed_point_prefix(sub, seed, _prefix_length(ell, depth))
    g = position_gcd_of(u)
    if g == 0:
        raise ValidationError(f"{sub.labels[seed]} does not recur within a prefix of length {u.size}")
    return g


@dataclass(frozen=True)
class HeightResult:
    g: int | None
    h: int | None
    depth_used: int
    stable: bool


def _coprime_part(g, ell):
    h = g
    while (d := gcd(h, ell)) > 1:
        h //= d
    return h


def _divisors_descending(n):
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]), reverse=True)


def _returns_divisible(sub, seed, modulus):
    """Whether every position of ``seed`` in its fixed point is divisible by ``modulus``.

    Positions are read as base-ell numerals (most significant digit first)
    driving the automaton x -> rho(x)[d]; the walk tracks (letter, value mod modulus).
    """
    ell = len(sub.rules[0])
    start = (seed, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        x, v = queue.popleft()
        if x == seed and v:
            return False
        for d in range(ell):
            nxt = (sub.rules[x][d], (v * ell + d) % modulus)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def return_gcd(sub, seed, first_return):
    """Exact gcd of all return positions of ``seed``, given any one positive return position."""
    for g in _divisors_descending(first_return):
        if _returns_divisible(sub, seed, g):
            return g
    raise InternalConsistencyError("no divisor of the first return passes; 1 always should")


def height(sub, seed=None, max_length=2_000_000, min_length=64):
    """Height: largest divisor of the return-position gcd that is coprime to ell.

    The gcd is recomputed on prefixes of length ell^d for increasing d until it
    is unchanged between two consecutive depths and agrees with the exact value
    from the position automaton. Otherwise the result is flagged unstable.
    """
    sub = _as_sub(sub)
    ell = _require_constant(sub)
    seed = default_seed(sub) if seed is None else sub.letter_id(seed)
    if ell == 1:
        raise ValidationError("length-1 substitutions have no nontrivial fixed point")
    depth = 1
    while ell ** (depth + 1) < min_length:
        depth += 1
    previous = None
    exact = None
    while ell**depth <= max_length:
        u = fixed_point_prefix(sub, seed, ell**depth)
        g = position_gcd_of(u)
        if g and exact is None:
            exact = return_gcd(sub, seed, int(np.flatnonzero(u[1:] == seed)[0]) + 1)
        if g and g == previous and g == exact:
            return HeightResult(g, _coprime_part(g, ell), depth, True)
        previous = g or None
        depth += 1
    return HeightResult(previous, None, depth - 1, False)


@dataclass(frozen=True)
class CoincidenceCertificate:
    """Column ``digits`` (base ell, most significant first) of sub^k is constant = ``letter``."""

    k: int
    digits: tuple
    letter: int

    def column_index(self, ell):
        j = 0
        for d in self.digits:
            j = j * ell + d
        return j

    def replay(self, sub, letters=None):
        """Letters reached by walking the digit path from each starting letter."""
        sub = _as_sub(sub)
        letters = range(sub.size) if letters is None else letters
        out = []
        for x in letters:
            for d in self.digits:
                x = sub.rules[x][d]
            out.append(x)
        return out

    def verify(self, sub, letters=None):
        return set(self.replay(sub, letters)) == {self.letter}


def pairwise_coincidence(sub, s, t):
    """Shortest (then lexicographically smallest) digit path merging letters s and t.

    Breadth-first search over unordered letter pairs; None when no path exists.
    """
    sub = _as_sub(sub)
    ell = _require_constant(sub)
    s, t = sub.letter_id(s), sub.letter_id(t)
    if s == t:
        return CoincidenceCertificate(0, (), s)
    start = (min(s, t), max(s, t))
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        x, y = state
        for d in range(ell):
            a, b = sub.rules[x][d], sub.rules[y][d]
            nxt = (min(a, b), max(a, b))
            if nxt in parent:
                continue
            parent[nxt] = (state, d)
            if a == b:
                path = []
                node = nxt
                while parent[node] is not None:
                    node, digit = parent[node]
                    path.append(digit)
                path.reverse()
                return CoincidenceCertificate(len(path), tuple(path), a)
            queue.append(nxt)
    return None


def _walk(sub, letters, digits):
    out = set()
    for x in letters:
        for d in digits:
            x = sub.rules[x][d]
        out.add(x)
    return out


def full_coincidence(sub, check_height=True):
    """A column of some power of ``sub`` on which all letters agree, built pair by pair.

    The column set starts as the whole alphabet; while it has two letters, the
    digit path is extended by a pairwise certificate for its two smallest
    letters. Returns None if some pair never coincides.
    """
    sub = _as_sub(sub)
    _require_constant(sub)
    if check_height:
        hr = height(sub)
        if not hr.stable or hr.h != 1:
            raise ValidationError(f"coincidence test needs height 1, got {hr}")
    column = set(range(sub.size))
    digits = []
    while len(column) > 1:
        x, y = sorted(column)[:2]
        cert = pairwise_coincidence(sub, x, y)
        if cert is None:
            return None
        digits.extend(cert.digits)
        column = _walk(sub, column, cert.digits)
    (letter,) = column
    return CoincidenceCertificate(len(digits), tuple(digits), letter)


def minimal_coincidence(sub, max_states=1_000_000):
    """Shortest, then lexicographically smallest, coincidence by search over letter subsets."""
    sub = _as_sub(sub)
    ell = _require_constant(sub)
    start = frozenset(range(sub.size))
    if len(start) == 1:
        return CoincidenceCertificate(0, (), next(iter(start)))
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for d in range(ell):
            nxt = frozenset(sub.rules[x][d] for x in state)
            if nxt in parent:
                continue
            parent[nxt] = (state, d)
            if len(nxt) == 1:
                path = []
                node = nxt
                while parent[node] is not None:
                    node, digit = parent[node]
                    path.append(digit)
                path.reverse()
                return CoincidenceCertificate(len(path), tuple(path), next(iter(nxt)))
            if len(parent) > max_states:
                raise RuntimeError("subset search exceeded max_states")
            queue.append(nxt)
    return None


def coincidence_bound(derived):
    """k bound of the pairwise induction: 3m for theta_tilde, 2(m+n-2) for theta."""
    m, n = derived.params.even_pair()
    if derived.kind == "theta_tilde":
        return 3 * m
    if derived.kind == "theta":
        return 2 * (m + n - 2)
    raise ValueError(f"no coincidence bound for kind {derived.kind!r}")


def pair_order(size):
    """Diagonal pairs in alphabet order, then off-diagonal pairs lexicographically."""
    return [(i, i) for i in range(size)] + [(i, j) for i in range(size) for j in range(i + 1, size)]


@dataclass(frozen=True)
class CoincidenceMatrix:
    """The pair-indexed counting matrix; row (s,t), column {u,v} counts j with {sub(s)_j, sub(t)_j} = {u,v}."""

    labels: tuple
    pairs: tuple
    entries: tuple
    ell: int

    @property
    def dim(self):
        return len(self.pairs)

    def pair_labels(self):
        return [f"({self.labels[a]},{self.labels[b]})" for a, b in self.pairs]

    def as_lists(self):
        return [list(row) for row in self.entries]

    def power(self, k):
        return int_matpow(self.as_lists(), k)

    def charpoly(self):
        return charpoly(self.as_lists())


def coincidence_matrix(sub):
    sub = _as_sub(sub)
    ell = _require_constant(sub)
    pairs = pair_order(sub.size)
    index = {pr: i for i, pr in enumerate(pairs)}
    rows = []
    for s, t in pairs:
        row = [0] * len(pairs)
        for d in range(ell):
            a, b = sub.rules[s][d], sub.rules[t][d]
            row[index[(min(a, b), max(a, b))]] += 1
        rows.append(tuple(row))
    return CoincidenceMatrix(sub.labels, tuple(pairs), tuple(rows), ell)


@dataclass(frozen=True)
class SpectralVerdict:
    pure_point: bool
    ell: int
    positive_column: tuple | None  # (k, column pair) for the first power with a positive column
    charpoly: tuple
    multiplicity: int


def spectral_verdict(sub, max_power=None):
    """Pure point test for a constant-length substitution of height 1.

    Reports two checks: a strictly positive column in some power of the
    coincidence matrix C, and the exact multiplicity of ell as a root of
    det(xI - C). The verdict is the second; the first must imply it.
    """
    sub = _as_sub(sub)
    ell = _require_constant(sub)
    hr = height(sub)
    if not hr.stable:
        raise ValidationError("height computation did not stabilise")
    if hr.h != 1:
        raise ValidationError(f"height {hr.h} > 1; block letters into groups of {hr.h} first")
    cm = coincidence_matrix(sub)
    r = sub.size
    kmax = max(r * r, 3 * r) if max_power is None else max_power
    positive = None
    for k, support in boolean_powers(cm.as_lists(), kmax):
        cols = np.flatnonzero(support.all(axis=0))
        if cols.size:
            positive = (k, cm.pairs[int(cols[0])])
            break
    cp = cm.charpoly()
    mult = root_multiplicity(cp, ell)
    pure = mult == 1
    if positive is not None and not pure:
        raise InternalConsistencyError(
            f"C^{positive[0]} has a positive column but ell={ell} has multiplicity {mult}"
        )
    return SpectralVerdict(pure, ell, positive, tuple(cp), mult)


@dataclass(frozen=True)
class SpectrumReport:
    level: str
    ell: int
    ladic_primes: tuple
    cyclic_order: int
    pure_point: bool | None

    def describe(self):
        parts = [f"Z_{p}" for p in self.ladic_primes]
        if self.cyclic_order > 1:
            parts.append(f"Z/{self.cyclic_order}Z")
        return " × ".join(parts)


def cyclic_factor_order(m, n, level="kolakoski"):
    """Order of the finite cyclic factor of the pure point spectrum."""
    s = m + n
    if level == "sigma":
        return 2 if s % 2 else 1
    if level == "kolakoski":
        return {0: 1, 1: 4, 2: 2, 3: 4}[s % 4]
    raise ValueError(f"unknown level {level!r}")


def spectrum_report(params, level="kolakoski", check=True):
    """Spectrum of the sigma system or of Kol(2m, 2n) itself.

    With ``check`` the sigma-level order is cross-checked against the computed
    height of the numbered substitution, and pure point is decided by
    spectral_verdict on theta / theta_tilde.
    """
    m, n = params.even_pair()
    order = cyclic_factor_order(m, n, level)
    pure = None
    if check:
        hr = height(numbered_substitution(params))
        if hr.h != cyclic_factor_order(m, n, "sigma"):
            raise InternalConsistencyError(f"numbered height {hr.h} disagrees with m+n={m + n}")
        pure = spectral_verdict(constant_length_substitution(params)).pure_point
    return SpectrumReport(level, m + n, tuple(distinct_primes(m + n)), order, pure)

