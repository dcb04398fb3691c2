"""Letter-position sets of constant-length fixed points as unions of lattice cosets.

For a constant-length substitution with fixed point u, the set U_i of positions
carrying letter i satisfies U_i = union of (ell * U_j + k) over all j, k with
rho(j)_k = i. Iterating this recursion exhausts U_i by cosets ell^r Z + s whose
column in rho^r is constant.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .constant_length import DerivedSubstitution, cyclic_factor_order, default_seed
from .errors import InternalConsistencyError, ValidationError
from .exact import distinct_primes, left_eigenvectors, primitivity_exponent
from .substitution import fixed_point_prefix, is_constant_length, substitution_matrix

# rho^r columns are kept as (ell^r, size) arrays; refuse anything larger
MAX_COLUMNS = 1 << 23


def _as_sub(sub):
    return sub.sub if isinstance(sub, DerivedSubstitution) else sub


def _require_ell(sub):
    ell = is_constant_length(sub)
    if ell is None:
        raise ValidationError(f"{sub.name or 'substitution'} is not of constant length")
    return ell


@dataclass(frozen=True, order=True)
class LatticeCoset:
    """The arithmetic progression ell^r Z + residue."""

    r: int
    residue: int
    ell: int

    def __post_init__(self):
        if self.ell < 2 or self.r < 0:
            raise ValueError("need ell >= 2 and r >= 0")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} not reduced mod {self.modulus}")

    @property
    def modulus(self):
        return self.ell**self.r

    @property
    def density(self):
        return Fraction(1, self.modulus)

    def __contains__(self, x):
        return x % self.modulus == self.residue

    def members(self, n):
        """Nonnegative members below ``n``."""
        return np.arange(self.residue, n, self.modulus, dtype=np.int64)

    def digits(self):
        """Base-ell digits of the residue, least significant first, length r."""
        s, out = self.residue, []
        for _ in range(self.r):
            s, d = divmod(s, self.ell)
            out.append(d)
        return tuple(out)

    def contains_coset(self, other):
        return other.r >= self.r and other.residue % self.modulus == self.residue

    def disjoint(self, other):
        a, b = (self, other) if self.r <= other.r else (other, self)
        return not a.contains_coset(b)

    def __str__(self):
        if self.r == 0:
            return "Z"
        return f"{self.modulus}Z+{self.residue}"

    def to_json(self):
        return {"r": self.r, "modulus": self.modulus, "residue": self.residue}


@dataclass(frozen=True)
class IfsSystem:
    """U_i = union of ell * U_j + k over the branches (j, k) of letter i."""

    labels: tuple
    ell: int
    branches: tuple  # branches[i] = ((j, k), ...) sorted

    def branch_count(self):
        return sum(len(b) for b in self.branches)

    def describe(self):
        lines = []
        for i, br in enumerate(self.branches):
            terms = [f"{self.ell} U_{self.labels[j]}" + (f"+{k}" if k else "") for j, k in br]
            lines.append(f"U_{self.labels[i]} = " + (" ∪ ".join(terms) if terms else "∅"))
        return "\n".join(lines)


def ifs_system(sub):
    sub = _as_sub(sub)
    ell = _require_ell(sub)
    branches = [[] for _ in range(sub.size)]
    for j, img in enumerate(sub.rules):
        for k, i in enumerate(img):
            branches[i].append((j, k))
    return IfsSystem(sub.labels, ell, tuple(tuple(sorted(b)) for b in branches))


@lru_cache(maxsize=16)
def _constant_columns(sub, depth):
    """For r = 1..depth: array over s < ell^r with the common letter of column s of rho^r, or -1."""
    ell = _require_ell(sub)
    if ell**depth > MAX_COLUMNS:
        raise ValidationError(f"depth {depth} needs {ell}^{depth} columns; limit is {MAX_COLUMNS}")
    rules = np.array(sub.rules, dtype=np.int64)
    # cols[s, i] = rho^r(i)_s; rho^{r+1}(i)_{d ell^r + s} = rho^r(rho(i)_d)_s
    cols = rules.T.copy()
    out = []
    for r in range(1, depth + 1):
        if r > 1:
            cols = cols[:, rules.T].transpose(1, 0, 2).reshape(-1, sub.size)
        first = cols[:, 0]
        const = np.where((cols == first[:, None]).all(axis=1), first, -1)
        const.setflags(write=False)
        out.append(const)
    return tuple(out)


def column_letters(sub, r):
    """Common letter of each column of rho^r (-1 where the column is not constant)."""
    sub = _as_sub(sub)
    if r == 0:
        return np.array([0 if sub.size == 1 else -1], dtype=np.int64)
    return _constant_columns(sub, r)[r - 1]


@dataclass(frozen=True)
class CosetDecomposition:
    letter: int
    label: str
    ell: int
    cosets: tuple
    depth: int
    covered_density: Fraction
    frequency: Fraction

    @property
    def residual_density(self):
        return self.frequency - self.covered_density

    def to_json(self):
        return {
            "letter": self.label,
            "ell": self.ell,
            "depth": self.depth,
            "cosets": [c.to_json() for c in self.cosets],
            "covered_density": self.covered_density,
            "residual": self.residual_density,
        }


def coset_decomposition(sub, letter, max_depth):
    """Maximal cosets ell^r Z + s (r <= max_depth) on which the fixed point carries ``letter``.

    A coset is listed at the first level where its column of rho^r is
    constant; its sub-cosets are not listed again. Ordered by level, then residue.
    """
    sub = _as_sub(sub)
    ell = _require_ell(sub)
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    target = sub.letter_id(letter)
    levels = _constant_columns(sub, max_depth)
    covered = np.zeros(1, dtype=bool)
    cosets = []
    total = Fraction(0)
    for r, const in enumerate(levels, start=1):
        covered = np.tile(covered, ell)
        resolved = const >= 0
        fresh = resolved & ~covered
        hits = np.flatnonzero(fresh & (const == target))
        cosets.extend(LatticeCoset(r, int(s), ell) for s in hits)
        total += Fraction(hits.size, ell**r)
        covered |= resolved
    freq = letter_frequencies(sub)[target]
    if total > freq:
        raise InternalConsistencyError(f"covered density {total} exceeds frequency {freq}")
    return CosetDecomposition(target, sub.labels[target], ell, tuple(cosets), max_depth, total, freq)


def unresolved_density(sub, depth):
    """Density of residues mod ell^depth whose column has never become constant."""
    sub = _as_sub(sub)
    ell = _require_ell(sub)
    const = _constant_columns(sub, depth)[-1]
    return Fraction(int(np.count_nonzero(const < 0)), ell**depth)


@dataclass(frozen=True)
class CosetVerification:
    checked: int
    violations: tuple  # (position, found letter id)
    empirical_frequency: float
    covered_density: Fraction
    residual_density: Fraction

    @property
    def ok(self):
        return not self.violations

    @property
    def frequency_gap(self):
        """Empirical frequency minus the covered density; compare with residual_density."""
        return self.empirical_frequency - float(self.covered_density)


def verify_cosets_against_prefix(sub, dec, n, seed=None, max_violations=100):
    """Check every coset member below ``n`` against the fixed-point prefix."""
    sub = _as_sub(sub)
    seed = default_seed(sub) if seed is None else sub.letter_id(seed)
    moduli = [c.modulus for c in dec.cosets]
    if moduli and n < max(moduli):
        raise ValueError(f"prefix length {n} is shorter than the largest modulus {max(moduli)}")
    u = fixed_point_prefix(sub, seed, n)
    violations = []
    checked = 0
    for c in dec.cosets:
        pos = c.members(n)
        checked += pos.size
        bad = pos[u[pos] != dec.letter]
        violations.extend((int(x), int(u[x])) for x in bad[: max_violations - len(violations)])
    emp = float(np.count_nonzero(u == dec.letter)) / n
    return CosetVerification(checked, tuple(violations), emp, dec.covered_density, dec.residual_density)


def letter_frequencies(sub):
    """Normalised left Perron eigenvector of the substitution matrix, as exact rationals.

    The eigenvalue is the common ratio |rho(i)|-weighted, which is ell for
    constant length and m+n for the blocked two-letter substitution.
    """
    sub = _as_sub(sub)
    mat = substitution_matrix(sub)
    if primitivity_exponent(mat) is None:
        raise ValidationError("letter frequencies need a primitive substitution")
    lens = [len(img) for img in sub.rules]
    ratios = {Fraction(sum(row[j] * lens[j] for j in range(sub.size)), lens[i]) for i, row in enumerate(mat)}
    if len(ratios) != 1:
        raise ValidationError("image lengths are not a Perron eigenvector; no exact eigenvalue known")
    lam = ratios.pop()
    basis = left_eigenvectors(mat, lam)
    if len(basis) != 1:
        raise InternalConsistencyError(f"Perron eigenspace has dimension {len(basis)}")
    v = basis[0]
    total = sum(v)
    return tuple(x / total for x in v)


@dataclass(frozen=True)
class CutProjectDescriptor:
    physical: str
    internal_primes: tuple
    cyclic_order: int
    lattice: str

    def internal(self):
        parts = [f"Z_{p}" for p in self.internal_primes]
        if self.cyclic_order > 1:
            parts.append(f"Z/{self.cyclic_order}Z")
        return " × ".join(parts)

    def to_json(self):
        return {
            "physical": self.physical,
            "internal": self.internal(),
            "internal_primes": list(self.internal_primes),
            "cyclic_order": self.cyclic_order,
            "lattice": self.lattice,
        }


def cut_project_descriptor(params):
    """Scheme for Kol(2m, 2n): Z with internal group Z_{m+n} x F, lattice diagonal plus z mod ord(F)."""
    m, n = params.even_pair()
    order = cyclic_factor_order(m, n, "kolakoski")
    lattice = "{(z, z)}" if order == 1 else f"{{(z, z, z mod {order})}}"
    return CutProjectDescriptor("Z", tuple(distinct_primes(m + n)), order, lattice)


def substitution_scheme(sub):
    """Scheme for a constant-length fixed point: internal group Z_ell, diagonal lattice."""
    ell = _require_ell(_as_sub(sub))
    return CutProjectDescriptor("Z", tuple(distinct_primes(ell)), 1, "{(z, z)}")
