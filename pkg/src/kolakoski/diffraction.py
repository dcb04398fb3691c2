"""Fourier-Bohr amplitudes of limit-periodic letter sets and of Kol(2m, 2n).

Frequencies are exact ``Fraction`` objects throughout. Phases are evaluated
from the reduced residue ``(k * s) mod den`` so no large trigonometric
arguments occur. Only the final amplitudes are floating point.
"""

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log2

import numpy as np

from . import kernels
from .constant_length import DerivedSubstitution, constant_length_substitution, cyclic_factor_order, default_seed
from .errors import ValidationError
from .exact import distinct_primes
from .model_set import coset_decomposition
from .substitution import fixed_point_prefix, is_constant_length, kolakoski_prefix

_QUARTER_TURNS = (1 + 0j, -1j, -1 + 0j, 1j)


def unit_root(num, den):
    """exp(-2 pi i num/den), exact when den divides 4."""
    num %= den
    if 4 % den == 0:
        return _QUARTER_TURNS[num * (4 // den)]
    return cmath.exp(-2j * cmath.pi * (num / den))


def _as_fraction(f):
    return f if isinstance(f, Fraction) else Fraction(f)


@dataclass(frozen=True)
class ScatteringAssignment:
    """Complex scattering strength per letter; ``atomic`` holds (c_p, c_q) at Kolakoski level."""

    labels: tuple
    weights: tuple
    atomic: tuple | None = None

    def __post_init__(self):
        if len(self.labels) != len(self.weights):
            raise ValueError("one weight per letter required")
        if not all(cmath.isfinite(complex(w)) for w in self.weights):
            raise ValueError("weights must be finite")

    def array(self):
        return np.array(self.weights, dtype=np.complex128)

    def __getitem__(self, label):
        return self.weights[self.labels.index(label)]


def indicator(sub, letter):
    """Weight 1 on ``letter`` and 0 elsewhere."""
    sub = sub.sub if isinstance(sub, DerivedSubstitution) else sub
    i = sub.letter_id(letter)
    return ScatteringAssignment(sub.labels, tuple(1 + 0j if j == i else 0j for j in range(sub.size)))


@dataclass(frozen=True)
class AutocorrelationEstimate:
    z: int
    value: complex
    n: int


def autocorrelation(prefix, weights, z):
    """(1/(N-|z|)) sum conj(nu(u_n)) nu(u_{n+z}) over the valid n of the prefix."""
    u = np.asarray(prefix, dtype=np.int64)
    if abs(z) >= u.size:
        raise ValueError(f"|z| = {abs(z)} must be below the prefix length {u.size}")
    w = weights.array() if isinstance(weights, ScatteringAssignment) else np.asarray(weights, dtype=np.complex128)
    return AutocorrelationEstimate(z, kernels.autocorrelation(u, w, z), int(u.size))


def block_weights(derived, c_p, c_q, kappa):
    """Letter weights c_i(kappa) = sum_j c'_{x_j} exp(-2 pi i kappa j) over the atoms x_j of letter i.

    ``kappa`` is the frequency in atomic units. Phase sums are accumulated per
    atom before multiplying by the weights, so cancelling phases give exact zeros.
    """
    if not isinstance(derived, DerivedSubstitution):
        derived = constant_length_substitution(derived)
    kappa = _as_fraction(kappa)
    p, q = derived.params.p, derived.params.q
    out = []
    for atoms in derived.expansion:
        sums = {p: 0j, q: 0j}
        for j, x in enumerate(atoms):
            sums[x] += unit_root(kappa.numerator * j, kappa.denominator)
        out.append(c_p * sums[p] + c_q * sums[q])
    return ScatteringAssignment(derived.sub.labels, tuple(out), (c_p, c_q))


def fourier_coset(coset, f):
    """Fourier-Bohr coefficient of the indicator of ell^r Z + s at frequency f."""
    f = _as_fraction(f)
    if coset.modulus % f.denominator:
        return 0j
    return unit_root(f.numerator * coset.residue, f.denominator) / coset.modulus


def _coset_arrays(dec):
    moduli = np.array([c.modulus for c in dec.cosets], dtype=np.int64)
    residues = np.array([c.residue for c in dec.cosets], dtype=np.int64)
    return moduli, residues


def coset_sum(dec, f):
    """Sum of fourier_coset over all cosets of a decomposition."""
    f = _as_fraction(f)
    moduli, residues = _coset_arrays(dec)
    sel = moduli % f.denominator == 0
    if not sel.any():
        return 0j
    r = (residues[sel] * (f.numerator % f.denominator)) % f.denominator
    if 4 % f.denominator == 0:
        phases = np.array([_QUARTER_TURNS[x * (4 // f.denominator)] for x in r.tolist()])
    else:
        phases = np.exp(-2j * np.pi * (r / f.denominator))
    return complex(np.sum(phases / moduli[sel]))


def exponential_sum(prefix, weights, f):
    """(1/N) sum_n nu(u_n) exp(-2 pi i f n) over the prefix."""
    f = _as_fraction(f)
    w = weights.array() if isinstance(weights, ScatteringAssignment) else np.asarray(weights, dtype=np.complex128)
    u = np.asarray(prefix, dtype=np.int64)
    return kernels.exp_sum(u, w, f.numerator, f.denominator)


@dataclass(frozen=True)
class BraggPeak:
    frequency: Fraction
    amplitude: complex
    truncation_error: float
    atomic_frequency: Fraction | None = None
    oracle: complex | None = field(default=None, compare=False)

    @property
    def intensity(self):
        return abs(self.amplitude) ** 2

    @property
    def oracle_delta(self):
        return None if self.oracle is None else abs(self.amplitude - self.oracle)


def decompositions(sub, depth):
    """coset_decomposition for every letter of ``sub``."""
    sub = sub.sub if isinstance(sub, DerivedSubstitution) else sub
    return [coset_decomposition(sub, i, depth) for i in range(sub.size)]


def bragg_amplitude(decs, weights, f):
    """Amplitude sum_i c_i sum_cosets fourier_coset at f, with the bound sum_i |c_i| residual_i."""
    f = _as_fraction(f)
    amp = 0j
    err = 0.0
    for dec, c in zip(decs, weights.weights):
        if c == 0:
            continue
        amp += c * coset_sum(dec, f)
        err += abs(c) * float(dec.residual_density)
    return BraggPeak(f, amp, err)


@dataclass(frozen=True)
class SupportDescriptor:
    """Frequencies k / (2^eps * prod p^s) for p | m+n, 0 <= eps <= eps_max (atomic units)."""

    m: int
    n: int
    primes: tuple
    cyclic_order: int

    @property
    def eps_max(self):
        return int(log2(self.cyclic_order))

    def contains(self, kappa):
        d = _as_fraction(kappa).denominator
        for p in self.primes:
            while d % p == 0:
                d //= p
        return d in (1 << e for e in range(self.eps_max + 1))

    def describe(self):
        base = " ".join(f"{p}^s{i + 1}" for i, p in enumerate(self.primes))
        if self.eps_max:
            return f"{{k / (2^eps {base}) : k in Z, eps <= {self.eps_max}}}"
        return f"{{k / ({base}) : k in Z}}"

    def to_json(self):
        return {"primes": list(self.primes), "cyclic_order": self.cyclic_order, "eps_max": self.eps_max}


def bragg_support(params):
    m, n = params.even_pair()
    return SupportDescriptor(m, n, tuple(distinct_primes(m + n)), cyclic_factor_order(m, n))


@dataclass(frozen=True)
class EffectiveSupport:
    gcds: dict
    refined: bool


def effective_support_gcd(sub, n, seed=None):
    """Per letter, gcd of the gaps between its occurrences in the fixed-point prefix.

    ``refined`` is set when some gcd shares a factor with ell, i.e. the
    letter's peaks live on a coarser set than k / ell^s.
    """
    sub = sub.sub if isinstance(sub, DerivedSubstitution) else sub
    ell = is_constant_length(sub)
    if ell is None:
        raise ValidationError("constant length required")
    if n < ell**3:
        raise ValueError(f"prefix length must be at least ell^3 = {ell**3}")
    seed = default_seed(sub) if seed is None else sub.letter_id(seed)
    u = fixed_point_prefix(sub, seed, n)
    g = kernels.occurrence_gcd(u, sub.size)
    gcds = {sub.labels[i]: int(g[i]) for i in range(sub.size)}
    return EffectiveSupport(gcds, any(gcd(x, ell) > 1 for x in gcds.values()))


def _atomic_frequencies(ell, max_s):
    seen = set()
    out = []
    for s in range(max_s + 1):
        den = 4 * ell**s
        for k in range(den):
            kappa = Fraction(k, den)
            if kappa not in seen:
                seen.add(kappa)
                out.append(kappa)
    return sorted(out)


def atomic_amplitude(derived, decs, c_p, c_q, kappa):
    """Amplitude of the Kolakoski sequence with weights (c_p, c_q) at atomic frequency kappa.

    Each block letter covers 4 atoms, so A(kappa) = (1/4) sum_i c_i(kappa) A_i(4 kappa).
    """
    kappa = _as_fraction(kappa)
    weights = block_weights(derived, c_p, c_q, kappa)
    peak = bragg_amplitude(decs, weights, 4 * kappa)
    return BraggPeak(4 * kappa, peak.amplitude / 4, peak.truncation_error / 4, kappa)


def diffraction_spectrum(params, c_p, c_q, max_depth=8, max_denom=2, oracle_n=None, include_all=False):
    """Bragg peaks of Kol(2m, 2n) at atomic frequencies k / (4 ell^s), s <= max_denom, in [0, 1).

    Peaks whose magnitude does not exceed the truncation bound are dropped
    unless ``include_all``. With ``oracle_n`` each peak carries the exponential
    sum over the first ``oracle_n`` letters of the sequence.
    """
    derived = constant_length_substitution(params)
    decs = decompositions(derived.sub, max_depth)
    u = values = None
    if oracle_n:
        values = kolakoski_prefix(params, oracle_n)
        u = (values == params.q).astype(np.int64)
    peaks = []
    for kappa in _atomic_frequencies(derived.ell, max_denom):
        peak = atomic_amplitude(derived, decs, c_p, c_q, kappa)
        if not include_all and abs(peak.amplitude) <= peak.truncation_error:
            continue
        if u is not None:
            oracle = kernels.exp_sum(u, np.array([c_p, c_q], dtype=np.complex128), kappa.numerator, kappa.denominator)
            peak = BraggPeak(peak.frequency, peak.amplitude, peak.truncation_error, kappa, oracle)
        peaks.append(peak)
    return peaks
