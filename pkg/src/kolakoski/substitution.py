"""Alphabets, words and substitution rules; Kolakoski generation and run-length coding.

Letters are dense integer ids with display labels; a word is a tuple of ids
(or an int64 array for long prefixes). Kolakoski sequences are handled as
arrays of their integer letter values, so run lengths compare to letters
directly. Positions are counted from 0.
"""

import json
import re
from collections import deque
from dataclasses import dataclass
from itertools import islice
from math import gcd

import numpy as np

from . import kernels
from .errors import ParameterError, ValidationError
from .exact import primitivity_exponent


@dataclass(frozen=True)
class Letter:
    id: int
    label: str


@dataclass(frozen=True)
class Substitution:
    """A substitution rule over the alphabet ``labels``.

    ``rules[i]`` is the image of letter ``i`` as a tuple of letter ids.
    """

    labels: tuple
    rules: tuple
    name: str = ""

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        rules = tuple(tuple(int(x) for x in img) for img in self.rules)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "rules", rules)
        if not labels:
            raise ValidationError("alphabet must not be empty")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate letter labels in {labels}")
        if len(rules) != len(labels):
            raise ValidationError(f"{len(labels)} letters but {len(rules)} rules")
        for i, img in enumerate(rules):
            if not img:
                raise ValidationError(f"image of {labels[i]!r} is empty")
            bad = [x for x in img if not 0 <= x < len(labels)]
            if bad:
                raise ValidationError(f"image of {labels[i]!r} uses unknown letter ids {bad}")

    @classmethod
    def from_mapping(cls, mapping, name=""):
        """Build from ``{label: image}``; images are label lists or parseable strings."""
        labels = tuple(str(k) for k in mapping)
        index = {lab: i for i, lab in enumerate(labels)}
        rules = []
        for lab, img in mapping.items():
            if isinstance(img, str):
                img = _split_word(img, labels)
            try:
                rules.append(tuple(index[str(x)] for x in img))
            except KeyError as exc:
                raise ValidationError(f"image of {lab!r} uses unknown letter {exc.args[0]!r}") from None
        return cls(labels, tuple(rules), name)

    @property
    def size(self):
        return len(self.labels)

    @property
    def letters(self):
        return tuple(Letter(i, lab) for i, lab in enumerate(self.labels))

    def letter_id(self, letter):
        """Id of a letter given by id, label or Letter."""
        if isinstance(letter, Letter):
            letter = letter.id
        if isinstance(letter, (int, np.integer)) and not isinstance(letter, bool):
            if not 0 <= letter < self.size:
                raise ValidationError(f"letter id {letter} out of range for {self.size} letters")
            return int(letter)
        try:
            return self.labels.index(str(letter))
        except ValueError:
            raise ValidationError(f"unknown letter {letter!r}") from None

    def word(self, text):
        """Parse a word: space-separated labels, or concatenated one-character labels."""
        return tuple(self.letter_id(x) for x in _split_word(text, self.labels))

    def format(self, word, sep=" "):
        return sep.join(self.labels[i] for i in word)

    def to_text(self):
        """One ``letter -> letter letter ...`` rule per line, in alphabet order."""
        return "".join(f"{lab} -> {self.format(img)}\n" for lab, img in zip(self.labels, self.rules))

    @classmethod
    def from_text(cls, text, name=""):
        mapping = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line:
                raise ValidationError(f"line {lineno}: expected 'letter -> letters', got {raw!r}")
            head, body = (part.strip() for part in line.split("->", 1))
            if not head or " " in head:
                raise ValidationError(f"line {lineno}: bad letter {head!r}")
            if head in mapping:
                raise ValidationError(f"line {lineno}: second rule for {head!r}")
            mapping[head] = body.split()
        if not mapping:
            raise ValidationError("no rules found")
        return cls.from_mapping(mapping, name)

    def to_json(self):
        return {
            "name": self.name,
            "alphabet": list(self.labels),
            "rules": {lab: [self.labels[i] for i in img] for lab, img in zip(self.labels, self.rules)},
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            alphabet = [str(x) for x in obj["alphabet"]]
            rules = obj["rules"]
            mapping = {lab: rules[lab] for lab in alphabet}
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed substitution JSON: {exc}") from None
        if set(rules) - set(alphabet):
            raise ValidationError(f"rules for letters outside the alphabet: {sorted(set(rules) - set(alphabet))}")
        return cls.from_mapping(mapping, obj.get("name", ""))

    def table(self):
        """Rule images as an (r, l) int64 array; constant length only."""
        ell = is_constant_length(self)
        if ell is None:
            raise ValidationError(f"{self.name or 'substitution'} is not of constant length")
        return np.array(self.rules, dtype=np.int64)


def _split_word(text, labels):
    text = text.strip()
    if not text:
        return []
    if re.search(r"\s", text):
        return text.split()
    if text in labels:
        return [text]
    if all(len(lab) == 1 for lab in labels):
        return list(text)
    raise ValidationError(f"cannot split {text!r}; separate multi-character labels by spaces")


def apply(sub, w):
    """Image of the word ``w`` (letter ids) under ``sub``."""
    out = []
    for x in w:
        if not 0 <= x < sub.size:
            raise ValidationError(f"letter id {x} not in alphabet of size {sub.size}")
        out.extend(sub.rules[x])
    return tuple(out)


def compose(outer, inner):
    """The substitution ``outer o inner`` (apply inner first); alphabets must agree."""
    if outer.labels != inner.labels:
        raise ValidationError("cannot compose substitutions over different alphabets")
    rules = tuple(apply(outer, img) for img in inner.rules)
    return Substitution(inner.labels, rules, f"{outer.name}∘{inner.name}")


def power(sub, k):
    """The k-fold iterate of ``sub`` (k >= 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    result = sub
    for _ in range(k - 1):
        result = compose(sub, result)
    return Substitution(sub.labels, result.rules, f"{sub.name}^{k}")


def substitution_matrix(sub):
    """M with M[i][j] = number of occurrences of letter j in the image of letter i."""
    m = [[0] * sub.size for _ in range(sub.size)]
    for i, img in enumerate(sub.rules):
        for j in img:
            m[i][j] += 1
    return m


def lengths(sub):
    return tuple(len(img) for img in sub.rules)


def is_constant_length(sub):
    """The common image length, or None if the lengths differ."""
    ls = set(lengths(sub))
    return ls.pop() if len(ls) == 1 else None


def primitivity_witness(sub):
    """Smallest k with M^k > 0, or None (searched up to Wielandt's bound)."""
    return primitivity_exponent(substitution_matrix(sub))


def is_primitive(sub):
    return primitivity_witness(sub) is not None


def prefix_stable_letters(sub):
    return [i for i, img in enumerate(sub.rules) if img[0] == i and len(img) > 1]


def _check_seed(sub, seed):
    seed = sub.letter_id(seed)
    img = sub.rules[seed]
    if img[0] != seed:
        raise ValidationError(
            f"seed {sub.labels[seed]!r} is not prefix-stable: its image starts with {sub.labels[img[0]]!r}"
        )
    if len(img) < 2:
        raise ValidationError(f"seed {sub.labels[seed]!r} maps to itself only; the prefix cannot grow")
    return seed


def fixed_point_prefix(sub, seed, n):
    """First ``n`` letters of the one-sided fixed point starting with ``seed`` (int64 array)."""
    seed = _check_seed(sub, seed)
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    if is_constant_length(sub) is not None:
        table = sub.table()
        u = np.array([seed], dtype=np.int64)
        while u.size < n:
            u = table[u].ravel()
        return u[:n].copy()
    return np.fromiter(islice(prefix_stream(sub, seed), n), dtype=np.int64, count=n)


def prefix_stream(sub, seed):
    """Lazily yield the letters of the fixed point seeded by ``seed``.

    Each fresh call restarts from the seed and yields the identical sequence.
    """
    seed = _check_seed(sub, seed)
    pending = deque(sub.rules[seed])
    produced = []
    read = 0
    while True:
        x = pending.popleft()
        produced.append(x)
        yield x
        if not pending:
            read += 1
            pending.extend(sub.rules[produced[read]])


@dataclass(frozen=True)
class KolParams:
    """Letters of Kol(p, q): p starts the sequence, p != q, both positive."""

    p: int
    q: int

    def __post_init__(self):
        for v in (self.p, self.q):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ParameterError(f"Kolakoski letters must be positive integers, got {v!r}")
        if self.p == self.q:
            raise ParameterError(f"Kol(p, q) needs p != q, got p = q = {self.p}")

    @classmethod
    def from_mn(cls, m, n):
        params = cls(2 * m, 2 * n)
        params.even_pair()
        return params

    @property
    def is_even(self):
        return self.p % 2 == 0 and self.q % 2 == 0

    def even_pair(self):
        """(m, n) with p = 2m, q = 2n and m > n >= 1, or ParameterError."""
        if not self.is_even:
            raise ParameterError(f"Kol({self.p},{self.q}) is not an even-even pair")
        m, n = self.p // 2, self.q // 2
        if not m > n >= 1:
            raise ParameterError(f"need m > n >= 1, got m={m}, n={n} (use Kol(q,p) for the mirrored case)")
        return m, n

    @property
    def m(self):
        return self.even_pair()[0]

    @property
    def n(self):
        return self.even_pair()[1]

    def swapped(self):
        return KolParams(self.q, self.p)

    def __str__(self):
        return f"Kol({self.p},{self.q})"


def kolakoski_substitutions(params):
    """The pair (sigma_0, sigma_1): sigma_0 sends x to p^x, sigma_1 sends x to q^x."""
    labels = (str(params.p), str(params.q))
    sigma0 = Substitution(labels, ((0,) * params.p, (0,) * params.q), "sigma0")
    sigma1 = Substitution(labels, ((1,) * params.p, (1,) * params.q), "sigma1")
    return sigma0, sigma1


def kolakoski_prefix(params, n, method="self"):
    """First ``n`` letters of the one-sided Kol(p, q) as an int64 array of letter values.

    ``method="self"`` reads the sequence off its own run lengths;
    ``method="alternating"`` iterates sigma_0 on even and sigma_1 on odd positions.
    """
    if n < 0:
        raise ParameterError("n must be >= 0")
    if method == "self":
        return kernels.kolakoski_self(params.p, params.q, n)
    if method == "alternating":
        return kernels.kolakoski_alternating(params.p, params.q, n)
    raise ValueError(f"unknown method {method!r}")


def kolakoski_iterates(params, count):
    """The first ``count`` words of the alternating iteration, starting from the seed."""
    p, q = params.p, params.q
    w = [p] if p > 1 else [p, q]
    out = [tuple(w)]
    for _ in range(count - 1):
        w = [x for idx, a in enumerate(w) for x in [p if idx % 2 == 0 else q] * a]
        out.append(tuple(w))
    return out


def kolakoski_bi_prefix(params, n):
    """``n`` letters on each side of the seamline of the two-sided Kol(p, q).

    Returns ``(left, right)``; ``left`` is read outward from the seamline and
    equals the one-sided Kol(q, p).
    """
    return kolakoski_prefix(params.swapped(), n), kolakoski_prefix(params, n)


def format_bi_prefix(left, right):
    """Display form ``...left reversed|right...``."""
    return f"{format_values(left[::-1])}|{format_values(right)}"


def kolakoski_stream(params, side="right"):
    """Generator over Kol(p, q) (``side="left"``: the mirrored half, i.e. Kol(q, p))."""
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    p, q = (params.p, params.q) if side == "right" else (params.q, params.p)
    seq = []
    i = 0
    while True:
        x = p if i % 2 == 0 else q
        length = seq[i] if i < len(seq) else x
        for _ in range(length):
            seq.append(x)
            yield x
        i += 1


def format_values(values):
    vals = [int(v) for v in values]
    sep = "" if all(0 <= v < 10 for v in vals) else " "
    return sep.join(str(v) for v in vals)


def run_length_encode(w, drop_last=True):
    """Run lengths of ``w``.

    With ``drop_last`` the final run is omitted, since a prefix may cut it short.
    """
    runs = kernels.run_lengths(np.asarray(w, dtype=np.int64))
    return runs[:-1] if drop_last and runs.size else runs


@dataclass(frozen=True)
class SelfEncodingReport:
    ok: bool
    first_mismatch: int | None
    compared: int


def check_self_encoding(values):
    """Compare a sequence of letter values with its own run lengths on their overlap."""
    values = np.asarray(values, dtype=np.int64)
    enc = run_length_encode(values)
    k = min(enc.size, values.size)
    bad = np.flatnonzero(enc[:k] != values[:k])
    first = int(bad[0]) if bad.size else None
    return SelfEncodingReport(first is None, first, k)


def verify_self_encoding(params, n):
    return check_self_encoding(kolakoski_prefix(params, n))


def parity_substitution(params):
    """Four-letter substitution over {p, p~, q, q~} separating even and odd positions."""
    m, n = params.even_pair()
    p, q = str(params.p), str(params.q)
    pt, qt = p + "\u0303", q + "\u0303"
    labels = (p, pt, q, qt)
    rules = (
        (0, 1) * m,
        (2, 3) * m,
        (0, 1) * n,
        (2, 3) * n,
    )
    return Substitution(labels, rules, f"parity{params}")


def position_gcd_of(values, target=None):
    """gcd of all i > 0 with values[i] == values[0] (or == target); 0 if none."""
    values = np.asarray(values)
    target = values[0] if target is None else target
    pos = np.flatnonzero(values[1:] == target) + 1
    return gcd(*pos.tolist()) if pos.size else 0
