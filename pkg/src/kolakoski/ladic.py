"""ℓ-adic addresses and Euclidean pictures of Z_ℓ.

A digit string t_0 … t_r names the cylinder K_{t_0…t_r}, i.e. the coset
ℓ^{r+1} Z + Σ t_i ℓ^i. Cylinders are drawn as nested copies of a contracted
regular ℓ-gon (2D) or as nested Cantor-style intervals (1D) and coloured by
the letter the fixed point carries on the corresponding coset.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .constant_length import DerivedSubstitution
from .errors import ConfigurationError, ValidationError
from .model_set import LatticeCoset, column_letters
from .substitution import is_constant_length

KISSING_NUMBER = {1: 2, 2: 6}


def valuation(t, ell):
    """Largest v with ell^v dividing the nonzero integer t."""
    if t == 0:
        raise ValueError("valuation of 0 is undefined")
    if ell < 2:
        raise ValueError("ell must be >= 2")
    v = 0
    while t % ell == 0:
        t //= ell
        v += 1
    return v


def metric_abs(t, ell):
    """|t|_ell = ell^(-v(t)), with |0| = 0."""
    if t == 0:
        return Fraction(0)
    return Fraction(1, ell ** valuation(t, ell))


@dataclass(frozen=True)
class LAdicAddress:
    ell: int
    digits: tuple

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("ell must be >= 2")
        if any(not 0 <= d < self.ell for d in self.digits):
            raise ValueError(f"digits {self.digits} out of range for ell={self.ell}")

    @property
    def level(self):
        return len(self.digits)

    @property
    def residue(self):
        return sum(d * self.ell**i for i, d in enumerate(self.digits))

    def coset(self):
        return LatticeCoset(self.level, self.residue, self.ell)

    def children(self):
        return [LAdicAddress(self.ell, self.digits + (d,)) for d in range(self.ell)]

    def label(self):
        sep = "" if self.ell <= 10 else "."
        return sep.join(str(d) for d in self.digits)


def hensel_digits(s, ell, r):
    """The r+1 base-ell digits of 0 <= s < ell^(r+1), least significant first."""
    if not 0 <= s < ell ** (r + 1):
        raise ValueError(f"{s} is outside [0, {ell}^{r + 1})")
    digits = []
    for _ in range(r + 1):
        s, d = divmod(s, ell)
        digits.append(d)
    return LAdicAddress(ell, tuple(digits))


def _as_sub(sub):
    return sub.sub if isinstance(sub, DerivedSubstitution) else sub


def cell_letter(sub, addr):
    """Letter id carried on the whole coset of ``addr``, or None when the cell is mixed."""
    sub = _as_sub(sub)
    if is_constant_length(sub) != addr.ell:
        raise ValidationError(f"address base {addr.ell} does not match the substitution length")
    letter = int(column_letters(sub, addr.level)[addr.residue])
    return None if letter < 0 else letter


def representable(ell, dimension):
    """Whether Z_ell gets the nested-copy picture in R^dimension: d+1 <= ell <= kissing(d)+1."""
    return dimension in KISSING_NUMBER and dimension + 1 <= ell <= KISSING_NUMBER[dimension] + 1


@dataclass(frozen=True)
class EmbeddingSpec:
    """Geometry of the picture: anchors on a regular ell-gon (2D) or a (2ell-1)-fold subdivision (1D)."""

    ell: int
    dimension: int = 2
    contraction: Fraction = Fraction(3, 10)
    size: int = 800

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ConfigurationError("dimension must be 1 or 2")
        if not representable(self.ell, self.dimension):
            hi = KISSING_NUMBER[self.dimension] + 1
            raise ConfigurationError(
                f"Z_{self.ell} has no nested-copy picture in R^{self.dimension}; need ell in [{self.dimension + 1}, {hi}]"
            )
        c = Fraction(self.contraction)
        object.__setattr__(self, "contraction", c)
        if self.dimension == 2:
            if not 0 < c < Fraction(1, 3):
                raise ConfigurationError("2D contraction must lie in (0, 1/3)")
            dmin, diam = self._spacing()
            if not float(c) < dmin / (dmin + diam):
                raise ConfigurationError(f"contraction {c} lets level-1 cells overlap for ell={self.ell}")

    def _spacing(self):
        dmin = 2 * math.sin(math.pi / self.ell)
        diam = 2 * math.sin(math.pi * (self.ell // 2) / self.ell)
        return dmin, diam

    def vertices(self):
        return [
            (math.cos(math.pi / 2 + 2 * math.pi * k / self.ell), math.sin(math.pi / 2 + 2 * math.pi * k / self.ell))
            for k in range(self.ell)
        ]


@dataclass(frozen=True)
class CellGeometry:
    """A cell: its anchor point plus a polygon (2D) or an interval (1D), in model coordinates."""

    point: tuple
    shape: tuple


def embed(addr, spec):
    if addr.ell != spec.ell:
        raise ConfigurationError("address and embedding use different bases")
    c = float(spec.contraction)
    if spec.dimension == 2:
        verts = spec.vertices()
        x = y = 0.0
        for i, d in enumerate(addr.digits):
            x += c**i * verts[d][0]
            y += c**i * verts[d][1]
        scale = c**addr.level / (1 - c)
        polygon = tuple((x + scale * vx, y + scale * vy) for vx, vy in verts)
        return CellGeometry((x, y), polygon)
    parts = 2 * spec.ell - 1
    lo, width = Fraction(0), Fraction(1)
    for d in addr.digits:
        width /= parts
        lo += 2 * d * width
    mid = float(lo + width / 2)
    return CellGeometry((mid,), (float(lo), float(lo + width)))


@dataclass(frozen=True)
class ColorMap:
    colors: dict
    mixed: str = "#f5f0e1"

    def __post_init__(self):
        values = list(self.colors.values())
        if len(set(values)) != len(values):
            raise ConfigurationError("each letter needs its own colour")
        if self.mixed in values:
            raise ConfigurationError("mixed-cell colour clashes with a letter colour")

    def color(self, label):
        return self.mixed if label is None else self.colors[label]


_GRAYS = ("#000000", "#555555", "#bbbbbb")


def default_colors(labels):
    if not labels:
        raise ConfigurationError("empty alphabet")
    if len(labels) <= len(_GRAYS):
        return ColorMap(dict(zip(labels, _GRAYS)))
    step = 0xDD / (len(labels) - 1)
    return ColorMap({lab: "#" + f"{round(i * step):02x}" * 3 for i, lab in enumerate(labels)})


@dataclass(frozen=True)
class Cell:
    address: LAdicAddress
    letter: int | None
    label: str | None = field(default=None)


def cell_layout(sub, depth):
    """Cells to draw: single-letter cylinders at their coarsest level, mixed ones at ``depth``."""
    sub = _as_sub(sub)
    ell = is_constant_length(sub)
    if ell is None:
        raise ValidationError("constant length required")
    if sub.size == 0:
        raise ValidationError("empty alphabet")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cells = []
    stack = [LAdicAddress(ell, ())]
    while stack:
        addr = stack.pop()
        letter = cell_letter(sub, addr) if addr.level else None
        if letter is not None:
            cells.append(Cell(addr, letter, sub.labels[letter]))
        elif addr.level == depth:
            cells.append(Cell(addr, None, None))
        else:
            stack.extend(addr.children())
    cells.sort(key=lambda cell: (cell.address.level, cell.address.digits))
    return cells


def color_fractions(cells):
    """Haar measure of the area per colour: sum of ell^-level, keyed by letter label (None for mixed)."""
    out = {}
    for cell in cells:
        out[cell.label] = out.get(cell.label, Fraction(0)) + Fraction(1, cell.address.ell**cell.address.level)
    return out


def _fmt(x):
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render(sub, depth, spec=None, colors=None, title=None):
    """Standalone SVG of the cells of ``cell_layout``; output is byte-deterministic."""
    sub = _as_sub(sub)
    ell = is_constant_length(sub)
    if ell is None:
        raise ValidationError("constant length required")
    spec = spec or EmbeddingSpec(ell)
    if spec.ell != ell:
        raise ConfigurationError("embedding base differs from the substitution length")
    colors = colors or default_colors(sub.labels)
    missing = [lab for lab in sub.labels if lab not in colors.colors]
    if missing:
        raise ConfigurationError(f"no colour for letters {missing}")
    cells = cell_layout(sub, depth)
    size = spec.size
    margin = 20
    if spec.dimension == 2:
        width = height = size
        radius = 1 / (1 - float(spec.contraction))
        scale = (size - 2 * margin) / (2 * radius)

        def to_canvas(x, y):
            return margin + (x + radius) * scale, margin + (radius - y) * scale

    else:
        width, height = size, 120
        scale = size - 2 * margin
    title = title or f"{sub.name or 'substitution'} depth {depth}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        '<g id="cells">',
    ]
    for cell in cells:
        geom = embed(cell.address, spec)
        fill = colors.color(cell.label)
        attrs = (
            f'data-address="{cell.address.label()}" data-level="{cell.address.level}" '
            f'data-letter="{cell.label if cell.label is not None else "mixed"}" fill="{fill}"'
        )
        if spec.dimension == 2:
            pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in (to_canvas(x, y) for x, y in geom.shape))
            out.append(f'<polygon points="{pts}" {attrs}/>')
        else:
            lo, hi = geom.shape
            out.append(
                f'<rect x="{_fmt(margin + lo * scale)}" y="40.000000" width="{_fmt((hi - lo) * scale)}" '
                f'height="40.000000" {attrs}/>'
            )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
