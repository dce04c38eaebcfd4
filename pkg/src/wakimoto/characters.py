"""Characters, the two-sided screening complex and the single screening charge.

All characters are normalized by the d-eigenvalue ``h = (2j^2+k)/(4(k+2))``.
Infinite sums over the complex or the embedding diagram are cut where
``h - h_top > T``; since ``h`` is a convex quadratic in the label index,
scanning outward from the vertex and stopping at the first term beyond the
window provably discards nothing below order ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import floor

from .currents import act_beta, act_x, screening_coefficient, screening_offset
from .exact import Rat, CharacterSeries, ProductFactor, product_series, series_compare
from .fock import (
    FockVector,
    ModuleParams,
    Sector,
    WeightLabel,
    enumerate_basis,
    vacuum,
)
from .structure import VERMA_PATTERN, annihilator_kernel, degeneracy_check

FOCK_PATTERN = (ProductFactor(2, 0, -1), ProductFactor(2, -1, -2))


def module_character(kind: str, w: WeightLabel, T: int) -> CharacterSeries:
    """Character of the Fock module or the Verma module of weight ``w`` through order ``T``."""
    if kind == "fock":
        pattern = FOCK_PATTERN
    elif kind == "verma":
        pattern = VERMA_PATTERN
    else:
        raise ValueError("kind must be 'fock' or 'verma'")
    return product_series(pattern, T).shift(w.h)


# ---------------------------------------------------------------------------
# label scans


def _window(params: ModuleParams, sign: int, m: int, b: Rat, h_top: Rat, T: int):
    """Indices ``i`` with ``h(j_{sign*m + 2ip, b}) - h_top <= T``."""
    p = params.p
    center = (b * params.kp2 - sign * m) / (2 * p)   # vertex of h as a function of i
    out = []

    def gap(i):
        return params.conformal_weight(params.label_j(sign * m + 2 * i * p, b)) - h_top

    i0 = int(floor(center))
    i = i0
    while gap(i) <= T:
        out.append(i)
        i -= 1
    i = i0 + 1
    while gap(i) <= T:
        out.append(i)
        i += 1
    return sorted(out)


@dataclass(frozen=True)
class BGGTerm:
    index: int            # s_index in the embedding diagram
    sign: int
    weight: WeightLabel
    gap: int              # h(s_index) - h(s_0)


def bgg_weights(params: ModuleParams, m: int, mprime: int, T: int) -> list[BGGTerm]:
    """Signed weights ``+s_0, -s_{+-1}, +s_{+-2}, ...`` with ``h - h(s_0) <= T``."""
    degeneracy_check(params, m, mprime, 0)
    b = mprime + Rat(1, 2)
    top = WeightLabel.labelled(params, m, b)
    terms = []
    for i in _window(params, +1, m, b, top.h, T):
        idx = 2 * i                        # Lambda_{m+2ip}: s_0, s_{2i}, s_{-2|i|}
        terms.append((idx, +1, m + 2 * i * params.p))
    for i in _window(params, -1, m, b, top.h, T):
        idx = -2 * i + 1 if i >= 1 else 2 * (-i) + 1   # Lambda_{-m+2ip}
        terms.append((idx, -1, -m + 2 * i * params.p))
    out = []
    for idx, sign, a in terms:
        w = WeightLabel.labelled(params, a, b)
        gap = w.h - top.h
        if gap.denominator != 1 or gap < 0:
            raise ArithmeticError("s_%d sits at non-integral or negative depth %s" % (idx, gap))
        out.append(BGGTerm(idx, sign, w, int(gap)))
    out.sort(key=lambda t: (t.gap, t.index))
    return out


def _signed_sum(top_h: Rat, terms, T: int, kind: str) -> CharacterSeries:
    base = product_series(FOCK_PATTERN if kind == "fock" else VERMA_PATTERN, T)
    acc = [Rat(0)] * (T + 1)
    for sign, gap in terms:
        for n in range(gap, T + 1):
            acc[n] += sign * base.coefficients[n - gap]
    return CharacterSeries(top_h, acc)


def bgg_character(params: ModuleParams, m: int, mprime: int, T: int) -> CharacterSeries:
    """Alternating sum of Verma characters over the embedding diagram."""
    terms = bgg_weights(params, m, mprime, T)
    top = WeightLabel.labelled(params, m, mprime + Rat(1, 2))
    ch = _signed_sum(top.h, [(t.sign, t.gap) for t in terms], T, "verma")
    neg = [n for n, c in enumerate(ch.coefficients) if c < 0]
    if neg:
        raise ArithmeticError("irreducible character has a negative coefficient at degree %d" % neg[0])
    return ch


# ---------------------------------------------------------------------------
# the complex


@dataclass(frozen=True)
class ComplexDescriptor:
    """``... -> F_{2p-m} -Q^{p-m}-> F_m -Q^m-> F_{-m} -Q^{p-m}-> F_{m-2p} -> ...``

    Position ``2i`` holds ``F_{m-2ip, m'+1/2}`` and ``2i+1`` holds ``F_{-m-2ip, m'+1/2}``.
    """

    params: ModuleParams
    m: int
    mprime: int

    def __post_init__(self):
        degeneracy_check(self.params, self.m, self.mprime, 0)

    @property
    def b(self) -> Rat:
        return self.mprime + Rat(1, 2)

    def label(self, pos: int) -> int:
        i, r = divmod(pos, 2)
        return (self.m if r == 0 else -self.m) - 2 * i * self.params.p

    def sector(self, pos: int) -> Sector:
        return Sector(self.params.label_j(self.label(pos), self.b), self.params)

    def map_exponent(self, pos: int) -> int:
        """``n`` of the ``Q^n`` leaving position ``pos``."""
        return self.m if pos % 2 == 0 else self.params.p - self.m

    def positions_within(self, T: int) -> list[int]:
        h0 = self.sector(0).h
        out = []
        for sign, parity in ((+1, 0), (-1, 1)):
            # position 2i+parity has label sign*m - 2ip, i.e. index -i in _window
            for i in _window(self.params, sign, self.m, self.b, h0, T):
                out.append(-2 * i + parity)
        return sorted(out)


def euler_character(desc: ComplexDescriptor, T: int) -> CharacterSeries:
    """``sum_i (-1)^i ch F(position i)`` through order ``T``."""
    h0 = desc.sector(0).h
    terms = []
    for pos in desc.positions_within(T):
        gap = desc.sector(pos).h - h0
        if gap.denominator != 1 or gap < 0:
            raise ArithmeticError("position %d at non-integral depth %s" % (pos, gap))
        terms.append((1 if pos % 2 == 0 else -1, int(gap)))
    return _signed_sum(h0, terms, T, "fock")


# ---------------------------------------------------------------------------
# Q^1


def q1_defined(sector: Sector) -> bool:
    F = screening_offset(sector)
    return F.denominator == 1 and F.numerator % 2 == 1


def screening_Q1(v: FockVector) -> FockVector:
    """Residue of ``S(z)`` on ``v``: the ``z^0`` coefficient, in sector ``j - 2``."""
    if not q1_defined(v.sector):
        raise ValueError("Q1 not defined on this sector (j=%s)" % v.sector.j)
    return screening_coefficient(0, v)


@dataclass
class Q1Report:
    source: Sector
    target: Sector
    degree_shift: int
    checks: int = 0
    failures: list = field(default_factory=list)
    vacuum_image: FockVector | None = None
    kernel_vector: FockVector | None = None
    proportionality: Rat | None = None

    @property
    def ok(self) -> bool:
        return (not self.failures and self.vacuum_image is not None
                and not self.vacuum_image.is_zero() and self.proportionality is not None)


def q1_checks(source: Sector, D: int) -> Q1Report:
    """Intertwining of ``Q^1`` with ``x_n, beta_n`` (``|n| <= D``) on degrees ``<= D``,
    and proportionality of ``Q^1 nu`` to the singular vector of matching weight."""
    if not q1_defined(source):
        raise ValueError("Q1 not defined on this sector (j=%s)" % source.j)
    target = source.shifted(-2)
    shift = source.h - target.h
    if shift.denominator != 1 or shift < 0:
        raise ArithmeticError("Q1 degree shift %s is not a nonnegative integer" % shift)
    rep = Q1Report(source, target, int(shift))
    for N in range(D + 1):
        for mono in enumerate_basis(source, N):
            v = FockVector.basis_vector(source, mono)
            qv = screening_Q1(v)
            for n in range(-D, D + 1):
                ops = [("x", n, lambda w, n=n: act_x(n, w))]
                if n % 2:
                    ops.append(("beta", n, lambda w, n=n: act_beta(n, w)))
                for name, nn, op in ops:
                    rep.checks += 1
                    if screening_Q1(op(v)) != op(qv):
                        rep.failures.append((name, nn, mono))
    img = screening_Q1(vacuum(source))
    rep.vacuum_image = img
    for sv in annihilator_kernel(target, rep.degree_shift):
        if sv.eigenvalue != source.j:
            continue
        rep.kernel_vector = sv.vector
        if img.is_zero():
            break
        mono, c = next(iter(sv.vector.terms.items()))
        lam = img.terms.get(mono, Rat(0)) / c
        if lam and img == sv.vector * lam:
            rep.proportionality = lam
        break
    return rep


def character_agrees_with_basis(w: WeightLabel, sector: Sector, T: int) -> bool:
    ch = module_character("fock", w, T)
    return all(ch.coefficients[N] == len(enumerate_basis(sector, N)) for N in range(T + 1))


__all__ = [
    "FOCK_PATTERN", "module_character", "bgg_weights", "bgg_character",
    "ComplexDescriptor", "euler_character", "screening_Q1", "q1_defined",
    "q1_checks", "Q1Report", "series_compare", "character_agrees_with_basis",
]
