"""Three principally graded free bosons and their Fock modules.

Families and commutators (``m + n = 0``)::

    family 0: odd modes,            [phi_0m, phi_0n] =  4 k m
    family 1: even nonzero modes,   [phi_1m, phi_1n] =  4 (k+2) m
    family 2: odd modes,            [phi_2m, phi_2n] = -4 k m

A Fock monomial is a sorted tuple of ``(family, n)`` pairs with ``n < 0``;
sorting gives the canonical order (family ascending, then mode ascending).
The zero mode ``phi_{1,0}`` and its conjugate ``q`` never appear in a
monomial: ``phi_{1,0}`` acts on the sector ``F_j`` by the scalar ``2j``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .exact import Rat, as_rat

FAMILIES = (0, 1, 2)

Mode = tuple  # (family, n)
Monomial = tuple  # sorted tuple of Mode, all n < 0


@dataclass(frozen=True)
class ModuleParams:
    """Level data: either coprime ``(p, pprime)`` with ``k + 2 = p/pprime``, or a bare ``k``."""

    k: Rat
    p: int | None = field(default=None, compare=False)
    pprime: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "k", as_rat(self.k))
        if self.k == 0 or self.k == -2:
            raise ValueError("level k must avoid 0 and -2, got %s" % self.k)
        if (self.p is None) != (self.pprime is None):
            raise ValueError("p and pprime must be given together")
        if self.p is not None:
            if self.p < 1 or self.pprime < 1:
                raise ValueError("p and pprime must be positive")
            if gcd(self.p, self.pprime) != 1:
                raise ValueError("p=%d and pprime=%d are not coprime" % (self.p, self.pprime))
            if Rat(self.p, self.pprime) - 2 != self.k:
                raise ValueError("k inconsistent with p/pprime")

    @classmethod
    def from_pp(cls, p: int, pprime: int) -> "ModuleParams":
        if p < 1 or pprime < 1:
            raise ValueError("p and pprime must be positive")
        return cls(Rat(p, pprime) - 2, p, pprime)

    @classmethod
    def generic(cls, k) -> "ModuleParams":
        return cls(as_rat(k))

    @property
    def kp2(self) -> Rat:
        return self.k + 2

    def kappa(self, family: int) -> Rat:
        """Bracket ``[phi_{f,m}, phi_{f,-m}] / m`` for an allowed ``m``."""
        if family == 0:
            return 4 * self.k
        if family == 1:
            return 4 * self.kp2
        if family == 2:
            return -4 * self.k
        raise ValueError("illegal mode: family %r" % (family,))

    def label_j(self, a, b) -> Rat:
        """``j_{a,b} = a - b (k+2)``."""
        return as_rat(a) - as_rat(b) * self.kp2

    def conformal_weight(self, j) -> Rat:
        """d-eigenvalue ``(2 j^2 + k) / (4 (k+2))`` of the vacuum of ``F_j``."""
        j = as_rat(j)
        return (2 * j * j + self.k) / (4 * self.kp2)


@dataclass(frozen=True)
class Sector:
    """The Fock module ``F_j`` at level ``params.k``."""

    j: Rat
    params: ModuleParams

    def __post_init__(self):
        object.__setattr__(self, "j", as_rat(self.j))

    @property
    def k(self) -> Rat:
        return self.params.k

    @property
    def h(self) -> Rat:
        return self.params.conformal_weight(self.j)

    def shifted(self, dj) -> "Sector":
        return Sector(self.j + as_rat(dj), self.params)

    def negated(self) -> "Sector":
        return Sector(-self.j, self.params)


@dataclass(frozen=True)
class WeightLabel:
    k: Rat
    j: Rat
    h: Rat

    @classmethod
    def of(cls, params: ModuleParams, j) -> "WeightLabel":
        j = as_rat(j)
        return cls(params.k, j, params.conformal_weight(j))

    @classmethod
    def labelled(cls, params: ModuleParams, a, b) -> "WeightLabel":
        return cls.of(params, params.label_j(a, b))

    def fundamental(self) -> tuple[Rat, Rat, Rat]:
        """Coefficients of ``(Lambda_0, Lambda_1, delta)``; presentation only."""
        k, j = self.k, self.j
        delta = -(2 * j * (j + k + 2) + k * (k + 3)) / (8 * (k + 2))
        return (k / 2 - j, k / 2 + j, delta)


def check_mode(family: int, n: int) -> None:
    if family in (0, 2):
        if n % 2 == 0:
            raise ValueError("illegal mode: family %d needs odd n, got %d" % (family, n))
    elif family == 1:
        if n % 2:
            raise ValueError("illegal mode: family 1 needs even n, got %d" % n)
    else:
        raise ValueError("illegal mode: family %r" % (family,))


def degree(mono: Monomial) -> int:
    return -sum(n for _, n in mono)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def mono_remove(mono: Monomial, mode: Mode) -> Monomial:
    i = mono.index(mode)
    return mono[:i] + mono[i + 1:]


def monomial(*modes) -> Monomial:
    """Build a canonical monomial from ``(family, n)`` pairs."""
    for f, n in modes:
        check_mode(f, n)
        if n >= 0:
            raise ValueError("illegal mode: monomials hold creation modes only")
    return tuple(sorted(modes))


# ---------------------------------------------------------------------------


class FockVector:
    """Finite rational combination of monomials in one sector.

    Treated as immutable: arithmetic returns new vectors.
    """

    __slots__ = ("sector", "terms")

    def __init__(self, sector: Sector, terms=None):
        self.sector = sector
        clean = {}
        if terms:
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                c = as_rat(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
        self.terms = clean

    @classmethod
    def zero(cls, sector: Sector) -> "FockVector":
        return cls(sector)

    @classmethod
    def basis_vector(cls, sector: Sector, mono: Monomial) -> "FockVector":
        return cls(sector, {mono: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _same(self, other: "FockVector") -> None:
        if self.sector != other.sector:
            raise ValueError("vectors live in different sectors: j=%s vs j=%s"
                             % (self.sector.j, other.sector.j))

    def __add__(self, other: "FockVector") -> "FockVector":
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _raw(self.sector, out)

    def __neg__(self) -> "FockVector":
        return _raw(self.sector, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def __mul__(self, c) -> "FockVector":
        c = as_rat(c)
        if not c:
            return FockVector(self.sector)
        return _raw(self.sector, {m: c * v for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.sector == other.sector and self.terms == other.terms

    def __hash__(self):
        return hash((self.sector, frozenset(self.terms.items())))

    def degrees(self) -> dict[int, int]:
        """Map degree -> number of monomials present at that degree."""
        return dict(sorted(Counter(degree(m) for m in self.terms).items()))

    def homogeneous_part(self, N: int) -> "FockVector":
        return _raw(self.sector, {m: c for m, c in self.terms.items() if degree(m) == N})

    def coefficient(self, query) -> Rat:
        return coefficient(self, query)

    def __repr__(self):
        if not self.terms:
            return "FockVector(j=%s, 0)" % self.sector.j
        parts = []
        for m in sorted(self.terms):
            name = "*".join("phi%d(%d)" % mode for mode in m) or "1"
            parts.append("%s*%s" % (self.terms[m], name))
        return "FockVector(j=%s, %s)" % (self.sector.j, " + ".join(parts))


def _raw(sector: Sector, terms: dict) -> FockVector:
    v = FockVector.__new__(FockVector)
    v.sector = sector
    v.terms = terms
    return v


def vacuum(sector: Sector) -> FockVector:
    return _raw(sector, {(): Rat(1)})


def coefficient(v: FockVector, query) -> Rat:
    """Coefficient of a monomial (tuple) or of the single monomial of a basis vector."""
    if isinstance(query, FockVector):
        if query.sector != v.sector:
            raise ValueError("queried monomial belongs to another sector")
        if len(query.terms) != 1:
            raise ValueError("query must be a single monomial")
        (query,) = query.terms
    return v.terms.get(tuple(query), Rat(0))


@dataclass(frozen=True)
class Inspection:
    degrees: dict
    vector: FockVector

    def coefficient(self, query) -> Rat:
        return coefficient(self.vector, query)


def inspect(v: FockVector) -> Inspection:
    return Inspection(v.degrees(), v)


# ---------------------------------------------------------------------------
# raw oscillator action


def annihilate(k: Rat, mode: Mode, mono: Monomial):
    """``phi_{f,n} * mono`` for ``n > 0``; returns (coefficient, monomial) or None."""
    f, n = mode
    target = (f, -n)
    e = mono.count(target)
    if not e:
        return None
    if f == 0:
        kap = 4 * k
    elif f == 1:
        kap = 4 * (k + 2)
    else:
        kap = -4 * k
    return kap * n * e, mono_remove(mono, target)


def apply_mode(mode: Mode, v: FockVector) -> FockVector:
    """Act with a single oscillator ``phi_{f,n}`` (``(1, 0)`` is the zero mode)."""
    f, n = mode
    if f == 1 and n == 0:
        return v * (2 * v.sector.j)
    check_mode(f, n)
    out = {}
    if n < 0:
        for m, c in v.terms.items():
            key = mono_mul(m, ((f, n),))
            out[key] = out.get(key, 0) + c
        return _raw(v.sector, out)
    k = v.sector.k
    for m, c in v.terms.items():
        r = annihilate(k, mode, m)
        if r is None:
            continue
        a, key = r
        s = out.get(key, 0) + a * c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return _raw(v.sector, out)


def bracket_constant(params: ModuleParams, a: Mode, b: Mode) -> Rat:
    """Scalar ``[phi_a, phi_b]`` (the zero mode commutes with every oscillator)."""
    (f, m), (g, n) = a, b
    if f != g or m + n != 0 or m == 0:
        return Rat(0)
    return params.kappa(f) * m


# ---------------------------------------------------------------------------
# basis enumeration


def _partitions(n: int, parts: tuple) -> list[tuple]:
    """Partitions of ``n`` into the given allowed parts, each as a nonincreasing tuple."""
    out = []

    def rec(rest, idx, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for i in range(idx, len(parts)):
            p = parts[i]
            if p <= rest:
                acc.append(p)
                rec(rest - p, i, acc)
                acc.pop()

    rec(n, 0, [])
    return out


@lru_cache(maxsize=None)
def _basis(N: int) -> tuple:
    odd = tuple(range(N if N % 2 else N - 1, 0, -2))
    even = tuple(range(N - N % 2, 0, -2))
    out = []
    for n0 in range(N + 1):
        for p0 in _partitions(n0, odd):
            for n1 in range(0, N - n0 + 1, 2):
                for p1 in _partitions(n1, even):
                    for p2 in _partitions(N - n0 - n1, odd):
                        mono = tuple([(0, -a) for a in p0] + [(1, -a) for a in p1]
                                     + [(2, -a) for a in p2])
                        out.append(tuple(sorted(mono)))
    out.sort()
    return tuple(out)


def enumerate_basis(sector: Sector | None, N: int) -> list[Monomial]:
    """All degree-``N`` monomials in canonical order (identical for every sector)."""
    if N < 0:
        raise ValueError("degree must be >= 0")
    return list(_basis(N))


def fock_dimension(N: int) -> int:
    return len(_basis(N))
