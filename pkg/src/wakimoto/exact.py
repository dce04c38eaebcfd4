"""Exact scalars, univariate polynomials and truncated q-series.

Every number in the package is an exact rational of type ``Rat``
(``gmpy2.mpq``, which compares and hashes equal to :class:`fractions.Fraction`).
Floats are rejected at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Rational
from typing import Iterable, Sequence

from gmpy2 import mpq as Rat


def as_rat(x) -> Rat:
    """Coerce ``x`` (int, Fraction, mpq or an ``"a/b"`` string) to ``Rat``."""
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted: %r" % (x,))
    if isinstance(x, str):
        x = x.strip()
    return Rat(x)


def fstr(x) -> str:
    """Serialize a rational as ``"a/b"`` (denominator always present)."""
    x = as_rat(x)
    return "%d/%d" % (int(x.numerator), int(x.denominator))


# ---------------------------------------------------------------------------
# univariate polynomials


class Poly:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def variable(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[tuple[Rat, int]], lead=1) -> "Poly":
        out = cls([lead])
        for r, mult in roots:
            lin = cls([-as_rat(r), 1])
            for _ in range(mult):
                out = out * lin
        return out

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Rat:
        if not self.coeffs:
            return Rat(0)
        return self.coeffs[-1]

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic normalization")
        lead = self.coeffs[-1]
        return Poly(c / lead for c in self.coeffs)

    def __call__(self, x) -> Rat:
        x = as_rat(x)
        acc = Rat(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other) -> "Poly":
        other = _to_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Rat(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Rat(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-_to_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _to_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _to_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Rat(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Rational):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append("%s*j^%d" % (c, i) if i else str(c))
        return "Poly(%s)" % " + ".join(terms)


def _to_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def interpolate_poly(samples: Sequence[tuple], degree_bound: int) -> Poly:
    """Return the unique polynomial of degree <= ``degree_bound`` through ``samples``.

    Newton divided differences on the first ``degree_bound + 1`` points; any
    further samples must lie on the result.
    """
    pts = [(as_rat(x), as_rat(y)) for x, y in samples]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("degenerate interpolation: repeated sample point")
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    if len(pts) < degree_bound + 1:
        raise ValueError(
            "insufficient samples: need %d, got %d" % (degree_bound + 1, len(pts))
        )
    head = pts[: degree_bound + 1]
    xs = [x for x, _ in head]
    table = [y for _, y in head]
    n = len(head)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    # expand Newton form from the innermost coefficient outwards
    poly = Poly([table[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * Poly([-xs[i], 1]) + table[i]
    for x, y in pts[degree_bound + 1:]:
        if poly(x) != y:
            raise ValueError("samples inconsistent with degree bound %d" % degree_bound)
    return poly


def rational_roots(poly: Poly) -> tuple[list[tuple[Rat, int]], Poly]:
    """Factor ``poly`` over Q into linear factors and a residual.

    Returns ``(roots, residual)`` where ``roots`` lists ``(root, multiplicity)``
    in increasing order and ``residual`` is the monic product of the
    irreducible factors of degree >= 2 (``Poly([1])`` when ``poly`` splits).
    """
    import sympy

    if poly.is_zero():
        raise ValueError("the zero polynomial has no root decomposition")
    x = sympy.Symbol("x")
    sp = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator))
                     for c in reversed(poly.coeffs)], x, domain="QQ")
    _, factors = sp.factor_list()
    roots = []
    residual = Poly([1])
    for f, mult in factors:
        cs = [Rat(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        fp = Poly(cs).monic()
        if fp.degree == 1:
            roots.append((-fp.coeffs[0], mult))
        else:
            for _ in range(mult):
                residual = residual * fp
    roots.sort()
    return roots, residual


# ---------------------------------------------------------------------------
# truncated q-series


@dataclass(frozen=True)
class CharacterSeries:
    """Truncated series ``q^offset * sum_n coefficients[n] q^n``.

    Coefficients are known for ``0 <= n <= order`` and unknown above it.
    Everything below the offset is zero.
    """

    offset: Rat
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "offset", as_rat(self.offset))
        object.__setattr__(self, "coefficients",
                           tuple(as_rat(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("a series needs at least one known coefficient")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def top(self) -> Rat:
        """Largest exponent with a known coefficient."""
        return self.offset + self.order

    def coefficient_at(self, exponent) -> Rat:
        exponent = as_rat(exponent)
        d = exponent - self.offset
        if d.denominator != 1:
            raise ValueError("incommensurate gradings")
        d = int(d)
        if d < 0:
            return Rat(0)
        if d > self.order:
            raise IndexError("exponent %s beyond truncation order" % exponent)
        return self.coefficients[d]

    def _commensurate(self, other: "CharacterSeries") -> None:
        if (self.offset - other.offset).denominator != 1:
            raise ValueError("incommensurate gradings: offsets %s and %s"
                             % (self.offset, other.offset))

    def __add__(self, other: "CharacterSeries") -> "CharacterSeries":
        self._commensurate(other)
        base = min(self.offset, other.offset)
        top = min(self.top, other.top)
        if top < base:
            raise ValueError("series do not overlap")
        n = int(top - base) + 1
        out = [Rat(0)] * n
        for s in (self, other):
            shift = int(s.offset - base)
            for i, c in enumerate(s.coefficients[: max(n - shift, 0)]):
                out[shift + i] += c
        return CharacterSeries(base, out)

    def __neg__(self) -> "CharacterSeries":
        return CharacterSeries(self.offset, [-c for c in self.coefficients])

    def __sub__(self, other: "CharacterSeries") -> "CharacterSeries":
        return self + (-other)

    def scale(self, c) -> "CharacterSeries":
        c = as_rat(c)
        return CharacterSeries(self.offset, [c * x for x in self.coefficients])

    def __mul__(self, other: "CharacterSeries") -> "CharacterSeries":
        n = min(self.order, other.order) + 1
        out = [Rat(0)] * n
        for i, a in enumerate(self.coefficients[:n]):
            if a:
                for j, b in enumerate(other.coefficients[: n - i]):
                    out[i + j] += a * b
        return CharacterSeries(self.offset + other.offset, out)

    def shift(self, exponent) -> "CharacterSeries":
        """Multiply by ``q^exponent``."""
        return CharacterSeries(self.offset + as_rat(exponent), self.coefficients)

    def truncate(self, order: int) -> "CharacterSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return CharacterSeries(self.offset, self.coefficients[: order + 1])

    def to_json(self) -> dict:
        return {"offset": fstr(self.offset), "order": self.order,
                "coefficients": [fstr(c) for c in self.coefficients]}


@dataclass(frozen=True)
class ProductFactor:
    """The factor ``prod_{a>=1} (1 - x^(step*a + start))^power``.

    ``step == 0`` denotes the single finite factor ``(1 - x^start)^power``.
    """

    step: int
    start: int
    power: int = -1

    def exponents(self, limit: int):
        if self.step == 0:
            if self.start <= 0:
                raise ValueError("factor exponent must be positive")
            if self.start <= limit:
                yield self.start
            return
        if self.step + self.start <= 0:
            raise ValueError("factor exponents must be positive")
        a = 1
        while self.step * a + self.start <= limit:
            yield self.step * a + self.start
            a += 1


def product_series(factors: Iterable[ProductFactor], T: int) -> CharacterSeries:
    """Expand a product of ``ProductFactor`` terms exactly through ``x^T``."""
    if T < 0:
        raise ValueError("truncation order must be >= 0")
    c = [Rat(0)] * (T + 1)
    c[0] = Rat(1)
    for f in factors:
        for e in f.exponents(T):
            for _ in range(abs(f.power)):
                if f.power < 0:
                    for n in range(e, T + 1):
                        c[n] += c[n - e]
                else:
                    for n in range(T, e - 1, -1):
                        c[n] -= c[n - e]
    return CharacterSeries(0, c)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    degree: int | None = None
    exponent: Rat | None = None
    left: Rat | None = None
    right: Rat | None = None

    def __bool__(self):
        return self.equal


def series_compare(a: CharacterSeries, b: CharacterSeries) -> Comparison:
    """Exact comparison over the overlap of the defined ranges.

    On mismatch, ``degree`` is counted from the lower of the two offsets.
    """
    a._commensurate(b)
    base = min(a.offset, b.offset)
    top = min(a.top, b.top)
    for d in range(int(top - base) + 1):
        e = base + d
        x, y = a.coefficient_at(e), b.coefficient_at(e)
        if x != y:
            return Comparison(False, d, e, x, y)
    return Comparison(True)
