"""Singular and cosingular vectors, the matrix C(N, j) and submodule closures.

Conventions:

* A singular vector at degree N is a nonzero ``v`` with ``x_1 v = beta_1 v = 0``;
  ``beta_1`` and ``x_1`` generate the raising subalgebra, and every kernel
  vector is re-checked against ``x_n, beta_n`` for ``1 < n <= N``.
* Cosingular vectors of ``F_j`` are found as singular vectors of the
  sigma-twisted action on ``F_{-j}``. The reported weight label is the
  twisted ``x_0`` eigenvalue, and the same value is recovered independently
  as the ``x_0`` eigenvalue on ``F_j / U(n_-) nu_j``.
* ``C(N, j)`` has rows indexed by PBW words ``beta_{-b_1} ... beta_{-b_r}
  x_{-c_1} ... x_{-c_s} nu_j`` (modes ascending) and columns by the Fock basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .currents import act_beta, act_x
from .exact import (
    CharacterSeries,
    Poly,
    ProductFactor,
    Rat,
    as_rat,
    interpolate_poly,
    product_series,
    rational_roots,
)
from .fock import (
    FockVector,
    ModuleParams,
    Sector,
    _partitions,
    _raw,
    enumerate_basis,
    fock_dimension,
    vacuum,
)
from .linalg import Echelon, determinant, nullspace

VERMA_PATTERN = (ProductFactor(1, 0, -1), ProductFactor(2, -1, -1))


# ---------------------------------------------------------------------------
# PBW words and C(N, j)


@dataclass(frozen=True, order=True)
class PBWMonomial:
    """Exponents of ``beta_{-b}`` (odd ``b``) and ``x_{-c}`` as nonincreasing part lists."""

    beta: tuple
    x: tuple

    @property
    def degree(self) -> int:
        return sum(self.beta) + sum(self.x)

    def apply(self, v: FockVector, twist: bool = False) -> FockVector:
        for c in reversed(self.x):
            v = act_x(-c, v, twist)
        for b in reversed(self.beta):
            v = act_beta(-b, v)
        return v


@lru_cache(maxsize=None)
def pbw_basis(N: int) -> tuple:
    """PBW words of degree ``N``, beta-heavy words first (rows of ``C(N, j)``)."""
    odd = tuple(range(N if N % 2 else N - 1, 0, -2))
    allp = tuple(range(N, 0, -1))
    out = []
    for nb in range(N + 1):
        for pb in _partitions(nb, odd):
            for px in _partitions(N - nb, allp):
                out.append(PBWMonomial(pb, px))
    return tuple(sorted(out, reverse=True))


def g(N: int) -> int:
    """Graded dimension of ``U(n_-)`` in degree ``N``."""
    if N < 0:
        return 0
    return int(product_series(VERMA_PATTERN, N).coefficients[N])


def matrix_c(N: int, sector: Sector) -> list[list[Rat]]:
    basis = enumerate_basis(sector, N)
    nu = vacuum(sector)
    rows = []
    for w in pbw_basis(N):
        v = w.apply(nu)
        rows.append([v.terms.get(m, Rat(0)) for m in basis])
    return rows


def lemma_roots(N: int, params: ModuleParams) -> list[tuple[Rat, int]]:
    """Predicted zeros ``j_{r,s/2}`` (``r >= 1``, ``s`` odd, ``rs <= N``) with multiplicity ``g(N - rs)``."""
    acc = {}
    for r in range(1, N + 1):
        for s in range(1, N // r + 1, 2):
            root = params.label_j(r, Rat(s, 2))
            acc[root] = acc.get(root, 0) + g(N - r * s)
    return sorted(acc.items())


@dataclass
class DetCResult:
    N: int
    params: ModuleParams
    determinant: Poly
    constant: Rat
    roots: list
    residual: Poly
    expected_roots: list
    degree_bound: int

    @property
    def monic(self) -> Poly:
        return self.determinant.monic()

    @property
    def total_degree(self) -> int:
        return self.determinant.degree

    @property
    def expected_degree(self) -> int:
        return sum(m for _, m in self.expected_roots)

    @property
    def lemma_match(self) -> bool:
        return (self.constant != 0 and self.residual == Poly([1])
                and self.roots == self.expected_roots
                and self.total_degree == self.expected_degree)


def detc(N: int, params: ModuleParams, samples=None, pool=None) -> DetCResult:
    """Recover ``det C(N, j)`` by interpolation in ``j`` and factor it.

    Each application of an ``x`` mode is affine in ``j``, so the number of
    ``x`` letters across all rows bounds the degree.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    bound = sum(len(w.x) for w in pbw_basis(N))
    if samples is None:
        samples = range(bound + 1)
    samples = [as_rat(s) for s in samples]
    if len(samples) < bound + 1:
        raise ValueError("need at least %d samples" % (bound + 1))
    jobs = [(N, params.k, s) for s in samples]
    if pool is not None:
        values = list(pool.map(_det_at, jobs))
    else:
        values = [_det_at(a) for a in jobs]
    poly = interpolate_poly(list(zip(samples, values)), bound)
    if poly.is_zero():
        raise ArithmeticError("det C(%d, j) vanishes identically" % N)
    roots, residual = rational_roots(poly)
    return DetCResult(N, params, poly, poly.leading, roots, residual,
                      lemma_roots(N, params), bound)


def _det_at(args) -> Rat:
    N, k, j = args
    return determinant(matrix_c(N, Sector(j, ModuleParams(k))))


# ---------------------------------------------------------------------------
# generating functions


def f_table(T: int) -> list[list[int]]:
    """``f[N][k]``: coefficient of ``y^k x^N`` in ``prod_a 1/((1 - x^a)(1 - y x^{2a-1}))``."""
    table = [[0] * (T + 1) for _ in range(T + 1)]
    table[0][0] = 1
    for a in range(1, T + 1):
        for N in range(a, T + 1):
            for k in range(T + 1):
                table[N][k] += table[N - a][k]
    for a in range(1, T + 1, 2):
        for N in range(a, T + 1):
            for k in range(1, T + 1):
                table[N][k] += table[N - a][k - 1]
    return table


@dataclass(frozen=True)
class GenfunCheck:
    weighted: tuple
    odd_sum: tuple
    lemma_sum: tuple

    @property
    def ok(self) -> bool:
        return self.weighted == self.odd_sum == self.lemma_sum

    def __bool__(self):
        return self.ok


def genfun_identity_check(T: int) -> GenfunCheck:
    """Compare ``sum_k k f(N,k)``, ``sum_{a odd} x^a/(1-x^a) * prod`` and ``sum_{rs<=N} g(N-rs)``."""
    if T < 1:
        raise ValueError("T must be >= 1")
    f = f_table(T)
    weighted = tuple(sum(k * f[N][k] for k in range(N + 1)) for N in range(T + 1))
    base = product_series(VERMA_PATTERN, T)
    total = CharacterSeries(0, [0] * (T + 1))
    for a in range(1, T + 1, 2):
        geo = [Rat(1 if (n >= a and n % a == 0) else 0) for n in range(T + 1)]
        total = total + CharacterSeries(0, geo) * base
    odd_sum = tuple(int(c) for c in total.coefficients)
    lemma = []
    for N in range(T + 1):
        lemma.append(sum(g(N - r * s) for r in range(1, N + 1)
                         for s in range(1, N // r + 1, 2)))
    return GenfunCheck(weighted, odd_sum, tuple(lemma))


# ---------------------------------------------------------------------------
# kernels and eigenvalues


@dataclass
class SingularVector:
    degree: int
    vector: FockVector
    eigenvalue: Rat


def _vec(v: FockVector) -> dict:
    return v.terms


def _coords(ech: Echelon, w: dict) -> dict:
    tag = {}
    res = ech.reduce(w, tag)
    if res:
        raise ArithmeticError("vector outside the expected span")
    return {i: -c for i, c in tag.items()}


def _eigendecompose(reps: list[FockVector], op, modulo: Echelon | None = None):
    """Diagonalize ``op`` on span(reps) (taken modulo ``modulo``) over Q.

    Returns ``[(eigenvalue, FockVector)]`` with eigenvectors as combinations of ``reps``.
    """
    import sympy

    if not reps:
        return []
    sector = reps[0].sector

    def red(d):
        return modulo.reduce(d) if modulo is not None else dict(d)

    ech = Echelon()
    for i, r in enumerate(reps):
        if not ech.add(red(_vec(r)), {i: Rat(1)}):
            raise ArithmeticError("representatives are dependent")
    n = len(reps)
    if n == 1:
        w = red(_vec(op(reps[0])))
        coords = _coords(ech, w)
        return [(coords.get(0, Rat(0)), reps[0])]
    cols = [_coords(ech, red(_vec(op(r)))) for r in reps]
    M = sympy.Matrix(n, n, lambda i, j: sympy.Rational(
        int(cols[j].get(i, 0).numerator), int(cols[j].get(i, 0).denominator))
        if cols[j].get(i, 0) else 0)
    out = []
    for val, _, vecs in M.eigenvects():
        if not val.is_rational:
            raise ArithmeticError("x_0 has an irrational eigenvalue on this space")
        lam = Rat(int(val.p), int(val.q))
        for vv in vecs:
            acc = FockVector(sector)
            for i in range(n):
                c = vv[i]
                if c != 0:
                    acc = acc + reps[i] * Rat(int(c.p), int(c.q))
            out.append((lam, acc))
    if len(out) != n:
        raise ArithmeticError("x_0 is not diagonalizable on this space")
    out.sort(key=lambda t: t[0])
    return out


def _raising_check(v: FockVector, N: int, twist: bool, modulo=None) -> bool:
    for n in range(1, N + 1):
        for w in (act_x(n, v, twist), act_beta(n, v) if n % 2 else None):
            if w is None:
                continue
            d = _vec(w)
            if modulo is not None and n <= N:
                sub = modulo.get(N - n)
                d = sub.reduce(d) if sub is not None else d
            if d:
                return False
    return True


def annihilator_kernel(sector: Sector, N: int, twist: bool = False) -> list[SingularVector]:
    """Basis of ``{v in F_j[N] : x_1 v = beta_1 v = 0}`` diagonalizing ``x_0``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    basis = enumerate_basis(sector, N)
    cols = []
    for mono in basis:
        v = FockVector.basis_vector(sector, mono)
        col = {("x",) + (m,): c for m, c in act_x(1, v, twist).terms.items()}
        for m, c in act_beta(1, v).terms.items():
            col[("b", m)] = c
        cols.append(col)
    kernel = []
    for comb in nullspace(cols):
        kernel.append(_raw(sector, {basis[i]: c for i, c in comb.items()}))
    for v in kernel:
        if not _raising_check(v, N, twist):
            raise ArithmeticError("kernel vector not annihilated by the full raising algebra")
    pairs = _eigendecompose(kernel, lambda v: act_x(0, v, twist))
    return [SingularVector(N, v, lam) for lam, v in pairs]


# ---------------------------------------------------------------------------
# submodules


X_OPS = (("x", -1), ("b", -1), ("x", 1), ("b", 1), ("x", 0))


class Submodule:
    """Truncation to degrees ``<= maxN`` of the submodule generated by some vectors."""

    def __init__(self, sector: Sector, maxN: int, twist: bool = False):
        self.sector = sector
        self.maxN = maxN
        self.twist = twist
        self.spaces = {N: Echelon() for N in range(maxN + 1)}

    def get(self, N: int) -> Echelon | None:
        return self.spaces.get(N)

    def dims(self) -> list[int]:
        return [self.spaces[N].dim for N in range(self.maxN + 1)]

    def contains(self, v: FockVector) -> bool:
        for N, part in _split(v).items():
            if N > self.maxN or not self.spaces[N].contains(part.terms):
                return False
        return True

    def _op(self, op, v):
        kind, n = op
        if kind == "x":
            return act_x(n, v, self.twist)
        return act_beta(n, v)

    def add(self, generators) -> "Submodule":
        """Close under ``x_{+-1}, beta_{+-1}, x_0`` within degrees ``<= maxN``."""
        work = []
        for gvec in generators:
            for N, part in _split(gvec).items():
                if N <= self.maxN and self.spaces[N].add(dict(part.terms)):
                    work.append((N, part))
        while work:
            N, v = work.pop()
            for op in X_OPS:
                M = N - op[1]
                if M < 0 or M > self.maxN:
                    continue
                w = self._op(op, v)
                if w.is_zero():
                    continue
                res = self.spaces[M].add(dict(w.terms))
                if res:
                    work.append((M, _raw(self.sector, dict(res))))
        return self

    def copy(self) -> "Submodule":
        other = Submodule(self.sector, self.maxN, self.twist)
        for N, ech in self.spaces.items():
            for row in ech.basis():
                other.spaces[N].add(dict(row))
        return other


def _split(v: FockVector) -> dict:
    out = {}
    for N in v.degrees():
        out[N] = v.homogeneous_part(N)
    return out


def submodule_closure(sector: Sector, generators, maxN: int, twist: bool = False) -> Submodule:
    return Submodule(sector, maxN, twist).add(generators)


def quotient_dimensions(sector: Sector, sub: Submodule) -> list[int]:
    return [fock_dimension(N) - d for N, d in enumerate(sub.dims())]


def quotient_singular(sector: Sector, sub: Submodule, N: int,
                      twist: bool = False) -> list[SingularVector]:
    """Singular vectors of ``F / sub`` at degree ``N`` (as representatives in ``F``)."""
    basis = enumerate_basis(sector, N)
    below = sub.get(N - 1)
    cols = []
    for mono in basis:
        v = FockVector.basis_vector(sector, mono)
        xs = act_x(1, v, twist).terms
        bs = act_beta(1, v).terms
        if below is not None:
            xs, bs = below.reduce(xs), below.reduce(bs)
        col = {("x", m): c for m, c in xs.items()}
        col.update({("b", m): c for m, c in bs.items()})
        cols.append(col)
    here = sub.get(N)
    ech = Echelon()
    reps = []
    for comb in nullspace(cols):
        v = _raw(sector, {basis[i]: c for i, c in comb.items()})
        r = here.reduce(v.terms) if here is not None else dict(v.terms)
        if r and ech.add(r):
            reps.append(_raw(sector, r))
    for v in reps:
        if not _raising_check(v, N, twist, sub.spaces):
            raise ArithmeticError("quotient kernel vector fails a higher raising check")
    pairs = _eigendecompose(reps, lambda v: act_x(0, v, twist), here)
    return [SingularVector(N, v, lam) for lam, v in pairs]


# ---------------------------------------------------------------------------
# cosingular vectors


@dataclass
class CosingularEntry:
    degree: int
    weight: Rat
    representative: FockVector   # singular vector of the twisted module on F_{-j}


@dataclass
class CosingularReport:
    sector: Sector
    maxN: int
    entries: list
    first_det_zero: int | None          # smallest N <= maxN with det C(N, j) = 0
    quotient_weights: list              # x_0 eigenvalues on F_j / U(n_-) nu_j at that N

    @property
    def consistent(self) -> bool:
        if not self.entries:
            return self.first_det_zero is None
        lowest = min(e.degree for e in self.entries)
        ws = sorted(e.weight for e in self.entries if e.degree == lowest)
        return lowest == self.first_det_zero and ws == sorted(self.quotient_weights)


def cosingular_report(sector: Sector, maxN: int) -> CosingularReport:
    dual = sector.negated()
    entries = []
    for N in range(1, maxN + 1):
        for sv in annihilator_kernel(dual, N, twist=True):
            entries.append(CosingularEntry(N, sv.eigenvalue, sv.vector))
    first = None
    qweights = []
    for N in range(1, maxN + 1):
        if determinant(matrix_c(N, sector)) == 0:
            first = N
            sub = submodule_closure(sector, [vacuum(sector)], N)
            qweights = [lam for lam, _ in _quotient_x0(sector, sub, N)]
            break
    return CosingularReport(sector, maxN, entries, first, qweights)


def _quotient_x0(sector: Sector, sub: Submodule, N: int):
    here = sub.spaces[N]
    ech = Echelon()
    reps = []
    for mono in enumerate_basis(sector, N):
        r = here.reduce({mono: Rat(1)})
        if r and ech.add(r):
            reps.append(_raw(sector, r))
    return _eigendecompose(reps, lambda v: act_x(0, v), here)


# ---------------------------------------------------------------------------
# degenerate modules


def degeneracy_check(params: ModuleParams, m: int, mprime: int, l: int = 0) -> None:
    if params.p is None:
        raise ValueError("degenerate labels need (p, pprime)")
    if not 1 <= m <= params.p - 1:
        raise ValueError("m=%d outside 1..p-1" % m)
    if not 0 <= mprime <= params.pprime - 1:
        raise ValueError("mprime=%d outside 0..pprime-1" % mprime)
    if l < 0:
        raise ValueError("l must be >= 0")


@dataclass(frozen=True)
class Predicted:
    name: str          # "u1", "w0", "v-1", ...
    a: int             # first label index: weight Lambda_{a, mprime+1/2}
    j: Rat
    degree: Rat   # h(target) - h(top)


def predicted_vectors(params: ModuleParams, m: int, mprime: int, l: int, maxN: int) -> list[Predicted]:
    """Predicted u_i, w_i and v_i of ``F_{m+lp, mprime+1/2}`` up to degree ``maxN``."""
    p = params.p
    b = mprime + Rat(1, 2)
    h0 = params.conformal_weight(params.label_j(m + l * p, b))
    out = []

    def emit(name, a):
        j = params.label_j(a, b)
        d = params.conformal_weight(j) - h0
        if d.denominator != 1 or d < 0:
            raise ArithmeticError("degree of %s is not a nonnegative integer: %s" % (name, d))
        if d <= maxN:
            out.append(Predicted(name, a, j, d))
        return d

    def scan(name_fn, a_fn, start, step):
        # h is convex in i: stop once past maxN and still rising
        i, prev = start, None
        while True:
            d = emit(name_fn(i), a_fn(i))
            if d > maxN and prev is not None and d > prev:
                return
            prev, i = d, i + step

    scan(lambda i: "u%d" % i, lambda i: -m + (l + 2 * i) * p, 1, 1)
    scan(lambda i: "w%d" % i, lambda i: -m - (l + 2 * i) * p, 0, 1)
    scan(lambda i: "v%d" % i, lambda i: m + (l + 2 * i) * p, 0, 1)
    scan(lambda i: "v%d" % i, lambda i: m + (l + 2 * i) * p, -1, -1)
    # dedupe, sorted by degree then name
    seen = {}
    for pr in out:
        seen[pr.name] = pr
    return sorted(seen.values(), key=lambda pr: (pr.degree, pr.name))


ARROWS = (("v0", "u1"), ("w0", "v0"), ("w0", "v1"), ("w0", "v-1"),
          ("v1", "u1"), ("v-1", "u1"), ("w1", "v1"), ("w1", "v-1"),
          ("v1", "u2"), ("v-1", "u2"))


@dataclass
class StructureReport:
    sector: Sector
    maxN: int
    status: str                                     # pass | fail | inconclusive
    singular: list = field(default_factory=list)    # (degree, eigenvalue)
    cosingular: list = field(default_factory=list)
    quotient_singular: list = field(default_factory=list)
    second_quotient_singular: list = field(default_factory=list)
    predicted: list = field(default_factory=list)
    matches: dict = field(default_factory=dict)
    arrows: dict = field(default_factory=dict)      # "src->dst" -> True/False/None(untested)
    pattern: str = ""
    closure_dims: list = field(default_factory=list)


def _pairs(svs) -> list:
    return sorted((sv.degree, sv.eigenvalue) for sv in svs)


def scan_structure(sector: Sector, maxN: int) -> StructureReport:
    """Singular, cosingular and quotient-singular content of any sector up to ``maxN``."""
    sing = []
    for N in range(1, maxN + 1):
        sing.extend(annihilator_kernel(sector, N))
    cos = cosingular_report(sector, maxN)
    S = submodule_closure(sector, [sv.vector for sv in sing], maxN)
    qs = []
    for N in range(0, maxN + 1):
        qs.extend(quotient_singular(sector, S, N))
    S2 = S.copy().add([sv.vector for sv in qs])
    q2 = []
    for N in range(0, maxN + 1):
        q2.extend(quotient_singular(sector, S2, N))
    rep = StructureReport(sector, maxN, "pass")
    rep.singular = _pairs(sing)
    rep.cosingular = sorted((e.degree, e.weight) for e in cos.entries)
    rep.quotient_singular = _pairs(qs)
    rep.second_quotient_singular = _pairs(q2)
    rep.closure_dims = S.dims()
    generic = not rep.singular and not rep.cosingular
    rep.pattern = "generic/irreducible" if generic else "reducible"
    rep._vectors = {"u": sing, "v": qs, "w": q2}
    rep.matches["det_consistent"] = cos.consistent
    if not cos.consistent:
        rep.status = "fail"
    return rep


def verify_structure(params: ModuleParams, m: int, mprime: int, l: int, maxN: int) -> StructureReport:
    """Compare computed singular data of ``F_{m+lp, mprime+1/2}`` with the predicted diagram."""
    degeneracy_check(params, m, mprime, l)
    j = params.label_j(m + l * params.p, mprime + Rat(1, 2))
    sector = Sector(j, params)
    rep = scan_structure(sector, maxN)
    preds = predicted_vectors(params, m, mprime, l, maxN)
    rep.predicted = [(pr.name, int(pr.degree), pr.j) for pr in preds]

    def expect(prefix):
        return sorted((int(pr.degree), pr.j) for pr in preds if pr.name[0] == prefix)

    rep.matches["u"] = rep.singular == expect("u")
    rep.matches["w"] = rep.cosingular == expect("w")
    rep.matches["v"] = rep.quotient_singular == expect("v")
    rep.matches["w_in_second_quotient"] = rep.second_quotient_singular == expect("w")

    # diagram arrows whose endpoints are within reach
    named = {}
    for letter in ("u", "v", "w"):
        found = sorted(rep._vectors[letter], key=lambda sv: (sv.degree, sv.eigenvalue))
        for pr in preds:
            if pr.name[0] != letter:
                continue
            for sv in found:
                if sv.degree == pr.degree and sv.eigenvalue == pr.j:
                    named[pr.name] = sv.vector
    u_vecs = [sv.vector for sv in rep._vectors["u"]]
    for src, dst in ARROWS:
        key = "%s->%s" % (src, dst)
        if src not in named or dst not in named:
            rep.arrows[key] = None
            continue
        gens = [named[src]] + (u_vecs if dst[0] == "v" else [])
        sub = submodule_closure(sector, gens, maxN)
        rep.arrows[key] = sub.contains(named[dst])

    reach = any(pr.name in ("u1", "w0") for pr in preds)
    ok = all(rep.matches.values()) and all(v is not False for v in rep.arrows.values())
    if not ok:
        rep.status = "fail"
    elif not reach:
        rep.status = "inconclusive"
    else:
        rep.status = "pass"
    return rep
