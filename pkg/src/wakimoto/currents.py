"""Affine generators and the screening current as exact mode actions on Fock vectors.

Polynomial picture: a monomial is a polynomial in the creation variables
``y_{f,a} = phi_{f,-a}`` and an annihilator ``phi_{f,a}`` acts as
``kappa_f * a * d/dy_{f,a}``. The annihilation halves of the exponentials
are then translations::

    exp(C_-(z))  :  y_{0,a} -> y_{0,a} - 4 z^-a,   y_{2,a} -> y_{2,a} + 4 z^-a
    exp(D_-(z))  :  y_{1,b} -> y_{1,b} + 4 z^-b

and the creation halves are generated by the recursions ``t E_t = (1/k)
sum_{a odd} (y_{0,a} + y_{2,a}) E_{t-a}`` and ``t G_t = -(1/(k+2)) sum_{b
even} y_{1,b} G_{t-b}``. Every mode action is a finite sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb

from .exact import Rat, as_rat
from .fock import (
    FockVector,
    Monomial,
    Sector,
    _raw,
    degree,
    mono_mul,
    mono_remove,
)

HALF = Rat(1, 2)


# ---------------------------------------------------------------------------
# expansion templates


def _translate(mono: Monomial, shift) -> dict:
    """Expand the substitution ``y -> y + shift(mode) z^{-a}`` on ``mono``.

    Returns ``{(s, monomial): coefficient}`` for the ``z^{-s}`` terms.
    """
    groups = {}
    for mode in mono:
        groups[mode] = groups.get(mode, 0) + 1
    choices = []
    for mode, e in groups.items():
        c = shift(mode)
        if c is None:
            choices.append([(0, (mode,) * e, 1)])
            continue
        a = -mode[1]
        opts = []
        for i in range(e + 1):
            opts.append((a * i, (mode,) * (e - i), comb(e, i) * c ** i))
        choices.append(opts)
    out = {}
    for combo in product(*choices):
        s = 0
        parts = []
        coef = Rat(1)
        for si, part, ci in combo:
            s += si
            parts.extend(part)
            coef *= ci
        key = (s, tuple(sorted(parts)))
        out[key] = out.get(key, 0) + coef
    return {key: c for key, c in out.items() if c}


def _x_shift(mode):
    f = mode[0]
    if f == 0:
        return -4
    if f == 2:
        return 4
    return None


def _s_shift(mode):
    return 4 if mode[0] == 1 else None


@lru_cache(maxsize=None)
def exp_minus_x(mono: Monomial) -> tuple:
    return tuple(_translate(mono, _x_shift).items())


@lru_cache(maxsize=None)
def exp_minus_screen(mono: Monomial) -> tuple:
    return tuple(_translate(mono, _s_shift).items())


def _poly_mul(p: dict, q: dict) -> dict:
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def exp_plus_x(k: Rat, t: int) -> dict:
    """``z^t`` coefficient of ``exp(C_+(z))``, ``C_+ = (1/k) sum_{a odd} (y_{0,a} + y_{2,a}) z^a / a``."""
    if t == 0:
        return {(): Rat(1)}
    out = {}
    for a in range(1, t + 1, 2):
        for m, c in exp_plus_x(k, t - a).items():
            for f in (0, 2):
                key = mono_mul(m, ((f, -a),))
                out[key] = out.get(key, 0) + c / (k * t)
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def exp_plus_screen(kp2: Rat, t: int) -> dict:
    """``z^t`` coefficient of ``exp(D_+(z))``, ``D_+ = -(1/(k+2)) sum_{b even} y_{1,b} z^b / b``."""
    if t == 0:
        return {(): Rat(1)}
    if t % 2:
        return {}
    out = {}
    for b in range(2, t + 1, 2):
        for m, c in exp_plus_screen(kp2, t - b).items():
            key = mono_mul(m, ((1, -b),))
            out[key] = out.get(key, 0) - c / (kp2 * t)
    return {m: c for m, c in out.items() if c}


def _kappa(k: Rat, f: int) -> Rat:
    return 4 * k if f == 0 else (4 * (k + 2) if f == 1 else -4 * k)


# ---------------------------------------------------------------------------
# x(z) = 1/2 :(z d phi_1 + z d phi_2) exp((phi_0 + phi_2)/k):


@lru_cache(maxsize=None)
def _x_on_monomial(k: Rat, j: Rat, n: int, mono: Monomial) -> tuple:
    N = degree(mono)
    if N - n < 0:
        return ()
    out = {}

    def emit(poly: dict, mono_extra: Monomial, coef: Rat):
        for m, c in poly.items():
            key = mono_mul(m, mono_extra)
            out[key] = out.get(key, 0) + c * coef

    # annihilation part of the prefactor (zero mode included), then exp(C_-)
    pminus = [(0, mono, 2 * j)]
    for mode in set(mono):
        f, neg = mode
        if f == 0:
            continue
        a = -neg
        e = mono.count(mode)
        pminus.append((a, mono_remove(mono, mode), _kappa(k, f) * a * e))
    for s0, m0, c0 in pminus:
        for (s1, m1), c1 in exp_minus_x(m0):
            t = s0 + s1 - n
            if t >= 0:
                emit(exp_plus_x(k, t), m1, c0 * c1)

    # creation part of the prefactor sits left of everything
    for (s, m1), c1 in exp_minus_x(mono):
        for b in range(1, s - n + 1):
            t = s - n - b
            y = ((1, -b),) if b % 2 == 0 else ((2, -b),)
            emit(exp_plus_x(k, t), mono_mul(m1, y), c1)

    return tuple((m, c * HALF) for m, c in out.items() if c)


def act_x(n: int, v: FockVector, twist: bool = False) -> FockVector:
    """``x_n v``; with ``twist`` the sigma-twisted action ``-x_n``."""
    k, j = v.sector.k, v.sector.j
    out = {}
    for mono, c in v.terms.items():
        for m, d in _x_on_monomial(k, j, n, mono):
            out[m] = out.get(m, 0) + c * d
    sign = -1 if twist else 1
    return _raw(v.sector, {m: sign * c for m, c in out.items() if c})


def act_beta(n: int, v: FockVector) -> FockVector:
    """``beta_n v = 1/2 phi_{0,n} v``; even modes act as zero."""
    if n == 0:
        raise ValueError("no zero mode for beta")
    if n % 2 == 0:
        return FockVector(v.sector)
    out = {}
    if n < 0:
        for m, c in v.terms.items():
            key = mono_mul(m, ((0, n),))
            out[key] = out.get(key, 0) + c * HALF
        return _raw(v.sector, out)
    k = v.sector.k
    for m, c in v.terms.items():
        e = m.count((0, -n))
        if e:
            key = mono_remove(m, (0, -n))
            out[key] = out.get(key, 0) + c * HALF * 4 * k * n * e
    return _raw(v.sector, {m: c for m, c in out.items() if c})


def act_rho(v: FockVector) -> FockVector:
    """``rho = -d`` with ``d = h + degree``."""
    h = v.sector.h
    return _raw(v.sector, {m: -(h + degree(m)) * c for m, c in v.terms.items()})


@dataclass(frozen=True)
class GeneratorAction:
    """Handle for ``beta_n``, ``x_n``, ``c`` or ``rho`` (``twist`` flips ``x_n`` only)."""

    symbol: str
    n: int | None = None
    twist: bool = False

    def __post_init__(self):
        if self.symbol not in ("beta", "x", "c", "rho"):
            raise ValueError("unknown generator %r" % self.symbol)
        if self.symbol in ("beta", "x") and self.n is None:
            raise ValueError("%s needs a mode index" % self.symbol)

    def __call__(self, v: FockVector) -> FockVector:
        return act_generator(self, v)


def act_generator(g: GeneratorAction, v: FockVector) -> FockVector:
    if g.symbol == "c":
        return v * v.sector.k
    if g.symbol == "rho":
        return act_rho(v)
    if g.symbol == "beta":
        return act_beta(g.n, v)
    return act_x(g.n, v, g.twist)


# ---------------------------------------------------------------------------
# S(z) = 1/2 z^{2/(k+2)} :z d phi_2 exp(-phi_1/(k+2)):


def screening_offset(sector: Sector) -> Rat:
    """Fractional exponent ``F = 2(1-j)/(k+2)``; every term of ``S(z)v`` has exponent ``F`` + odd."""
    return 2 * (1 - sector.j) / sector.params.kp2


@lru_cache(maxsize=None)
def _screen_on_monomial(k: Rat, R: int, mono: Monomial) -> tuple:
    kp2 = k + 2
    out = {}

    def emit(t, extra: Monomial, coef):
        if t < 0:
            return
        for m, c in exp_plus_screen(kp2, t).items():
            key = mono_mul(m, extra)
            out[key] = out.get(key, 0) + c * coef

    for (s, m1), c1 in exp_minus_screen(mono):
        # creation modes of z d phi_2
        for a in range(1, R + s + 1, 2):
            emit(R + s - a, mono_mul(m1, ((2, -a),)), c1)
        # annihilation modes of z d phi_2
        for mode in set(m1):
            if mode[0] != 2:
                continue
            a = -mode[1]
            e = m1.count(mode)
            emit(R + s + a, mono_remove(m1, mode), c1 * (-4 * k * a * e))
    return tuple((m, c * HALF) for m, c in out.items() if c)


def screening_coefficient(r, v: FockVector) -> FockVector:
    """Coefficient of ``z^r`` in ``S(z) v``; lives in sector ``j - 2``."""
    r = as_rat(r)
    R = r - screening_offset(v.sector)
    if R.denominator != 1 or R.numerator % 2 == 0:
        raise ValueError("unreachable exponent %s on sector j=%s" % (r, v.sector.j))
    R = int(R)
    target = v.sector.shifted(-2)
    out = {}
    k = v.sector.k
    for mono, c in v.terms.items():
        for m, d in _screen_on_monomial(k, R, mono):
            out[m] = out.get(m, 0) + c * d
    return _raw(target, {m: c for m, c in out.items() if c})


# ---------------------------------------------------------------------------
# relation suites


def _sgn(m: int) -> int:
    return -1 if m % 2 else 1


def relation_failures(v: FockVector, M: int = 3, twist: bool = False) -> tuple[int, list]:
    """Check every bracket and rho-grading relation with ``|m|, |n| <= M`` on ``v``.

    ``beta`` lives in odd modes only; ``beta_0`` and ``beta_even`` are zero.
    Returns ``(number of checks, failing relations)``.
    """
    k = v.sector.k
    zero = FockVector(v.sector)
    checks = 0
    bad = []

    def x(n, w):
        return act_x(n, w, twist)

    def beta(n, w):
        return act_beta(n, w) if n % 2 else FockVector(w.sector)

    xs = {n: x(n, v) for n in range(-M, M + 1)}
    odd = [n for n in range(-M, M + 1) if n % 2]
    bs = {n: act_beta(n, v) for n in odd}
    rv = act_rho(v)
    for m in odd:
        for n in odd:
            checks += 1
            lhs = act_beta(m, bs[n]) - act_beta(n, bs[m])
            rhs = v * (m * k) if m + n == 0 else zero
            if lhs != rhs:
                bad.append(("[beta,beta]", m, n))
        for n in range(-M, M + 1):
            checks += 1
            lhs = act_beta(m, xs[n]) - x(n, bs[m])
            if lhs != x(m + n, v) * 2:
                bad.append(("[beta,x]", m, n))
    for m in range(-M, M + 1):
        for n in range(-M, M + 1):
            checks += 1
            lhs = x(m, xs[n]) - x(n, xs[m])
            rhs = beta(m + n, v) * (-2 * _sgn(m)) if m + n else zero
            if m + n == 0:
                rhs = rhs + v * (m * k * _sgn(m))
            if lhs != rhs:
                bad.append(("[x,x]", m, n))
    for n in range(-M, M + 1):
        checks += 1
        if act_rho(xs[n]) - x(n, rv) != xs[n] * n:
            bad.append(("[rho,x]", n, None))
        if n % 2:
            checks += 1
            if act_rho(bs[n]) - act_beta(n, rv) != bs[n] * n:
                bad.append(("[rho,beta]", n, None))
    checks += 1
    if act_generator(GeneratorAction("c"), v) != v * k:
        bad.append(("c", None, None))
    return checks, bad


def highest_weight_failures(sector: Sector, D: int = 5, twist: bool = False) -> tuple[int, list]:
    """``x_n nu = beta_n nu = 0`` for ``0 < n <= D`` and ``x_0 nu = +-j nu``."""
    from .fock import vacuum

    nu = vacuum(sector)
    checks = 0
    bad = []
    for n in range(1, D + 1):
        checks += 1
        if not act_x(n, nu, twist).is_zero():
            bad.append(("x", n))
        if n % 2:
            checks += 1
            if not act_beta(n, nu).is_zero():
                bad.append(("beta", n))
    checks += 1
    if act_x(0, nu, twist) != nu * (-sector.j if twist else sector.j):
        bad.append(("x", 0))
    return checks, bad


def relation_suite(sector: Sector, D: int = 5, M: int = 3, twist: bool = False) -> tuple[int, list]:
    """Relation and highest-weight checks on every basis vector of degree ``<= D``."""
    from .fock import enumerate_basis

    checks, bad = highest_weight_failures(sector, D, twist)
    for N in range(D + 1):
        for mono in enumerate_basis(sector, N):
            c, b = relation_failures(FockVector.basis_vector(sector, mono), M, twist)
            checks += c
            bad.extend((mono,) + f for f in b)
    return checks, bad
