"""Command-line front end.

    wakimoto relations  --k 1/1 --degree 4
    wakimoto detc       --k 1/3 --degree 3 --jobs 4
    wakimoto structure  --p 3 --pprime 1 --m 2 --mprime 0 --degree 4
    wakimoto euler      --p 5 --pprime 2 --m 2 --mprime 1 --order 20

Exit codes: 0 every check passed, 1 a check failed (or the run was
inconclusive or hit an internal error), 2 usage or configuration error,
3 the request is mathematically undefined.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from math import gcd

from . import __version__
from .characters import (
    ComplexDescriptor,
    bgg_character,
    euler_character,
    module_character,
    q1_checks,
    q1_defined,
)
from .currents import relation_suite
from .exact import Rat, as_rat, fstr, series_compare
from .fock import FockVector, ModuleParams, Sector, WeightLabel
from .structure import (
    annihilator_kernel,
    cosingular_report,
    degeneracy_check,
    detc,
    predicted_vectors,
    verify_structure,
)

COMMANDS = ("relations", "detc", "singular", "cosingular", "structure",
            "characters", "euler", "screening")
FORMATS = ("json", "csv", "text")
DEFAULT_J = ("0", "1/2", "2")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_UNDEFINED = 0, 1, 2, 3


class ConfigError(Exception):
    """Bad flags or config file; exit 2."""


class Undefined(Exception):
    """A well-formed request with no mathematical meaning; exit 3."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    p: int | None = None
    pprime: int | None = None
    k: Rat | None = None
    m: int | None = None
    mprime: int = 0
    l: int = 0
    j: Rat | None = None
    degree: int = 4
    order: int = 20
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    cache: str | None = None

    @property
    def params(self) -> ModuleParams:
        if self.p is not None:
            return ModuleParams.from_pp(self.p, self.pprime)
        return ModuleParams.generic(self.k)

    def canonical(self) -> dict:
        """Fields that determine the result (not where or how it is written)."""
        skip = {"format", "out", "jobs", "cache"}
        out = {}
        for f in fields(self):
            if f.name in skip:
                continue
            v = getattr(self, f.name)
            out[f.name] = fstr(v) if f.name in ("k", "j") and v is not None else v
        return out


_INT_KEYS = ("p", "pprime", "m", "mprime", "l", "degree", "order", "jobs")
_RAT_KEYS = ("k", "j")
_STR_KEYS = ("format", "out", "cache")
KEYS = _INT_KEYS + _RAT_KEYS + _STR_KEYS


def _coerce(key: str, raw):
    if raw is None:
        return None
    try:
        if key in _INT_KEYS:
            if isinstance(raw, int):
                return raw
            return int(str(raw).strip())
        if key in _RAT_KEYS:
            return as_rat(raw)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError("bad value for %s: %r (%s)" % (key, raw, exc)) from None
    return str(raw).strip()


def read_config_file(path: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value" % (path, lineno))
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in KEYS:
                raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
            out[key] = value
    return out


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """File values first, then every non-None override on top; validated."""
    merged = {}
    if path is not None and os.path.exists(path):
        merged.update(read_config_file(path))
    elif path is not None:
        raise ConfigError("config file not found: %s" % path)
    for key, value in overrides.items():
        if key not in KEYS:
            raise ConfigError("unknown key %r" % key)
        if value is not None:
            merged[key] = value
    values = {key: _coerce(key, raw) for key, raw in merged.items()}
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    has_pp = cfg.p is not None or cfg.pprime is not None
    if has_pp and cfg.k is not None:
        raise ConfigError("give either (p, pprime) or k, not both")
    if has_pp:
        if cfg.p is None or cfg.pprime is None:
            raise ConfigError("p and pprime must be given together")
        if cfg.p < 1 or cfg.pprime < 1:
            raise ConfigError("p and pprime must be positive")
        if gcd(cfg.p, cfg.pprime) != 1:
            raise ConfigError("p=%d and pprime=%d are not coprime" % (cfg.p, cfg.pprime))
        if Rat(cfg.p, cfg.pprime) in (0, 2):
            raise ConfigError("p/pprime = %s gives an excluded level" % Rat(cfg.p, cfg.pprime))
    elif cfg.k is None:
        raise ConfigError("a level is required: --k or --p/--pprime")
    elif cfg.k in (0, -2):
        raise ConfigError("level k=%s is excluded (k must avoid 0 and -2)" % cfg.k)
    if cfg.degree < 0 or cfg.order < 0:
        raise ConfigError("degree and order must be >= 0")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if cfg.l < 0:
        raise ConfigError("l must be >= 0")
    if cfg.format not in FORMATS:
        raise ConfigError("format must be one of %s" % ", ".join(FORMATS))
    if cfg.m is not None:
        if cfg.p is None:
            raise ConfigError("label m needs (p, pprime)")
        try:
            degeneracy_check(cfg.params, cfg.m, cfg.mprime, cfg.l)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# payload helpers


def _vector_json(v: FockVector) -> dict:
    out = {}
    for mono in sorted(v.terms):
        name = "*".join("phi%d(%d)" % mode for mode in mono) or "1"
        out[name] = fstr(v.terms[mono])
    return out


def _require_labels(cfg: RunConfig, command: str) -> None:
    if cfg.m is None or cfg.p is None:
        raise ConfigError("%s needs --p, --pprime and --m" % command)


def _labelled_j(cfg: RunConfig, shift: int = 0) -> Rat:
    params = cfg.params
    return params.label_j(cfg.m + cfg.l * params.p + shift, cfg.mprime + Rat(1, 2))


def _sector(cfg: RunConfig, command: str) -> Sector:
    if cfg.j is not None:
        return Sector(cfg.j, cfg.params)
    if cfg.m is not None:
        return Sector(_labelled_j(cfg), cfg.params)
    raise ConfigError("%s needs --j or --m" % command)


def _pool(cfg: RunConfig):
    return ProcessPoolExecutor(max_workers=cfg.jobs) if cfg.jobs > 1 else None


# ---------------------------------------------------------------------------
# commands; each returns (status, payload)


def _relations_job(args):
    k, j, D = args
    checks, bad = relation_suite(Sector(j, ModuleParams(k)), D, 3)
    return checks, [repr(b) for b in bad[:10]], len(bad)


def cmd_relations(cfg: RunConfig):
    if cfg.j is not None:
        js = [cfg.j]
    elif cfg.m is not None:
        js = [_labelled_j(cfg)]
    else:
        js = [as_rat(s) for s in DEFAULT_J]
    jobs = [(cfg.params.k, j, cfg.degree) for j in js]
    pool = _pool(cfg)
    try:
        results = list(pool.map(_relations_job, jobs)) if pool else [_relations_job(a) for a in jobs]
    finally:
        if pool:
            pool.shutdown()
    rows = []
    for j, (checks, sample, nbad) in zip(js, results):
        rows.append({"j": fstr(j), "checks": checks, "failures": nbad, "first_failures": sample})
    status = "pass" if all(r["failures"] == 0 for r in rows) else "fail"
    return status, {"degree": cfg.degree, "mode_bound": 3, "sectors": rows}


def cmd_detc(cfg: RunConfig):
    if cfg.degree < 1:
        raise ConfigError("detc needs --degree >= 1")
    pool = _pool(cfg)
    try:
        res = detc(cfg.degree, cfg.params, pool=pool)
    finally:
        if pool:
            pool.shutdown()
    payload = {
        "N": res.N,
        "monic_roots": [{"root": fstr(r), "multiplicity": mult} for r, mult in res.roots],
        "total_degree": res.total_degree,
        "lemma_match": res.lemma_match,
    }
    return ("pass" if res.lemma_match else "fail"), payload


def cmd_singular(cfg: RunConfig):
    sector = _sector(cfg, "singular")
    found = []
    for N in range(1, cfg.degree + 1):
        for sv in annihilator_kernel(sector, N):
            found.append({"degree": N, "eigenvalue": fstr(sv.eigenvalue),
                          "vector": _vector_json(sv.vector)})
    payload = {"j": fstr(sector.j), "singular": found}
    status = "pass"
    if cfg.m is not None and cfg.j is None:
        preds = predicted_vectors(cfg.params, cfg.m, cfg.mprime, cfg.l, cfg.degree)
        expect = sorted((int(p.degree), p.j) for p in preds if p.name[0] == "u")
        got = sorted((e["degree"], as_rat(e["eigenvalue"])) for e in found)
        payload["predicted"] = [{"degree": d, "eigenvalue": fstr(w)} for d, w in expect]
        status = "pass" if got == expect else "fail"
    return status, payload


def cmd_cosingular(cfg: RunConfig):
    sector = _sector(cfg, "cosingular")
    rep = cosingular_report(sector, cfg.degree)
    payload = {
        "j": fstr(sector.j),
        "cosingular": [{"degree": e.degree, "weight": fstr(e.weight),
                        "representative": _vector_json(e.representative)}
                       for e in rep.entries],
        "first_det_zero": rep.first_det_zero,
        "quotient_weights": [fstr(w) for w in rep.quotient_weights],
        "consistent": rep.consistent,
    }
    ok = rep.consistent
    if cfg.m is not None and cfg.j is None:
        preds = predicted_vectors(cfg.params, cfg.m, cfg.mprime, cfg.l, cfg.degree)
        expect = sorted((int(p.degree), p.j) for p in preds if p.name[0] == "w")
        got = sorted((e.degree, e.weight) for e in rep.entries)
        payload["predicted"] = [{"degree": d, "weight": fstr(w)} for d, w in expect]
        ok = ok and got == expect
    return ("pass" if ok else "fail"), payload


def cmd_structure(cfg: RunConfig):
    _require_labels(cfg, "structure")
    rep = verify_structure(cfg.params, cfg.m, cfg.mprime, cfg.l, cfg.degree)

    def pairs(xs):
        return [{"degree": d, "weight": fstr(w)} for d, w in xs]

    payload = {
        "j": fstr(rep.sector.j),
        "pattern": rep.pattern,
        "singular": pairs(rep.singular),
        "cosingular": pairs(rep.cosingular),
        "quotient_singular": pairs(rep.quotient_singular),
        "second_quotient_singular": pairs(rep.second_quotient_singular),
        "predicted": [{"name": n, "degree": d, "weight": fstr(w)} for n, d, w in rep.predicted],
        "matches": dict(sorted(rep.matches.items())),
        "arrows": dict(sorted(rep.arrows.items())),
        "closure_dims": rep.closure_dims,
    }
    return rep.status, payload


def cmd_characters(cfg: RunConfig):
    if cfg.m is not None and cfg.j is None:
        ch = bgg_character(cfg.params, cfg.m, cfg.mprime, cfg.order)
        return "pass", ch.to_json()
    sector = _sector(cfg, "characters")
    ch = module_character("fock", WeightLabel.of(cfg.params, sector.j), cfg.order)
    return "pass", ch.to_json()


def cmd_euler(cfg: RunConfig):
    _require_labels(cfg, "euler")
    if cfg.l:
        raise ConfigError("euler uses the top of the diagram; l must be 0")
    desc = ComplexDescriptor(cfg.params, cfg.m, cfg.mprime)
    eu = euler_character(desc, cfg.order)
    bgg = bgg_character(cfg.params, cfg.m, cfg.mprime, cfg.order)
    cmp = series_compare(eu, bgg)
    payload = {"euler": eu.to_json(), "bgg": bgg.to_json(), "equal": cmp.equal,
               "positions": desc.positions_within(cfg.order)}
    if not cmp.equal:
        payload["first_mismatch"] = {"degree": cmp.degree, "euler": fstr(cmp.left),
                                     "bgg": fstr(cmp.right)}
    return ("pass" if cmp.equal else "fail"), payload


def cmd_screening(cfg: RunConfig):
    # the source is given directly by --j, or as the module two steps above
    # F_{m+lp, m'+1/2}, so that Q^1 lands on the labelled module
    if cfg.j is not None:
        source = Sector(cfg.j, cfg.params)
    else:
        _require_labels(cfg, "screening")
        source = Sector(_labelled_j(cfg, 2), cfg.params)
    if not q1_defined(source):
        raise Undefined("Q1 not defined on F_j with j=%s" % fstr(source.j))
    rep = q1_checks(source, cfg.degree)
    payload = {
        "source_j": fstr(rep.source.j),
        "target_j": fstr(rep.target.j),
        "degree_shift": rep.degree_shift,
        "checks": rep.checks,
        "failures": len(rep.failures),
        "vacuum_image": _vector_json(rep.vacuum_image),
        "kernel_vector": _vector_json(rep.kernel_vector) if rep.kernel_vector is not None else None,
        "proportionality": fstr(rep.proportionality) if rep.proportionality is not None else None,
    }
    return ("pass" if rep.ok else "fail"), payload


HANDLERS = {
    "relations": cmd_relations, "detc": cmd_detc, "singular": cmd_singular,
    "cosingular": cmd_cosingular, "structure": cmd_structure,
    "characters": cmd_characters, "euler": cmd_euler, "screening": cmd_screening,
}

STATUS_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_FAIL,
               "error": EXIT_FAIL, "undefined": EXIT_UNDEFINED}


# ---------------------------------------------------------------------------
# records, cache, rendering


def _record(command, cfg, status, payload) -> dict:
    return {"command": command, "params": cfg.canonical(), "status": status,
            "payload": payload, "version": __version__}


def cache_key(command: str, cfg: RunConfig) -> str:
    blob = json.dumps([command, cfg.canonical(), __version__], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_load(path):
    if path is None or not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cache_store(path, key, record):
    data = _cache_load(path)
    data[key] = record
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
    os.replace(tmp, path)


def run(command: str, cfg: RunConfig) -> tuple[dict, int]:
    """Execute ``command``; return ``(record, exit code)``."""
    if command not in HANDLERS:
        raise ConfigError("unknown command %r" % command)
    key = cache_key(command, cfg)
    if cfg.cache:
        hit = _cache_load(cfg.cache).get(key)
        if hit is not None:
            return hit, STATUS_EXIT[hit["status"]]
    try:
        status, payload = HANDLERS[command](cfg)
    except Undefined as exc:
        status, payload = "undefined", {"reason": str(exc)}
    except (ArithmeticError, ValueError) as exc:
        status, payload = "error", {"reason": "%s: %s" % (type(exc).__name__, exc)}
    rec = _record(command, cfg, status, payload)
    if cfg.cache and status in ("pass", "fail", "inconclusive"):
        _cache_store(cfg.cache, key, rec)
    return rec, STATUS_EXIT[status]


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in obj:
            yield from _flatten(obj[k], "%s.%s" % (prefix, k) if prefix else str(k))
    elif isinstance(obj, list):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, "%s[%d]" % (prefix, i))
    elif obj is None:
        yield prefix, ""
    elif isinstance(obj, bool):
        yield prefix, "true" if obj else "false"
    else:
        yield prefix, str(obj)


def render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, sort_keys=True, indent=2) + "\n"
    rows = list(_flatten(record))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        w.writerows(rows)
        return buf.getvalue()
    width = max(len(k) for k, _ in rows)
    return "".join("%-*s  %s\n" % (width, k, v) for k, v in rows)


# ---------------------------------------------------------------------------
# argv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wakimoto", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat key = value file")
        for key in ("p", "pprime", "m", "mprime", "l", "degree", "order", "jobs"):
            sp.add_argument("--" + key, type=int, default=None)
        sp.add_argument("--k", default=None, help="level as a fraction a/b")
        sp.add_argument("--j", default=None, help="sector label as a fraction a/b")
        sp.add_argument("--format", choices=FORMATS, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--cache", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {key: getattr(args, key) for key in KEYS}
    try:
        cfg = load_config(args.config, overrides)
        rec, code = run(args.command, cfg)
    except ConfigError as exc:
        print("wakimoto: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    text = render(rec, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
