"""
Command line entry point.

    qovoid construct --p 13 --k 1 --out m13.json
    qovoid verify    --p 13 --k 1 --in m13.json
    qovoid orbits | counts | breakdown | selftest --p P --k K

Exit codes: 0 success, 1 verification failure, 2 bad configuration or I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import charcount, orbits as orb, ovoid
from .errors import NoSolution, NotPrime, EvenCharacteristic, UnsupportedQ
from .gf import FieldCtx, field_create, is_prime, prime_factors
from .quadric import Quadric, VecV

SUBCOMMANDS = ("construct", "verify", "orbits", "counts", "breakdown", "selftest")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int
    k: int = 1
    t: int | None = None
    out: str = "-"
    infile: str | None = None
    m: int | None = None
    case: int | None = None
    fmt: str = "json"
    workers: int = 1

    @property
    def q(self) -> int:
        return self.p ** self.k


def _prime_power_hint(n: int) -> str:
    fs = prime_factors(n)
    if len(fs) == 1:
        e = 0
        while n > 1:
            n //= fs[0]
            e += 1
        return " (did you mean --p %d --k %d?)" % (fs[0], e)
    return ""


def validate(cfg: RunConfig) -> FieldCtx:
    if cfg.workers < 1:
        raise ConfigError("--workers must be at least 1")
    if cfg.k < 1:
        raise ConfigError("--k must be a positive integer")
    if cfg.p == 2:
        raise ConfigError("p must be an odd prime (characteristic 2 is not supported)")
    if not is_prime(cfg.p):
        raise ConfigError("p must be prime%s" % _prime_power_hint(cfg.p))
    if cfg.command in ("construct", "verify", "breakdown"):
        try:
            ovoid.check_supported(cfg.q)
        except UnsupportedQ as e:
            raise ConfigError(str(e)) from None
    if cfg.command in ("orbits", "counts") and cfg.q % 4 != 1:
        raise ConfigError("q=%d: the group and the counts need q = 1 (mod 4)" % cfg.q)
    return field_create(cfg.p, cfg.k)


def point_json(ctx: FieldCtx, v: VecV) -> list:
    x, y, a, z = v
    return [x, y, list(ctx.split(a)), z]


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise ConfigError("cannot write %s: %s" % (cfg.out, e)) from None


def points_payload(ctx: FieldCtx, quad: Quadric, idx) -> dict:
    return {"q": ctx.q, "field": ctx.to_dict(), "points": [point_json(ctx, quad.point(int(i))) for i in idx]}


def points_csv(quad: Quadric, idx) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "c0", "c1", "z"])
    for i in idx:
        w.writerow([int(c) for c in quad.points[int(i)]])
    return buf.getvalue()


def load_points(ctx: FieldCtx, quad: Quadric, path: str) -> list[int]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as e:
        raise ConfigError("cannot read %s: %s" % (path, e)) from None
    if data.get("q", ctx.q) != ctx.q:
        raise ConfigError("%s holds a point set for q=%s, not q=%d" % (path, data.get("q"), ctx.q))
    fld = data.get("field")
    if fld is not None and fld != ctx.to_dict():
        raise ConfigError("%s was written with a different field model" % path)
    out = []
    for x, y, (c0, c1), z in data["points"]:
        try:
            out.append(quad.index(VecV(x, y, ctx.join(c0, c1), z)))
        except KeyError:
            raise ConfigError("point %r is not on the quadric" % ([x, y, [c0, c1], z],)) from None
    return out


def cmd_construct(cfg: RunConfig, ctx: FieldCtx) -> int:
    quad = Quadric(ctx, workers=cfg.workers)
    M = ovoid.construct_M(quad, ovoid.find_ab(ctx, cfg.t))
    idx = M.indices()
    if cfg.fmt == "csv":
        _emit(cfg, points_csv(quad, idx))
        return 0
    payload = points_payload(ctx, quad, idx)
    payload["params"] = M.params.as_dict()
    payload["component_sizes"] = M.sizes()
    _emit(cfg, _dump(payload))
    return 0


def cmd_verify(cfg: RunConfig, ctx: FieldCtx) -> int:
    quad = Quadric(ctx, workers=cfg.workers)
    if cfg.infile:
        S = load_points(ctx, quad, cfg.infile)
    else:
        S = ovoid.construct_M(quad, ovoid.find_ab(ctx, cfg.t)).indices()
    m = cfg.m if cfg.m is not None else (ctx.q - 1) // 2
    rep = ovoid.verify_m_ovoid(quad, S, m, workers=cfg.workers)
    _emit(cfg, _dump(rep.as_dict()))
    return 0 if rep.passed else 1


def cmd_orbits(cfg: RunConfig, ctx: FieldCtx) -> int:
    quad = Quadric(ctx)
    recs = orb.orbit_decomposition(quad)
    q = ctx.q
    out = [{"rep": point_json(ctx, r.representative), "length": r.length, "class": r.cls,
            "size_check": (q * q - 1) % r.length == 0 and len(r.members) == r.length}
           for r in recs]
    _emit(cfg, _dump(out))
    return 0


def cmd_counts(cfg: RunConfig, ctx: FieldCtx) -> int:
    c = charcount.square_shift_counts(ctx)
    recs = orb.orbit_decomposition(Quadric(ctx))
    charcount.census_cross_check(ctx, recs)
    cen = orb.census(recs)
    out = dict(c.as_dict(), short_orbits=cen[orb.SHORT], long_orbits=cen[orb.LONG])
    _emit(cfg, _dump(out))
    return 0


def cmd_breakdown(cfg: RunConfig, ctx: FieldCtx) -> int:
    quad = Quadric(ctx, workers=cfg.workers)
    action = orb.Action(quad)
    M = ovoid.construct_M(quad, ovoid.find_ab(ctx, cfg.t), action)
    cases = ovoid.LineCases(quad, action)
    bd = ovoid.breakdown_all(quad, M)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["line_key", "case", "c1", "c2", "c3", "c4", "c5", "total"])
    ok = True
    for i, row in enumerate(quad.lines):
        case = int(cases.tags[i])
        if cfg.case is not None and case != cfg.case:
            continue
        counts = [int(v) for v in bd[i]]
        ok &= sum(counts) == (ctx.q - 1) // 2
        tag = "reduced" if case == ovoid.REDUCED else str(case)
        w.writerow(["%d:%d" % (row[0], row[1]), tag] + counts + [sum(counts)])
    _emit(cfg, buf.getvalue())
    return 0 if ok else 1


def cmd_selftest(cfg: RunConfig, ctx: FieldCtx) -> int:
    from .checks import run_all

    results = run_all(ctx, cfg.workers, cfg.t)
    width = max(len(r.name) for r in results)
    lines = ["q=%d" % ctx.q]
    for r in results:
        lines.append("%-*s  %s  %s" % (width, r.name, "PASS" if r.passed else "FAIL", r.detail))
    _emit(cfg, "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "orbits": cmd_orbits,
    "counts": cmd_counts,
    "breakdown": cmd_breakdown,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qovoid", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int, required=True, help="odd prime characteristic")
        sp.add_argument("--k", type=int, default=1, help="q = p**k")
        sp.add_argument("--out", default="-", help="output file, '-' for stdout")
        sp.add_argument("--workers", type=int, default=1)
        if name in ("construct", "verify", "breakdown", "selftest"):
            sp.add_argument("--t", type=int, default=None, help="F_q code of t for (a, b)")
        if name == "construct":
            sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        if name == "verify":
            sp.add_argument("--in", dest="infile", default=None, help="point-set JSON to check")
            sp.add_argument("--m", type=int, default=None)
        if name == "breakdown":
            sp.add_argument("--case", type=int, default=None, choices=(1, 2, 3, 4, 5))
    return parser


def run(cfg: RunConfig) -> int:
    try:
        ctx = validate(cfg)
        return COMMANDS[cfg.command](cfg, ctx)
    except (ConfigError, NotPrime, EvenCharacteristic, UnsupportedQ, NoSolution) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
