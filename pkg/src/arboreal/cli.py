"""Command-line entry point: ``arboreal <command> ...``.

Tabular output is CSV, certificates are JSON lines, and any failure is
reported as a JSON object on stderr with exit status 1 (bad input),
2 (budget exceeded) or 3 (verification mismatch).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from typing import Optional, Sequence

from . import __version__
from .certify import (
    Certificate,
    certify_finite_index,
    certify_maximality,
    nonpoly_verify,
    pcf_search,
    replay,
    scan_range,
    sigma_primes,
)
from .config import RunConfig
from .discriminants import disc_report_aut, disc_report_general
from .errors import ArborealError, PreconditionError, ResourceError, VerificationError
from .numkernel import as_fraction
from .quadmap import GenQuadMap
from .sieve import custom_search, mod_orbit
from .tables import CONGRUENCE_TABLE, SCAN_PARTITION, SIGMA_BELOW_2000
from .treegroups import (
    ENUM_CAP,
    centralizer_fixprop,
    density_rows,
    enumerate_aut,
    enumerate_centralizer,
    fixprop,
    group_orders,
    kernel,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise PreconditionError(f"{self.prog}: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _out_path(cfg: RunConfig, name: str) -> str:
    return name if os.path.isabs(name) or os.path.dirname(name) else os.path.join(cfg.out_dir, name)


def _csv_writer(fh, fields):
    w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    return w


def cmd_certify(args, cfg: RunConfig) -> int:
    k, b = as_fraction(args.k), as_fraction(args.b)
    print(certify_finite_index(k, b, cfg).to_json())
    if b == 1:
        print(certify_maximality(k, args.max_level, cfg).to_json())
    return 0


def cmd_scan(args, cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    summary, lines = scan_range(args.k_from, args.k_to, cfg, args.jobs)
    path = _out_path(cfg, args.out)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        for line in lines:
            fh.write(line + "\n")
    out = summary.to_dict() | {"out": path, "seconds": round(time.perf_counter() - t0, 3)}
    if (args.k_from, args.k_to) == (1, 10000):
        out["expected_partition"] = SCAN_PARTITION
    print(_dump(out))
    return 0


def table1_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for k, p, tail, cycle, exc in CONGRUENCE_TABLE:
        res = custom_search(k, cfg.sieve_prime_bound, cfg.sieve_clean_below)
        got = (None, None, None, ()) if res is None else (res.p, res.report.tail_len, res.report.cycle_len, tuple(res.report.exceptional_levels))
        rows.append(
            {
                "k": k,
                "p": got[0],
                "tail": got[1],
                "cycle": got[2],
                "exceptional_n": " ".join(map(str, got[3])),
                "match": got == (p, tail, cycle, exc),
                "expected": f"{p}|{tail}|{cycle}|{' '.join(map(str, exc))}",
            }
        )
    return rows


def cmd_table1(args, cfg: RunConfig) -> int:
    rows = table1_rows(cfg)
    w = _csv_writer(sys.stdout, ["k", "p", "tail", "cycle", "exceptional_n", "match", "expected"])
    for r in rows:
        w.writerow(r | {"match": int(r["match"])})
    ok = sum(r["match"] for r in rows)
    print(f"{ok}/{len(rows)} rows match", file=sys.stderr)
    if args.plot:
        from .plotting import plot_orbit

        for k, p, *_ in CONGRUENCE_TABLE:
            plot_orbit(mod_orbit(k, p), os.path.join(_out_path(cfg, args.plot), f"orbit_k{k}_p{p}.png"), f"k = {k}, p = {p}")
    if ok != len(rows):
        raise VerificationError(f"{len(rows) - ok} rows differ from the reference table")
    return 0


def cmd_sieve(args, cfg: RunConfig) -> int:
    rep = mod_orbit(as_fraction(args.k), args.p, args.kind)
    print(_dump(rep.to_dict() | {"qr_flags": rep.qr_flags}))
    if args.plot:
        from .plotting import plot_orbit

        plot_orbit(rep, _out_path(cfg, args.plot))
    return 0


def cmd_sigma(args, cfg: RunConfig) -> int:
    bound = args.bound or cfg.sigma_bound
    s = sigma_primes(bound)
    w = _csv_writer(sys.stdout, ["p", "first_hit"])
    for p in s.primes:
        w.writerow({"p": p, "first_hit": s.first_hit[p]})
    if bound == 2000 and s.primes != SIGMA_BELOW_2000:
        raise VerificationError("prime list differs from the reference list below 2000")
    return 0


def cmd_disc_check(args, cfg: RunConfig) -> int:
    if args.map:
        rep = disc_report_general(GenQuadMap.parse(args.map), args.n)
    else:
        if args.k is None:
            raise PreconditionError("disc-check needs --k (and optionally --b) or --map")
        rep = disc_report_aut(as_fraction(args.k), as_fraction(args.b), args.n)
    print(_dump(rep.to_dict()))
    if not rep.match:
        raise VerificationError("closed form and direct discriminant differ in absolute value")
    return 0


def cmd_pcf(args, cfg: RunConfig) -> int:
    print(_dump({"height_bound": args.height_bound, "pcf": [str(k) for k in pcf_search(args.height_bound)]}))
    return 0


def cmd_nonpoly(args, cfg: RunConfig) -> int:
    rep = nonpoly_verify(args.levels, cfg.exact_level_cap)
    print(_dump(rep.to_dict()))
    if not rep.passed:
        raise VerificationError("nonpoly checks failed: " + ", ".join(g.name for g in rep.groups if not g.passed))
    return 0


def cmd_density(args, cfg: RunConfig) -> int:
    rows = density_rows(args.n_max)
    w = _csv_writer(sys.stdout, ["n", "fixprop", "n_fixprop", "fixprop_lo", "fixprop_hi", "exact"])
    for n, lo, hi in rows:
        mid = (lo + hi) / 2
        w.writerow(
            {
                "n": n,
                "fixprop": f"{float(mid):.12g}",
                "n_fixprop": f"{float(n * mid):.12g}",
                "fixprop_lo": f"{float(lo):.17g}",
                "fixprop_hi": f"{float(hi):.17g}",
                "exact": str(lo) if lo == hi and n <= 8 else "",
            }
        )
    if args.plot:
        from .plotting import plot_density

        plot_density(rows, _out_path(cfg, args.plot))
    return 0


def cmd_frobenius(args, cfg: RunConfig) -> int:
    from .frobenius import root_density_sample

    pmin = args.pmin or cfg.sample_pmin
    pmax = args.pmax or cfg.sample_pmax
    rep = root_density_sample(as_fraction(args.k), as_fraction(args.b), args.level, pmin, pmax, cfg)
    path = _out_path(cfg, args.csv)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        w = _csv_writer(fh, ["p", "degrees", "has_root", "excluded"])
        for s in rep.samples:
            w.writerow(s.to_row())
    out = rep.summary() | {"csv": path}
    if args.plot:
        from .plotting import plot_frobenius

        out["plot"] = plot_frobenius(rep, _out_path(cfg, args.plot))
    print(_dump(out))
    return 0


def cmd_groups(args, cfg: RunConfig) -> int:
    rep = group_orders(args.n).to_dict() | {"fixprop": str(fixprop(args.n))}
    if args.enumerate:
        if args.n > ENUM_CAP:
            raise ResourceError(f"enumeration is capped at n = {ENUM_CAP}")
        C = enumerate_centralizer(args.n)
        rep["enumerated"] = {
            "order_aut": len(enumerate_aut(args.n)),
            "order_C": len(C),
            "kernel_order": len(kernel(C, args.n - 1)) if args.n >= 2 else len(C),
            "centralizer_fixprop": str(centralizer_fixprop(args.n)),
        }
    print(_dump(rep))
    return 0


def cmd_replay(args, cfg: RunConfig) -> int:
    bad = 0
    with open(args.certs) as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cert = Certificate.from_json(line)
            ok = replay(cert, cfg)
            bad += not ok
            print(_dump({"line": i, "k": str(cert.k), "verdict": cert.label, "replayed": ok}))
    if bad:
        raise VerificationError(f"{bad} certificates failed to replay")
    return 0


def build_parser() -> argparse.ArgumentParser:
    d = RunConfig()
    ap = _Parser(prog="arboreal", description="Certificates and experiments for the maps k(x^2 + b)/x.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--config", help="JSON config file (default: $ARBOREAL_CONFIG)")
    ap.add_argument("--out-dir", help=f"directory for relative output paths (default {d.out_dir!r})")
    ap.add_argument("--exact-levels", type=int, help=f"delta_n levels re-checked exactly (default {d.exact_levels})")
    ap.add_argument("--trial-bound", type=int, help=f"trial division bound (default {d.trial_bound})")
    ap.add_argument("--sieve-prime-bound", type=int, help=f"custom congruence search bound (default {d.sieve_prime_bound})")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", help="finite-index and maximality certificates for one k")
    p.add_argument("--k", required=True)
    p.add_argument("--b", default="1")
    p.add_argument("--max-level", type=int, help=f"maximality level (default {d.max_level})")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scan", help="certify every integer k in a range")
    p.add_argument("--from", dest="k_from", type=int, required=True)
    p.add_argument("--to", dest="k_to", type=int, required=True)
    p.add_argument("--jobs", type=int, help=f"worker processes (default {d.jobs})")
    p.add_argument("--out", default="certs.jsonl")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("table1", help="reproduce the custom congruence table")
    p.add_argument("--plot", metavar="DIR", help="also draw one orbit strip per row into DIR")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sieve", help="mod-p orbit of (delta, eps) or (S, T)")
    p.add_argument("--k", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--kind", choices=["delta", "st"], default="delta")
    p.add_argument("--plot", metavar="PNG")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("sigma", help="primes dividing some a_n, with first-hit levels")
    p.add_argument("--bound", type=int, help=f"prime bound (default {d.sigma_bound})")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("disc-check", help="closed-form discriminant against the direct one")
    p.add_argument("--k")
    p.add_argument("--b", default="1")
    p.add_argument("--map", help="coefficients p0,p1,p2/q0,q1,q2 (constant first)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_disc_check)

    p = sub.add_parser("pcf", help="post-critically finite k of bounded height")
    p.add_argument("--height-bound", type=int, default=2)
    p.set_defaults(func=cmd_pcf)

    p = sub.add_parser("nonpoly", help="exact checks for (1 + 3x^2)/(1 - 4x - x^2)")
    p.add_argument("--levels", type=int, default=10)
    p.set_defaults(func=cmd_nonpoly)

    p = sub.add_parser("density", help="fixed-point proportion of C_n")
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--plot", metavar="PNG")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("frobenius", help="root density of p_N modulo primes")
    p.add_argument("--k", default="1")
    p.add_argument("--b", default="1")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--pmin", type=int, help=f"default {d.sample_pmin}")
    p.add_argument("--pmax", type=int, help=f"default {d.sample_pmax}")
    p.add_argument("--csv", default="frobenius.csv", help="per-prime CSV path")
    p.add_argument("--plot", metavar="PNG")
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("groups", help="orders of Aut(T_n) and C_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--enumerate", action="store_true")
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("replay", help="re-verify a JSON-lines certificate file")
    p.add_argument("certs")
    p.set_defaults(func=cmd_replay)
    return ap


def _config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig.default()
    return cfg.replace(
        out_dir=args.out_dir,
        exact_levels=args.exact_levels,
        trial_bound=args.trial_bound,
        sieve_prime_bound=args.sieve_prime_bound,
        jobs=getattr(args, "jobs", None),
        max_level=getattr(args, "max_level", None),
    ).stamped()


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, _config(args))
    except ArborealError as exc:
        print(_dump(exc.to_json()), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
