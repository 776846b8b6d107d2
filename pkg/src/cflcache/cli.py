"""Command-line front end.

    cflcache rates    --n 3 --k 3 --delta 1
    cflcache schedule --n 3 --k 3 --demand 1,2,3 --delta 1
    cflcache verify   --n 3 --k 3
    cflcache simulate --n 3 --k 4 --demand 1,2,3,1 --delta 1 --trials 1000 --seed 7

Exit codes: 0 success, 1 verification failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .caching import CachingParams, cfl_place
from .delivery import cfl_deliver, first_undecodable
from .ec_delivery import build_ec_schedule, end_to_end_sim
from .ecc import CodeTable, load_code_table
from .gic import DEFAULT_SAMPLES, build_gic_instance, certify_demand
from .rates import rate_report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
VERIFY_MAX_DEMANDS = 10**5
CODE_TABLE_ENV = "CFL_CODE_TABLE"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N: int
    K: int
    demand: tuple[int, ...] | None
    delta: int
    bits: int
    trials: int | None
    seed: int
    code_table: str | None
    format: str
    out: str | None
    exhaustive: bool

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        demand = None
        if ns.demand:
            try:
                demand = tuple(int(x) for x in ns.demand.split(","))
            except ValueError:
                raise ConfigError(f"demand must be comma-separated integers, got {ns.demand!r}")
        if ns.delta < 0:
            raise ConfigError("delta must be non-negative")
        if ns.bits < 1:
            raise ConfigError("bits must be positive")
        if ns.trials is not None and ns.trials < 0:
            raise ConfigError("trials must be non-negative")
        return cls(
            command=ns.command,
            N=ns.n,
            K=ns.k,
            demand=demand,
            delta=ns.delta,
            bits=ns.bits,
            trials=ns.trials,
            seed=ns.seed,
            code_table=ns.code_table or os.environ.get(CODE_TABLE_ENV) or None,
            format=ns.format,
            out=ns.out,
            exhaustive=ns.exhaustive,
        )

    def params(self) -> CachingParams:
        try:
            return CachingParams(self.N, self.K)
        except ValueError as e:
            raise ConfigError(str(e))

    def checked_demand(self, params: CachingParams) -> tuple[int, ...]:
        if self.demand is None:
            raise ConfigError(f"{self.command} needs --demand")
        try:
            return params.check_demand(self.demand)
        except ValueError as e:
            raise ConfigError(str(e))

    def table(self) -> CodeTable | None:
        if not self.code_table:
            return None
        try:
            return load_code_table(self.code_table)
        except (OSError, ValueError, KeyError) as e:
            raise ConfigError(f"cannot load code table {self.code_table}: {e}")


# -- commands -------------------------------------------------------------------


def cmd_rates(cfg: RunConfig) -> tuple[str, int]:
    report = rate_report(cfg.params(), cfg.delta, cfg.table())
    if cfg.format == "json":
        return report.to_json() + "\n", EXIT_OK
    if cfg.format == "csv":
        return report.to_csv(), EXIT_OK
    return report.to_text(), EXIT_OK


def cmd_schedule(cfg: RunConfig) -> tuple[str, int]:
    params = cfg.params()
    d = cfg.checked_demand(params)
    placement = cfl_place(params)
    sched = build_ec_schedule(cfl_deliver(params, placement, d), cfg.delta, cfg.table())
    if cfg.format == "json":
        doc = {"params": {"N": params.N, "K": params.K}, "demand": list(d), **sched.to_json()}
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "label", "support"])
        for i, item in enumerate(sched.to_json()["transmissions"], start=1):
            w.writerow([i, item["label"], " ".join(map(str, item["support"]))])
        return buf.getvalue(), EXIT_OK
    code = sched.outer
    head = (f"# N={params.N} K={params.K} d={','.join(map(str, d))} delta={cfg.delta} "
            f"code=[{code.n},{code.k},{code.d}] {code.origin}\n")
    return head + "\n".join(sched.text_lines()) + "\n", EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    params = cfg.params()
    count = params.N ** params.K
    if count > VERIFY_MAX_DEMANDS:
        raise ConfigError(
            f"verify sweeps all N^K = {count} demands; limit is {VERIFY_MAX_DEMANDS}"
        )
    trials = DEFAULT_SAMPLES if cfg.trials is None else cfg.trials
    placement = cfl_place(params)
    results = []
    failed = 0
    for d in itertools.product(range(1, params.N + 1), repeat=params.K):
        r = certify_demand(params, placement, d, trials=trials, seed=cfg.seed)
        sched = cfl_deliver(params, placement, d)
        bad = first_undecodable(sched, build_gic_instance(placement, d))
        r["schedule_length"] = len(sched)
        r["decodable"] = bad is None
        if bad is not None:
            r["undecodable"] = list(bad)
        checks = [
            r["dim_S"] == r["kappa"],
            r["constraints_independent"],
            r["subspace_in_A"],
            r["schedule_length"] == r["kappa"],
            r["decodable"],
            r.get("kappa_bruteforce", r["kappa"]) == r["kappa"],
            r.get("alpha_below_kappa_plus_1", True),
        ]
        r["ok"] = all(checks)
        failed += not r["ok"]
        results.append(r)
    status = EXIT_OK if failed == 0 else EXIT_FAIL
    doc = {"params": {"N": params.N, "K": params.K}, "demands": len(results),
           "failed": failed, "trials": trials, "seed": cfg.seed, "results": results}
    if cfg.format == "json":
        return json.dumps(doc, indent=2) + "\n", status
    cols = ["demand", "ne", "kappa", "dim_S", "subspace_check", "subspace_in_A",
            "kappa_bruteforce", "alpha_below_kappa_plus_1", "schedule_length", "decodable", "ok"]
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in results:
            w.writerow([" ".join(map(str, r["demand"])) if c == "demand" else r.get(c, "")
                        for c in cols])
        return buf.getvalue(), status
    lines = [f"verify N={params.N} K={params.K}: {len(results) - failed}/{len(results)} demands pass"]
    for r in results:
        extra = []
        if "kappa_bruteforce" in r:
            extra.append(f"bruteforce kappa={r['kappa_bruteforce']}")
        if "alpha_below_kappa_plus_1" in r:
            extra.append(f"alpha<{r['kappa'] + 1}: {r['alpha_below_kappa_plus_1']}")
        lines.append(
            f"  d={','.join(map(str, r['demand']))} Ne={r['ne']} kappa={r['kappa']} "
            f"dim(S)={r['dim_S']} in-A[{r['subspace_check']}]={r['subspace_in_A']} "
            f"decodable={r['decodable']} " + " ".join(extra) + ("" if r["ok"] else "  FAIL")
        )
    return "\n".join(lines) + "\n", status


def cmd_simulate(cfg: RunConfig) -> tuple[str, int]:
    params = cfg.params()
    d = cfg.checked_demand(params)
    trials = 1000 if cfg.trials is None else cfg.trials
    if cfg.exhaustive and cfg.trials is None:
        trials = 0
    report = end_to_end_sim(params, d, cfg.delta, b=cfg.bits, trials=trials, seed=cfg.seed,
                            exhaustive=True if cfg.exhaustive else None, table=cfg.table())
    status = EXIT_OK if report.all_success else EXIT_FAIL
    if cfg.format == "json":
        return report.to_json() + "\n", status
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["user", "random_success", "random_trials", "exhaustive_success",
                    "exhaustive_patterns"])
        for u in range(params.K):
            w.writerow([u + 1, report.per_user_success[u], report.trials,
                        report.per_user_exhaustive_success[u], report.exhaustive_patterns])
        return buf.getvalue(), status
    c = report.code
    lines = [f"simulate N={params.N} K={params.K} d={','.join(map(str, d))} delta={cfg.delta} "
             f"code=[{c['n']},{c['k']},{c['d']}] {c['origin']} bits={cfg.bits} seed={cfg.seed}"]
    for u in range(params.K):
        parts = []
        if report.exhaustive:
            parts.append(f"exhaustive {report.per_user_exhaustive_success[u]}/"
                         f"{report.exhaustive_patterns}")
        if report.trials:
            parts.append(f"random {report.per_user_success[u]}/{report.trials}")
        lines.append(f"  user {u + 1}: " + ", ".join(parts))
    return "\n".join(lines) + "\n", status


COMMANDS = {
    "rates": cmd_rates,
    "schedule": cmd_schedule,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cflcache",
        description="Error-correcting delivery for coded caching with coded prefetching.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__name__.replace("cmd_", ""))
        p.add_argument("--n", type=int, required=True, help="number of files N")
        p.add_argument("--k", type=int, required=True, help="number of users K")
        p.add_argument("--demand", help="comma-separated 1-based file indices, one per user")
        p.add_argument("--delta", type=int, default=0, help="transmission errors to correct")
        p.add_argument("--bits", type=int, default=8, help="bits per subfile in simulations")
        p.add_argument("--trials", type=int, default=None,
                       help="random trials (simulate) or samples per large subspace (verify)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--code-table", default=None,
                       help=f"CSV of best-known codes (default: ${CODE_TABLE_ENV})")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument("--exhaustive", action="store_true",
                       help="sweep every error pattern of weight <= delta")
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(ns)
        text, status = COMMANDS[cfg.command](cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
