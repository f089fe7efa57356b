"""Command-line entry point: ``hurwitz-lab <command> <action> [options]``.

Exit codes: 0 success, 2 usage error, 3 resource budget exceeded, 4 a
``--check`` assertion failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

from . import __version__
from .errors import BUDGET_ENV, BudgetExceeded
from .groups import AbelianGroupType, GroupError, is_admissible, is_nonsplitting, parse_group_spec

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_CHECK = 0, 2, 3, 4

log = logging.getLogger("hurwitz_lab")

COMMANDS: dict[str, tuple[str, ...]] = {
    "hurwitz": ("orbits", "stabilize", "scan-u", "scan-v"),
    "rack": ("homology", "coproduct-check"),
    "koszul": ("ahom", "regularity", "cofiber"),
    "ff": ("squarefree-count", "cl-stats", "curve-dump"),
    "group": ("info", "check"),
}


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    action: str
    group: str = "gdih:3"
    rack: str | None = None
    module: str = "R"
    n: int | None = None
    n_max: int = 8
    d_max: int = 3
    D_cap: int = 4
    q: int | None = None
    A: str = "3"
    allow_bad: bool = False
    method: str = "ring"
    format: str | None = None
    out: str | None = None
    threads: int = 1
    seed: int = 0
    check: bool = False
    budget: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if self.action not in COMMANDS.get(self.command, ()):
            raise UsageError(f"unknown subcommand {self.command} {self.action}")
        for name in ("n_max", "d_max", "D_cap", "threads"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.n is not None and self.n < 0:
            raise UsageError("--n must be non-negative")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("--budget must be positive")
        if self.format not in (None, "csv", "json"):
            raise UsageError("--format must be csv or json")

    def resolved(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d.pop("out")
        d.pop("threads")   # reports must not depend on it
        d["budget_env"] = os.environ.get(BUDGET_ENV)
        d.update(self.extra)
        d["version"] = __version__
        return d


def parse_A(spec: str) -> AbelianGroupType:
    """"3", "9", "3,3": invariant factors of an abelian ell-group."""
    try:
        factors = [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed A spec {spec!r}") from None
    if not factors:
        raise UsageError("empty A spec")
    try:
        return AbelianGroupType.from_factors(factors)
    except GroupError as exc:
        raise UsageError(f"malformed A spec {spec!r}: {exc}") from None


def _group(cfg: RunConfig):
    try:
        return parse_group_spec(cfg.group)
    except (GroupError, OSError, KeyError) as exc:
        raise UsageError(f"bad --group: {exc}") from None


def _require(cfg: RunConfig, name: str) -> Any:
    v = getattr(cfg, name)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {cfg.command} {cfg.action}")
    return v


# -- output ----------------------------------------------------------------------

@dataclass
class Report:
    payload: dict                      # JSON form
    rows: list[dict] | None = None     # CSV form, if tabular
    text: str | None = None            # plain form when no format is requested
    failures: list[str] = field(default_factory=list)


def _json_default(x: Any) -> Any:
    if isinstance(x, float) and math.isinf(x):
        return "-inf" if x < 0 else "inf"
    raise TypeError(f"not serializable: {type(x)}")


def _clean(x: Any) -> Any:
    if isinstance(x, float) and math.isinf(x):
        return "-inf" if x < 0 else "inf"
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def render(report: Report, cfg: RunConfig) -> str:
    fmt = cfg.format
    if fmt is None:
        if report.text is not None:
            return report.text.rstrip("\n") + "\n"
        fmt = "csv" if report.rows is not None else "json"
    config = _clean(cfg.resolved())
    if fmt == "json":
        body = {"config": config, **_clean(report.payload)}
        if report.rows is not None and "rows" not in body:
            body["rows"] = _clean(report.rows)
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    rows = report.rows if report.rows is not None else [_flatten(_clean(report.payload))]
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in _clean(r).items()})
    return buf.getvalue()


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


# -- commands ----------------------------------------------------------------------

def cmd_group(cfg: RunConfig) -> Report:
    G, c = _group(cfg)
    table = G.subgroup_table
    info = {
        "group": G.name,
        "order": G.order,
        "class": [G.label(x) for x in c.elements],
        "class_size": len(c),
        "common_order": c.common_order,
        "single_class": c.is_single_class(),
        "generates": c.generates(),
        "admissible": is_admissible(G, c),
        "nonsplitting": is_nonsplitting(G, c),
        "subgroup_count": len(table),
        "abelian": G.is_abelian(),
    }
    failures = []
    if cfg.action == "check":
        G.check_associative(seed=cfg.seed)
        for key in ("single_class", "generates", "admissible", "nonsplitting"):
            if not info[key]:
                failures.append(f"{key} is false")
        info["ok"] = not failures
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    return Report(info, text=text, failures=failures)


def cmd_hurwitz(cfg: RunConfig) -> Report:
    from .hurwitz import PreconditionError, find_stabilizer_U, orbit_table, scan_U_stability, scan_V_stability

    G, c = _group(cfg)
    try:
        if cfg.action == "orbits":
            n = _require(cfg, "n")
            if cfg.method not in ("ring", "bfs"):
                raise UsageError("--method must be ring or bfs")
            method = "bfs" if cfg.check else cfg.method
            t = orbit_table(G, c, n, method=method, budget=cfg.budget)
            rows = t.rows()
            payload = {"n": n, "orbit_count": len(t), "component_count": t.component_count, "rows": rows}
            return Report(payload, rows=rows)
        if cfg.action == "stabilize":
            spec = find_stabilizer_U(G, c, cfg.n_max, cfg.D_cap)
            failures = [] if spec.found else [spec.note or "no stabilizer found"]
            return Report(spec.to_dict(), failures=failures)
        if cfg.action == "scan-u":
            spec = find_stabilizer_U(G, c, cfg.n_max, cfg.D_cap)
            if not spec.found:
                return Report(spec.to_dict(), failures=[spec.note or "no stabilizer found"])
            scan = scan_U_stability(spec, cfg.n_max)
            rows = [{
                "n": r.n, "dim_source": r.dim_source, "dim_target": r.dim_target,
                "injective": r.injective, "surjective": r.surjective, "bijective": r.bijective,
                "sectors_bijective": all(a and b for a, b in r.sectors.values()),
            } for r in scan]
            failures = [f"U not bijective at n={r['n']}" for r in rows
                        if r["n"] >= spec.N_0 and not (r["bijective"] and r["sectors_bijective"])]
            return Report({"stabilizer": spec.to_dict(), "rows": rows}, rows=rows, failures=failures)
        if cfg.action == "scan-v":
            rows = [asdict(r) for r in scan_V_stability(G, c, cfg.n_max)]
            return Report({"V_grading": len(c) * c.common_order, "exploratory": True, "rows": rows}, rows=rows)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(cfg.action)


def cmd_rack(cfg: RunConfig) -> Report:
    from .racks import RackError, coassociativity_defect, parse_rack_spec, rack_homology_dims

    try:
        rack = parse_rack_spec(cfg.rack or cfg.group)
    except (RackError, GroupError) as exc:
        raise UsageError(f"bad --rack: {exc}") from None
    m = rack.size
    if cfg.action == "homology":
        dims = rack_homology_dims(rack, cfg.d_max)
        rows = [{"d": d, "dim_Hd": x, "expected_m_pow_d": m**d} for d, x in enumerate(dims)]
        failures = [f"H_{r['d']} has dimension {r['dim_Hd']}, expected {r['expected_m_pow_d']}"
                    for r in rows if r["dim_Hd"] != r["expected_m_pow_d"]]
        text = ",".join(str(x) for x in dims)
        return Report({"rack": rack.name, "size": m, "rows": rows}, rows=rows, text=text, failures=failures)
    if cfg.action == "coproduct-check":
        import itertools

        n_top = 4 if cfg.n is None else cfg.n
        rows = []
        for n in range(n_top + 1):
            bad = sum(1 for x in itertools.product(range(m), repeat=n) if coassociativity_defect(rack, x))
            rows.append({"n": n, "tuples": m**n, "defective": bad})
        failures = [f"{r['defective']} tuples fail coassociativity at n={r['n']}" for r in rows if r["defective"]]
        return Report({"rack": rack.name, "rows": rows}, rows=rows, failures=failures)
    raise UsageError(cfg.action)


def _module(cfg: RunConfig, G, c, n_max: int):
    from .koszul import module_from_ring, sector_module, trivial_module

    name = cfg.module
    if name == "R":
        return module_from_ring(G, c, n_max)
    if name == "k":
        return trivial_module(G, c, n_max)
    if name.startswith("sector"):
        _, _, arg = name.partition(":")
        sub = int(arg) if arg else None
        return sector_module(G, c, n_max, sub)
    raise UsageError(f"unknown --module {name!r} (R, k, sector[:H])")


def cmd_koszul(cfg: RunConfig) -> Report:
    from .hurwitz import PreconditionError, find_stabilizer_U
    from .koszul import a_homology_table, cofiber_degrees, regularity_check

    G, c = _group(cfg)
    m = _module(cfg, G, c, cfg.n_max)
    m.validate()
    if cfg.action == "ahom":
        table = a_homology_table(m, cfg.d_max, cfg.n_max)
        rows = [{"n": n, "d": d, "dim": table[n][d]} for n in range(cfg.n_max + 1) for d in range(cfg.d_max + 1)]
        failures = []
        if cfg.check and m.name == "k":
            k = len(c)
            failures = [f"H^A_{{{r['n']},{r['d']}}}(k) = {r['dim']}" for r in rows
                        if r["dim"] != (k ** r["n"] if r["n"] == r["d"] else 0)]
        return Report({"module": m.name, "table": table}, rows=rows, failures=failures)
    try:
        spec = find_stabilizer_U(G, c, max(cfg.n_max, 12), cfg.D_cap)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    if not spec.found:
        return Report(spec.to_dict(), failures=[spec.note or "no stabilizer found"])
    if cfg.action == "cofiber":
        deg0, deg1 = cofiber_degrees(m, spec, cfg.n_max)
        payload = {"module": m.name, "N": spec.N, "N_0": spec.N_0, "deg0": deg0, "deg1": deg1}
        return Report(payload)
    if cfg.action == "regularity":
        rep = regularity_check(m, spec, cfg.d_max, cfg.n_max, with_r_homology=bool(cfg.extra.get("r_homology")))
        d = rep.to_dict()
        failures = [f"regularity bound fails at d={i + 1}" for i, ok in enumerate(rep.bounds_ok) if not ok]
        failures += [f"lemma bound fails at d={i}" for i, ok in enumerate(rep.lemma_bound_ok) if not ok]
        if not (d["cofiber"]["deg0_ok"] and d["cofiber"]["deg1_ok"]):
            failures.append("cofiber bound fails")
        failures += [f"R-level bound fails at d={i + 1}" for i, ok in enumerate(rep.r_bounds_ok or []) if not ok]
        return Report(d, failures=failures)
    raise UsageError(cfg.action)


def cmd_ff(cfg: RunConfig) -> Report:
    from .function_fields.cohen_lenstra import cl_statistics, density_sweep, records_csv
    from .function_fields.curves import count_monic_squarefree
    from .function_fields.field import FieldError, gf

    q = _require(cfg, "q")
    try:
        F = gf(q)
    except FieldError as exc:
        raise UsageError(str(exc)) from None
    if q % 2 == 0:
        raise UsageError("q must be odd")
    cfg.extra.update({"epsilon": F.nonsquare, "field_tower": F.describe()["tower"]})
    n = _require(cfg, "n")
    if cfg.action == "squarefree-count":
        count = count_monic_squarefree(q, n, cfg.budget)
        expected = q if n == 1 else (q**n - q ** (n - 1) if n >= 2 else 1)
        failures = [] if count == expected else [f"count {count} != {expected}"]
        return Report({"q": q, "n": n, "count": count, "expected": expected}, text=str(count), failures=failures)
    A = parse_A(cfg.A)
    try:
        if cfg.action == "cl-stats":
            ns = cfg.extra.get("n_list")
            if ns:
                sw = density_sweep(q, ns, A, allow_bad=cfg.allow_bad, threads=cfg.threads)
                return Report(asdict(sw))
            rep = cl_statistics(q, n, A, allow_bad=cfg.allow_bad, threads=cfg.threads, keep_records=False)
            d = rep.to_dict()
            d["abs_average_minus_1_times_sqrt_q"] = rep.abs_average_minus_1 * math.sqrt(q)
            return Report(d)
        if cfg.action == "curve-dump":
            rep = cl_statistics(q, n, A, allow_bad=cfg.allow_bad, threads=cfg.threads)
            rows = list(csv.DictReader(io.StringIO(records_csv(rep.records))))
            return Report({"aggregate": rep.to_dict(), "rows": rows}, rows=rows)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(cfg.action)


HANDLERS: dict[str, Callable[[RunConfig], Report]] = {
    "group": cmd_group, "hurwitz": cmd_hurwitz, "rack": cmd_rack, "koszul": cmd_koszul, "ff": cmd_ff,
}


# -- argument parsing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):   # usage errors exit with 2 and no traceback
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", default="gdih:3", help="gdih:3, gdih:3,3, sym:3 or a JSON table path")
    p.add_argument("--rack", help="trivial:m or a group spec (conjugation rack of its class)")
    p.add_argument("--module", default="R", help="R, k or sector[:H]")
    p.add_argument("--n", type=str, help="length / degree (ff cl-stats accepts a comma list)")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--dmax", type=int, default=3, dest="d_max")
    p.add_argument("--D-cap", type=int, default=4, dest="D_cap")
    p.add_argument("--q", type=int)
    p.add_argument("--A", default="3", help="invariant factors of an abelian ell-group: 3, 9, 3,3")
    p.add_argument("--allow-bad", action="store_true", help="explore q that is not good for ell")
    p.add_argument("--method", default="ring", help="orbit method: ring or bfs")
    p.add_argument("--r-homology", action="store_true", help="koszul regularity: also compute R-homology")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help=f"size budget (overrides {BUDGET_ENV})")
    p.add_argument("--check", action="store_true", help="turn report rows into assertions (exit 4 on failure)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hurwitz-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for cmd, actions in COMMANDS.items():
        cp = sub.add_parser(cmd)
        asub = cp.add_subparsers(dest="action", parser_class=_Parser)
        for a in actions:
            _common(asub.add_parser(a))
    return p


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    if not ns.command or not getattr(ns, "action", None):
        raise UsageError("expected: <command> <action> [options]")
    extra: dict[str, Any] = {}
    n: int | None = None
    if ns.n is not None:
        try:
            parts = [int(x) for x in ns.n.split(",")]
        except ValueError:
            raise UsageError(f"bad --n {ns.n!r}") from None
        n = parts[0]
        if len(parts) > 1:
            if (ns.command, ns.action) != ("ff", "cl-stats"):
                raise UsageError("a list of --n values is only accepted by ff cl-stats")
            extra["n_list"] = parts
    if ns.r_homology:
        extra["r_homology"] = True
    cfg = RunConfig(
        ns.command, ns.action, ns.group, ns.rack, ns.module, n, ns.n_max, ns.d_max, ns.D_cap,
        ns.q, ns.A, ns.allow_bad, ns.method, ns.format, ns.out, ns.threads, ns.seed, ns.check,
        ns.budget, extra,
    )
    cfg.validate()
    if ns.verbose:
        logging.basicConfig(level=logging.INFO)
    return cfg


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    saved_budget = os.environ.get(BUDGET_ENV)
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        if cfg.budget is not None:
            os.environ[BUDGET_ENV] = str(cfg.budget)   # scoped to this run, restored below
        report = HANDLERS[cfg.command](cfg)
        text = render(report, cfg)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        if cfg.check and report.failures:
            for f in report.failures:
                print(f"check failed: {f}", file=sys.stderr)
            return EXIT_CHECK
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GroupError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if saved_budget is None:
            os.environ.pop(BUDGET_ENV, None)
        else:
            os.environ[BUDGET_ENV] = saved_budget


def main() -> None:
    sys.exit(run())
