"""Command-line entry point: ``accessnet <subcommand> [options]``.

Exit status: 0 on success, 1 on a domain error (the error is printed as a
JSON object), 2 on usage or input-parsing errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .activity import (
    ClassifierConfig,
    classify_users,
    estimate_ao_switches,
    parse_activity_log,
    parse_ping_log,
    ping_report,
)
from .errors import AccessNetError
from .generate import DEFAULTS as GEN_DEFAULTS
from .generate import random_instance
from .heuristic import design_plans, solution_from_plans, wire_overhead
from .model import instance_to_dict, load_instance, money_str, to_minor, validate_instance
from .optimizer import KERNEL, brute_force, check_solution, solve_exact
from .savings import (
    SavingsInput,
    load_catalog,
    modeled_monthly_saving,
    payback,
    savings_report,
    select_switch,
)

CONFIG_ENV = "ACCESSNET_CONFIG"


class UsageError(Exception):
    pass


class OracleMismatch(AccessNetError):
    pass


def load_config(path):
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError("config file must contain a JSON object")
    return doc


def _pick(cli_value, cfg, key, default):
    if cli_value is not None:
        return cli_value
    return cfg.get(key, default)


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args, cfg):
    inst, _ = load_instance(args.topology)
    return validate_instance(inst).to_dict()


def cmd_optimize(args, cfg):
    inst, _ = load_instance(args.topology)
    sol = solve_exact(inst, max_nodes=args.max_nodes, time_budget=args.time_budget)
    out = sol.to_dict()
    out["kernel"] = KERNEL
    out["check"] = check_solution(inst, sol).to_dict()
    if args.oracle_check:
        ref = brute_force(inst)
        out["oracle"] = {"cost": money_str(ref.total_cost), "cost_minor": ref.total_cost,
                         "match": ref.total_cost == sol.total_cost}
        if ref.total_cost != sol.total_cost:
            raise OracleMismatch(f"solver cost {sol.total_cost} != oracle cost {ref.total_cost}")
    return out


def cmd_heuristic(args, cfg):
    inst, rates = load_instance(args.topology)
    plans = design_plans(inst)
    sol = solution_from_plans(inst, plans)
    out = sol.to_dict()
    out["buildings"] = [p.to_dict() for p in plans]
    out["check"] = check_solution(inst, sol).to_dict()
    out["wire_overhead"] = wire_overhead(inst, sol, rates, args.medium).to_dict()
    return out


def _classifier_config(args, cfg):
    doc = {k: cfg[k] for k in ("night_window", "night_start", "night_end", "min_knight_days",
                               "office_working_day_fraction", "working_days") if k in cfg}
    if args.night_start is not None:
        doc["night_start"] = args.night_start
        doc.pop("night_window", None)
    if args.night_end is not None:
        doc["night_end"] = args.night_end
        doc.pop("night_window", None)
    if args.min_knight_days is not None:
        doc["min_knight_days"] = args.min_knight_days
    if args.office_fraction is not None:
        doc["office_working_day_fraction"] = args.office_fraction
    return ClassifierConfig.from_dict(doc)


def cmd_classify(args, cfg):
    ccfg = _classifier_config(args, cfg)
    with open(args.activity, newline="", encoding="utf-8") as fh:
        log = parse_activity_log(fh)
    topo = None
    if args.topology:
        inst, _ = load_instance(args.topology)
        topo = {a.id: a.building for a in inst.access_switches}
    elif args.buildings:
        with open(args.buildings, encoding="utf-8") as fh:
            topo = {str(k): str(v) for k, v in json.load(fh).items()}
    result = classify_users(log, ccfg, topo)
    out = {"samples": len(log.samples), "malformed_rows": log.malformed}
    out.update(result.to_dict())
    if topo is not None:
        ups = int(_pick(args.users_per_switch, cfg, "users_per_switch", 12))
        out["ao_switches"] = estimate_ao_switches(result.per_building_counts, ups).to_dict()
    return out


def cmd_pingreport(args, cfg):
    with open(args.ping, newline="", encoding="utf-8") as fh:
        samples = parse_ping_log(fh)
    return ping_report(samples).to_dict()


def _savings_input(args, cfg):
    sav = cfg.get("savings", {})
    night = args.night_hours
    if night is None:
        night = sav.get("night_hours")
    if night is None and ("night_window" in cfg or "night_start" in cfg):
        night = ClassifierConfig.from_dict(cfg).night_hours
    return SavingsInput(args.n_ao, args.n_total, 12 if night is None else night,
                        _pick(args.working_days, sav, "working_days", 22),
                        _pick(args.weekend_days, sav, "weekend_days", 8))


def cmd_savings(args, cfg):
    inp = _savings_input(args, cfg)
    pb, modeled = None, False
    if args.n_uo is not None:
        if args.monthly_saving is not None:
            saving = to_minor(args.monthly_saving)
        elif args.tariff is not None and args.avg_switch_watts is not None:
            saving = modeled_monthly_saving(inp.n_ao, args.avg_switch_watts,
                                            inp.switch_off_hours, to_minor(args.tariff))
            modeled = True
        else:
            raise UsageError("--n-uo needs --monthly-saving or --tariff with --avg-switch-watts")
        pb = payback(args.n_uo, args.wire_per_user, to_minor(args.wire_rate), saving)
    return savings_report(inp, pb, modeled).to_dict()


def cmd_payback(args, cfg):
    return payback(args.n_uo, args.wire_per_user, to_minor(args.wire_rate),
                   to_minor(args.monthly_saving)).to_dict()


def cmd_catalog(args, cfg):
    catalog = load_catalog(args.catalog)
    if args.min_op_temp is None:
        return {"entries": [e.to_dict() for e in catalog]}
    pick = select_switch(catalog, args.min_op_temp, args.ports)
    qualifying = [e for e in catalog if e.op_temp_max >= args.min_op_temp]
    return {"selected": pick.to_dict(args.ports),
            "qualifying": [e.model for e in sorted(qualifying, key=lambda e: e.price(args.ports))]}


def cmd_gen(args, cfg):
    rng = random.Random(args.seed)
    opts = {"max_users": args.users, "max_access": args.access, "max_dist": args.dist,
            "buildings": args.buildings}
    return instance_to_dict(random_instance(rng, **opts))


# -- rendering -------------------------------------------------------------------

def _scalar(v):
    if isinstance(v, float):
        return f"{v:g}"
    if v is None:
        return "-"
    return str(v)


def render_table(obj, indent="") -> str:
    lines = []
    if not isinstance(obj, dict):
        obj = {"result": obj}
    simple = {k: v for k, v in obj.items() if not isinstance(v, (dict, list))}
    width = max((len(k) for k in simple), default=0)
    for k, v in simple.items():
        lines.append(f"{indent}{k.ljust(width)}  {_scalar(v)}")
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(render_table(v, indent + "  ") if v else f"{indent}  (none)")
        elif isinstance(v, list):
            lines.append(f"{indent}{k}:")
            if not v:
                lines.append(f"{indent}  (none)")
            elif all(isinstance(r, dict) for r in v):
                cols = list(dict.fromkeys(c for r in v for c in r
                                          if not isinstance(r[c], (dict, list))))
                rows = [[_scalar(r.get(c)) for c in cols] for r in v]
                widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
                lines.append(indent + "  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
                for r in rows:
                    lines.append(indent + "  " + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
            else:
                lines.extend(f"{indent}  " + " ".join(_scalar(x) for x in
                                                        (r if isinstance(r, list) else [r]))
                             for r in v)
    return "\n".join(line.rstrip() for line in lines)


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config file (fallback: ${CONFIG_ENV})")
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="accessnet",
                                description="Energy-aware access network design toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    s = sub.add_parser("validate", parents=[common], help="check a topology file")
    s.add_argument("--topology", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("optimize", parents=[common],
                       help="exact minimum-cost design by branch and bound")
    s.add_argument("--topology", required=True)
    s.add_argument("--max-nodes", type=int, default=None)
    s.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    s.add_argument("--oracle-check", action="store_true",
                   help="cross-check the optimum with exhaustive enumeration")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("heuristic", parents=[common], help="per-building closest-switch design")
    s.add_argument("--topology", required=True)
    s.add_argument("--medium", default="copper", help="cable medium priced for wire overhead")
    s.set_defaults(func=cmd_heuristic)

    s = sub.add_parser("classify", parents=[common],
                       help="classify interfaces into Knight and Office users")
    s.add_argument("--activity", required=True, help="activity CSV")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--topology", help="topology JSON giving each access switch's building")
    g.add_argument("--buildings", help="JSON object mapping switch id to building")
    s.add_argument("--night-start", default=None, help="HH:MM")
    s.add_argument("--night-end", default=None, help="HH:MM")
    s.add_argument("--min-knight-days", type=int, default=None)
    s.add_argument("--office-fraction", type=float, default=None)
    s.add_argument("--users-per-switch", type=int, default=None)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("pingreport", parents=[common], help="hourly unreachable-switch counts")
    s.add_argument("--ping", required=True, help="ping CSV")
    s.set_defaults(func=cmd_pingreport)

    s = sub.add_parser("savings", parents=[common], help="monthly switch-off savings percent")
    s.add_argument("--n-ao", type=int, required=True, help="switch-off candidates")
    s.add_argument("--n-total", type=int, required=True, help="all access switches")
    s.add_argument("--night-hours", type=float, default=None)
    s.add_argument("--working-days", type=int, default=None)
    s.add_argument("--weekend-days", type=int, default=None)
    s.add_argument("--n-uo", type=int, default=None, help="office users (enables payback)")
    s.add_argument("--wire-per-user", type=float, default=30.0, metavar="METERS")
    s.add_argument("--wire-rate", default="15", help="cable price per meter")
    s.add_argument("--monthly-saving", default=None, help="measured monthly bill saving")
    s.add_argument("--tariff", default=None, help="price per kWh, to model the saving")
    s.add_argument("--avg-switch-watts", type=float, default=None)
    s.set_defaults(func=cmd_savings)

    s = sub.add_parser("payback", parents=[common], help="wiring payback period")
    s.add_argument("--n-uo", type=int, required=True)
    s.add_argument("--wire-per-user", type=float, required=True, metavar="METERS")
    s.add_argument("--wire-rate", required=True, help="cable price per meter")
    s.add_argument("--monthly-saving", required=True)
    s.set_defaults(func=cmd_payback)

    s = sub.add_parser("catalog", parents=[common],
                       help="list the switch catalog or pick a temperature-rated switch")
    s.add_argument("--catalog", default=None, help="catalog CSV (default: bundled table)")
    s.add_argument("--min-op-temp", type=float, default=None, metavar="CELSIUS")
    s.add_argument("--ports", type=int, choices=[24, 48], default=24)
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser(
        "gen", parents=[common], help="random small topology",
        description="Random topology: uniform integer costs (access and distribution 0-100, "
                    "core 0-50, uplinks 0-20), user links 1-50 m priced at 1 per meter, "
                    "access degree 1-4 raised to cover demand, distribution degree 1-4.")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--users", type=int, default=GEN_DEFAULTS["max_users"], help="max users")
    s.add_argument("--access", type=int, default=GEN_DEFAULTS["max_access"],
                   help="max access switches")
    s.add_argument("--dist", type=int, default=GEN_DEFAULTS["max_dist"],
                   help="max distribution switches")
    s.add_argument("--buildings", type=int, default=1)
    s.set_defaults(func=cmd_gen)
    return p


def _emit(obj, args, stream):
    text = render_table(obj) if args.format == "table" else json.dumps(obj, indent=2)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        stream.write(text + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = load_config(args.config)
        result = args.func(args, cfg)
    except AccessNetError as e:
        stdout.write(json.dumps({"error": e.to_dict()}, indent=2) + "\n")
        return 1
    except (UsageError, OSError, ValueError, KeyError, TypeError) as e:
        msg = str(e) if not isinstance(e, KeyError) else f"missing field {e}"
        stderr.write(json.dumps({"error": {"type": "UsageError", "message": msg}}) + "\n")
        return 2
    _emit(result, args, stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
