"""Command-line front end: simulate, floquet, stability, sweep, net export, repro.

Exit codes: 0 success, 1 usage/IO error, 2 no periodic orbit (stable
contract for scripting).  Every JSON output embeds full provenance
(version, seed, step, transient); reruns with identical configuration are
byte-identical except for the timestamp field.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, netgraph, odeint, tables
from .errors import ClosureFailure, GaitliftError, IrregularPeriod, NoOscillation
from .floquet import (
    MultiplierSet,
    eig,
    monodromy,
    stability_verdict,
    transverse_monodromy_1node,
    transverse_monodromy_2node,
)
from .orbit import (
    IntegratorConfig,
    OrbitConfig,
    classify_gait,
    detect_period,
    find_periodic_orbit,
    phase_shifts,
    random_state,
    sample_orbit,
    settle,
)
from .ratemodel import RateParams, RateSystem, load_params
from .stability import eta_bounds, refined_liap1_bound, stability_report

_NO_ORBIT = (NoOscillation, IrregularPeriod, ClosureFailure)


def _load_network(source: str) -> netgraph.Network:
    try:
        net, _ = netgraph.builtin(source)
        return net
    except netgraph.UnknownNetwork:
        pass
    if os.path.exists(source):
        return netgraph.load(source)
    raise GaitliftError(f"--net {source!r} is neither a builtin nor a file")


def _provenance(args) -> dict:
    return {
        "tool": "gaitlift",
        "version": __version__,
        "seed": args.seed,
        "step": args.step,
        "transient": args.transient,
        "samples": args.samples,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _orbit_config(args, closure_tol: float) -> OrbitConfig:
    return OrbitConfig(
        seed=args.seed,
        transient=args.transient,
        step=args.step,
        samples=args.samples,
        window=args.window,
        probe=args.probe,
        closure_tol=closure_tol,
    )


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--net", required=True, help="builtin name or network JSON file")
    p.add_argument("--params", required=True, help="parameter JSON file")
    p.add_argument("--seed", type=int, default=0, help="initial-condition seed")
    p.add_argument("--transient", type=float, default=300.0, help="transient to discard")
    p.add_argument("--step", type=float, default=None, help="integration step")
    p.add_argument("--samples", type=int, default=512, help="orbit samples per period")
    p.add_argument("--window", type=float, default=150.0, help="period-detection window")
    p.add_argument("--probe", type=int, default=1, help="period-detection probe node")
    p.add_argument("--out", default=None, help="output JSON path (default stdout)")


def _parse_module(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise GaitliftError("--module expects two node ids, e.g. 1,3")
    return int(parts[0]), int(parts[1])


def cmd_simulate(args) -> int:
    net = _load_network(args.net)
    params = load_params(args.params)
    system = RateSystem(net, params)
    cfg = _orbit_config(args, closure_tol=1e-3)
    step = cfg.resolved_step(params.epsilon)

    s0 = random_state(system.n, args.seed)
    s1 = settle(s0, system, args.transient, cfg.resolved_transient_step(params.epsilon))
    traj = odeint.integrate(s1, system, IntegratorConfig(step), 0.0, args.window)
    if args.out_csv:
        odeint.write_trajectory_csv(traj, args.out_csv, system.n)

    T = detect_period(traj, args.probe)  # NoOscillation propagates as exit 2
    orb = sample_orbit(traj.samples[-1], system, T, args.samples, step, cfg.closure_tol)
    pattern = phase_shifts(orb)
    doc = {
        "provenance": _provenance(args),
        "period": orb.period,
        "clusters": [list(c) for c in pattern.clusters],
        "shifts": {str(i): pattern.shifts[i] for i in sorted(pattern.shifts)},
        "gait": classify_gait(pattern) if system.n == 4 else None,
    }
    _emit(doc, args.out)
    return 0


def _h_report(params: RateParams, h_flag: float | None) -> dict | None:
    if h_flag is not None:
        return {"value": h_flag, "source": "explicit"}
    if params.h is not None:
        return {"value": params.h, "source": "params"}
    if params.beta is not None:
        return {"value": params.lateral_strength(), "source": "default-beta"}
    return None


def cmd_floquet(args) -> int:
    net = _load_network(args.net)
    params = load_params(args.params)
    system = RateSystem(net, params)
    orb = find_periodic_orbit(system, _orbit_config(args, closure_tol=1e-6))

    tagged = [(v, "cpg") for v in eig(monodromy(orb).matrix)]
    doc = {"provenance": _provenance(args), "period": orb.period}
    if args.module_kind == "1node":
        tm = transverse_monodromy_1node(orb, counterpart=args.counterpart)
        tagged += [(v, "transverse:1") for v in eig(tm.matrix)]
    elif args.module_kind == "2node":
        module = _parse_module(args.module)
        tm = transverse_monodromy_2node(orb, module=module, h=args.h)
        tagged += [(v, "transverse:1") for v in eig(tm.matrix)]
        doc["h"] = _h_report(params, args.h)
    ms = MultiplierSet.build(tagged)
    doc["multipliers"] = ms.to_json()
    doc["verdict"] = stability_verdict(ms)
    _emit(doc, args.out)
    return 0


def cmd_stability(args) -> int:
    net = _load_network(args.net)
    params = load_params(args.params)
    system = RateSystem(net, params)
    orb = find_periodic_orbit(system, _orbit_config(args, closure_tol=1e-6))
    module = _parse_module(args.module)
    bounds, reports = stability_report(
        orb, counterpart=args.counterpart, module=module, h=args.h
    )
    doc = {
        "provenance": _provenance(args),
        "period": orb.period,
        "eta_bounds": {"d0": bounds.d0, "d": bounds.d, "samples": bounds.n_samples},
        "conditions": [r.to_json() for r in reports],
        "refined_liap1_bound": refined_liap1_bound(orb),
        "h": _h_report(params, args.h),
    }
    _emit(doc, args.out)
    return 0


# --- sweep ---------------------------------------------------------------------


def _parse_range(text: str) -> list[float]:
    """'lo:hi:n' inclusive linspace, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise GaitliftError(f"range {text!r} must be 'lo:hi:n' or a single value")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise GaitliftError("range count must be >= 1")
    return [float(v) for v in np.linspace(lo, hi, n)]


def _sweep_worker(task) -> tuple[int, float, float, float, str, float | None]:
    (index, net_doc, base, point, seed_entropy, transient, step, samples, window) = task
    net = netgraph.from_json_dict(net_doc)
    a, b, c = point
    params_doc = dict(base)
    params_doc.update({"alpha": a, "beta": b, "gamma": c})
    from .ratemodel import params_from_dict

    params = params_from_dict(params_doc)
    system = RateSystem(net, params)
    seed = int(np.random.SeedSequence(entropy=seed_entropy, spawn_key=(index,)).generate_state(1)[0])
    cfg = OrbitConfig(
        seed=seed, transient=transient, step=step,
        samples=samples, window=window, closure_tol=1e-3,
    )
    try:
        orb = find_periodic_orbit(system, cfg)
    except NoOscillation:
        return (index, a, b, c, "equilibrium", None)
    except (IrregularPeriod, ClosureFailure):
        return (index, a, b, c, "irregular", None)
    label = classify_gait(phase_shifts(orb))
    return (index, a, b, c, label, orb.period)


def cmd_sweep(args) -> int:
    net = _load_network(args.net)
    with open(args.params, "r", encoding="utf-8") as fh:
        base = json.load(fh)
    alphas = _parse_range(args.alpha)
    betas = _parse_range(args.beta)
    gammas = _parse_range(args.gamma)
    points = [(a, b, c) for a in alphas for b in betas for c in gammas]
    net_doc = netgraph.to_json_dict(net)
    tasks = [
        (i, net_doc, base, pt, args.seed, args.transient, args.step, args.samples, args.window)
        for i, pt in enumerate(points)
    ]
    workers = int(os.environ.get("GAITLIFT_THREADS", os.cpu_count() or 1))
    workers = max(1, min(workers, len(tasks)))
    if workers == 1:
        results = [_sweep_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    results.sort(key=lambda r: r[0])
    lines = ["alpha,beta,gamma,gait,period"]
    for _, a, b, c, label, period in results:
        ptxt = "" if period is None else repr(period)
        lines.append(f"{a!r},{b!r},{c!r},{label},{ptxt}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# --- net export / repro ----------------------------------------------------------


def cmd_net_export(args) -> int:
    net, _ = netgraph.builtin(args.name)
    text = netgraph.dumps(net) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _deck_orbit(system, deck):
    cfg = OrbitConfig(
        seed=deck["seed"], transient=deck["transient"], window=deck["window"]
    )
    return find_periodic_orbit(system, cfg)


def _repro_chain7() -> list[dict]:
    from .ratemodel import params_from_dict

    net, col = netgraph.builtin("chain7")
    cpg, _ = netgraph.quotient(net, col)
    rows = []
    for deck in tables.CHAIN7_DECKS:
        system = RateSystem(cpg, params_from_dict(deck["params"]))
        orb = _deck_orbit(system, deck)
        cpg_vals = eig(monodromy(orb).matrix)
        tv = eig(transverse_monodromy_1node(orb, counterpart=1).matrix)
        rows.append(
            {
                "name": deck["name"],
                "params": deck["params"],
                "computed": {
                    "period": orb.period,
                    "cpg_moduli": sorted(np.abs(cpg_vals).tolist(), reverse=True),
                    "transverse_moduli": sorted(np.abs(tv).tolist(), reverse=True),
                },
                "reference": deck["reference"],
            }
        )
    return rows


def _repro_biped(kind: str) -> list[dict]:
    from .ratemodel import params_from_dict

    net, _ = netgraph.builtin("biped4")
    rows = []
    for deck in tables.BIPED_GAIT_DECKS:
        params = params_from_dict(deck["params"])
        system = RateSystem(net, params)
        orb = _deck_orbit(system, deck)
        computed = {"period": orb.period}
        if kind == "1node":
            tv = eig(transverse_monodromy_1node(orb, counterpart=1).matrix)
            computed["cpg_moduli"] = sorted(
                np.abs(eig(monodromy(orb).matrix)).tolist(), reverse=True
            )
            computed["transverse_moduli"] = sorted(np.abs(tv).tolist(), reverse=True)
        else:
            tv = eig(transverse_monodromy_2node(orb, module=(1, 3), h=None).matrix)
            computed["transverse_moduli"] = sorted(np.abs(tv).tolist(), reverse=True)
            computed["transverse_complex"] = bool(np.any(np.abs(tv.imag) > 1e-9))
            computed["h"] = params.lateral_strength()
        rows.append(
            {
                "name": deck["name"],
                "params": deck["params"],
                "computed": computed,
                "reference": deck["reference"],
            }
        )
    return rows


def _repro_gaits() -> list[dict]:
    from .ratemodel import params_from_dict

    net, _ = netgraph.builtin("biped4")
    rows = []
    for deck in tables.GAIT_CLASS_DECKS:
        system = RateSystem(net, params_from_dict(deck["params"]))
        orb = _deck_orbit(system, deck)
        pattern = phase_shifts(orb)
        rows.append(
            {
                "name": deck["name"],
                "params": deck["params"],
                "computed": {
                    "period": orb.period,
                    "gait": classify_gait(pattern),
                    "shifts": {str(i): pattern.shifts[i] for i in sorted(pattern.shifts)},
                },
                "reference": deck["reference"],
            }
        )
    return rows


def _repro_bounds() -> list[dict]:
    from .ratemodel import params_from_dict

    net, _ = netgraph.builtin("biped4")
    rows = []
    for deck in tables.GAIT_CLASS_DECKS:
        system = RateSystem(net, params_from_dict(deck["params"]))
        orb = _deck_orbit(system, deck)
        bounds = eta_bounds(orb, counterpart=1)
        rows.append(
            {
                "name": deck["name"],
                "params": deck["params"],
                "computed": {
                    "eta_bounds": {"d0": bounds.d0, "d": bounds.d},
                    "refined": refined_liap1_bound(orb),
                },
                "reference": deck["reference"],
            }
        )
    return rows


def cmd_repro(args) -> int:
    table = args.table
    if table == "chain7":
        rows = _repro_chain7()
    elif table == "biped-1node":
        rows = _repro_biped("1node")
    elif table == "biped-2node":
        rows = _repro_biped("2node")
    elif table == "gaits":
        rows = _repro_gaits()
    elif table == "bounds":
        rows = _repro_bounds()
    else:
        raise GaitliftError(f"unknown table id {table!r}; known: {', '.join(tables.TABLE_IDS)}")
    doc = {
        "provenance": {
            "tool": "gaitlift",
            "version": __version__,
            "table": table,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        },
        "rows": rows,
    }
    _emit(doc, args.out)
    return 0


# --- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gaitlift", description=__doc__)
    ap.add_argument("--version", action="version", version=f"gaitlift {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate and classify the phase pattern")
    _add_run_options(p)
    p.add_argument("--out-csv", default=None, help="trajectory CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("floquet", help="multiplier report for CPG and transverse blocks")
    _add_run_options(p)
    p.add_argument("--module-kind", choices=("none", "1node", "2node"), default="none")
    p.add_argument("--h", type=float, default=None, help="lateral coupling override")
    p.add_argument("--counterpart", type=int, default=1, help="CPG node the chain node copies")
    p.add_argument("--module", default="1,3", help="CPG node pair for the 2-node module")
    p.set_defaults(func=cmd_floquet)

    p = sub.add_parser("stability", help="analytic condition report with margins")
    _add_run_options(p)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--counterpart", type=int, default=1)
    p.add_argument("--module", default="1,3")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("sweep", help="gait classification over an (alpha,beta,gamma) grid")
    p.add_argument("--net", required=True)
    p.add_argument("--params", required=True, help="base parameter JSON (alpha/beta/gamma overridden)")
    p.add_argument("--alpha", required=True, help="'lo:hi:n' or single value")
    p.add_argument("--beta", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transient", type=float, default=300.0)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--window", type=float, default=150.0)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("net", help="network catalogue utilities")
    net_sub = p.add_subparsers(dest="net_command", required=True)
    pe = net_sub.add_parser("export", help="emit a builtin network as JSON")
    pe.add_argument("name")
    pe.add_argument("--out", default=None)
    pe.set_defaults(func=cmd_net_export)

    p = sub.add_parser("repro", help="run a bundled table-reproduction deck")
    p.add_argument("table", choices=tables.TABLE_IDS)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_repro)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _NO_ORBIT as exc:
        print(f"gaitlift: no periodic orbit: {exc}", file=sys.stderr)
        return 2
    except (GaitliftError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"gaitlift: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
