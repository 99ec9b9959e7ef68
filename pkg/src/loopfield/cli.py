"""Command-line runner: samplers, inversion engines, oracles, verification.

Every subcommand is a pure function of its flags and ``--seed``: reruns with
the same arguments reproduce all CSV/JSONL outputs byte for byte (only the
timestamp inside ``summary.txt`` changes).  Outputs are plain CSV plus one
``summary.txt`` per run, written into ``--out``.

Exit codes: 0 success, 1 verification failure, 2 configuration error (bad
flags, unreadable graph file, unknown labels, invalid parameters), 3 runtime
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime
from pathlib import Path

from .couplings import (
    current_exact,
    fk_exact,
    fk_from_field,
    forward_rk_coupling,
    ising_exact,
    sign_sample_on_clusters,
)
from .gff import condition, sample_gff
from .graph import Graph, GraphError, clusters, load_graph
from .inverse import (
    forward_enlarged,
    init_inverse_from_field,
    invert_current_from_fk,
    invert_loop_soup,
    run_inverse,
    run_inverse_discrete,
    run_inverse_jump_rates,
)
from .jump import JUMP, Trajectory
from .loops import LoopSoupSample, sample_loop_soup
from .stats import make_rng
from .suites import available, run_suite

EXIT_OK = 0
EXIT_TEST_FAILURE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

ENGINES = ("stack", "jump-rate", "discrete")


# ---------------------------------------------------------------------------
# small helpers


def _fmt(x) -> str:
    """Shortest round-trip decimal for a float (deterministic)."""
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> int:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return len(rows)


def _write_jsonl(path: Path, records: list[dict]) -> int:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return len(records)


def _write_summary(out: Path, command: str, settings: dict,
                   outputs: dict) -> None:
    lines = [
        f"command: {command}",
        f"generated: {datetime.now().isoformat(timespec='seconds')}",
    ]
    lines += [f"{k}: {v}" for k, v in settings.items()]
    lines.append("outputs:")
    lines += [f"  {name}: {count} rows" for name, count in outputs.items()]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args) -> tuple[Graph, int | None, float | None]:
    """Graph plus resolved x0/u; command-line flags override file values."""
    g, x0_label, u = load_graph(args.graph)
    if getattr(args, "x0", None) is not None:
        x0_label = args.x0
    if getattr(args, "u", None) is not None:
        u = args.u
    x0 = g.vertex(x0_label) if x0_label is not None else None
    if u is not None and not (u > 0):
        raise GraphError(f"u must be positive, got {u}")
    return g, x0, u


def _need(value, what: str):
    if value is None:
        raise GraphError(
            f"this command needs {what} (flag, or stored in the graph file)"
        )
    return value


def _field_rows(g: Graph, values) -> list[list]:
    return [[g.labels[x], _fmt(values[x])] for x in range(g.n)]


def _field_record(g: Graph, values) -> dict:
    return {g.labels[x]: float(values[x]) for x in range(g.n)}


def _trajectory_rows(g: Graph, traj: Trajectory) -> list[list]:
    rows = []
    for i, s in enumerate(traj.steps):
        eid = "" if s.edge is None else s.edge
        rows.append([i, g.labels[s.vertex], _fmt(s.holding), s.exit, eid])
    return rows


def _loop_rows(g: Graph, soup: LoopSoupSample, first_id: int) -> list[list]:
    rows = []
    for k, lp in enumerate(soup.loops):
        for i, s in enumerate(lp.steps):
            eid = "" if s.edge is None else s.edge
            rows.append([first_id + k, g.labels[lp.start], i,
                         g.labels[s.vertex], _fmt(s.holding), eid])
    return rows


def _soup_field_rows(g: Graph, soup: LoopSoupSample) -> tuple[list, list]:
    from .loops import fields

    occ, cross = fields(g, soup)
    occ_rows = [[g.labels[x], _fmt(occ[x])] for x in range(g.n)]
    cross_rows = [[e.id, int(cross[pos])] for pos, e in enumerate(g.edges)]
    return occ_rows, cross_rows


def _event_rows(g: Graph, events) -> list[list]:
    rows = []
    for ev in events:
        rows.append([
            _fmt(ev.time),
            "" if ev.edge is None else ev.edge,
            ev.kind,
            g.labels[ev.src],
            g.labels[ev.dst],
            int(ev.n_after),
        ])
    return rows


def _run_record(g: Graph, replica: int, run) -> dict:
    cross = run.trajectory.crossings(g)
    return {
        "replica": replica,
        "terminal_vertex": g.labels[run.terminal_vertex],
        "duration": float(run.duration),
        "cluster_count": clusters(g, run.terminal_open).count,
        "crossings": {e.id: int(cross[pos]) for pos, e in enumerate(g.edges)},
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_sample_gff(args) -> int:
    g, x0, u = _load(args)
    if x0 is None:
        cond, pin_desc = condition(), "none"
    else:
        val = math.sqrt(2.0 * u) if u is not None else 0.0
        cond, pin_desc = condition({x0: val}), f"{g.labels[x0]}={val!r}"
    out = _out_dir(args)
    rows = []
    for r in range(args.n):
        phi = sample_gff(g, cond, make_rng(args.seed, "sample-gff", r))
        rows += _field_rows(g, phi.values)
    n_rows = _write_csv(out / "fields.csv", ["vertex", "value"], rows)
    _write_summary(out, "sample-gff",
                   {"graph": args.graph, "pin": pin_desc, "n": args.n,
                    "seed": args.seed},
                   {"fields.csv": n_rows})
    return EXIT_OK


def cmd_sample_loopsoup(args) -> int:
    g, _, _ = _load(args)
    out = _out_dir(args)
    loop_rows, occ_rows, cross_rows = [], [], []
    next_id = 0
    for r in range(args.n):
        soup = sample_loop_soup(g, args.alpha,
                                make_rng(args.seed, "sample-loopsoup", r))
        loop_rows += _loop_rows(g, soup, next_id)
        next_id += len(soup.loops)
        occ, cross = _soup_field_rows(g, soup)
        occ_rows += occ
        cross_rows += cross
    outputs = {
        "loops.csv": _write_csv(
            out / "loops.csv",
            ["loop_id", "root", "step", "vertex", "holding", "edge_id"],
            loop_rows),
        "fields.csv": _write_csv(out / "fields.csv", ["vertex", "L"], occ_rows),
        "crossings.csv": _write_csv(out / "crossings.csv", ["edge", "N"],
                                    cross_rows),
    }
    _write_summary(out, "sample-loopsoup",
                   {"graph": args.graph, "alpha": args.alpha, "n": args.n,
                    "seed": args.seed, "loops": next_id},
                   outputs)
    return EXIT_OK


def cmd_forward_rk(args) -> int:
    g, x0, u = _load(args)
    x0 = _need(x0, "a root vertex --x0")
    u = _need(u, "a local-time level --u")
    out = _out_dir(args)
    traj_rows, records = [], []
    for r in range(args.n):
        rng = make_rng(args.seed, "forward-rk", r)
        fc = forward_rk_coupling(g, x0, u, rng)
        traj_rows += _trajectory_rows(g, fc.trajectory)
        records.append({
            "replica": r,
            "phi0": _field_record(g, fc.phi0.values),
            "open0": sorted(fc.open0),
            "phi_u": _field_record(g, fc.phi_u.values),
            "open_u": sorted(fc.open_u),
            "duration": fc.trajectory.total_time,
        })
    outputs = {
        "trajectory.csv": _write_csv(
            out / "trajectory.csv",
            ["step", "vertex", "holding", "exit_kind", "edge_id"], traj_rows),
        "couplings.jsonl": _write_jsonl(out / "couplings.jsonl", records),
    }
    _write_summary(out, "forward-rk",
                   {"graph": args.graph, "x0": g.labels[x0], "u": u,
                    "n": args.n, "seed": args.seed},
                   outputs)
    return EXIT_OK


def cmd_forward_enlarged(args) -> int:
    g, x0, u = _load(args)
    x0 = _need(x0, "a root vertex --x0")
    u = _need(u, "a local-time level --u")
    out = _out_dir(args)
    traj_rows, event_rows, records = [], [], []
    for r in range(args.n):
        rng = make_rng(args.seed, "forward-enlarged", r)
        run = forward_enlarged(g, x0, u, rng)
        traj_rows += _trajectory_rows(g, run.trajectory)
        # crossing events correspond one-to-one, in order, to the jumps
        jumps = []
        for s in run.trajectory.steps:
            if s.exit == JUMP:
                e = g.edges[g.edge_position(s.edge)]
                jumps.append((g.labels[s.vertex], g.labels[e.other(s.vertex)]))
        j = 0
        for ev in run.events:
            if ev.kind == "crossing":
                src, dst = jumps[j]
                j += 1
            else:
                src, dst = "", ""
            event_rows.append([_fmt(ev.time), ev.edge, ev.kind, src, dst,
                               int(ev.n_after)])
        records.append({
            "replica": r,
            "phi0": _field_record(g, run.phi0.values),
            "n0": {e.id: int(run.n0[pos]) for pos, e in enumerate(g.edges)},
            "n_end": {e.id: int(run.n_end[pos]) for pos, e in enumerate(g.edges)},
            "open_end": sorted(run.open_end),
            "phi_u": _field_record(g, run.phi_u.values),
            "duration": run.trajectory.total_time,
        })
    outputs = {
        "trajectory.csv": _write_csv(
            out / "trajectory.csv",
            ["step", "vertex", "holding", "exit_kind", "edge_id"], traj_rows),
        "events.csv": _write_csv(
            out / "events.csv",
            ["time", "edge", "kind", "from", "to", "n_after"], event_rows),
        "runs.jsonl": _write_jsonl(out / "runs.jsonl", records),
    }
    _write_summary(out, "forward-enlarged",
                   {"graph": args.graph, "x0": g.labels[x0], "u": u,
                    "n": args.n, "seed": args.seed},
                   outputs)
    return EXIT_OK


def cmd_inverse_rk(args) -> int:
    g, x0, u = _load(args)
    x0 = _need(x0, "a root vertex --x0")
    u = _need(u, "a local-time level --u")
    out = _out_dir(args)
    su = math.sqrt(2.0 * u)
    traj_rows, event_rows, records = [], [], []
    for r in range(args.n):
        rng = make_rng(args.seed, "inverse-rk", args.engine, r)
        phi_u = sample_gff(g, condition({x0: su}), rng)
        if args.engine == "stack":
            st = init_inverse_from_field(g, phi_u, x0, rng)
            run = run_inverse(st, rng)
        elif args.engine == "jump-rate":
            open0 = fk_from_field(g, phi_u, rng)
            run = run_inverse_jump_rates(g, phi_u, x0, open0, rng)
        else:  # discrete: counts-only embedded chain of the stack engine
            st = init_inverse_from_field(g, phi_u, x0, rng)
            counts = st.counts()
            drun = run_inverse_discrete(g, x0, counts, rng)
            n = counts.copy()
            for eid, src, dst in drun.steps:
                pos = g.edge_position(eid)
                n[pos] -= 1
                if n[pos] > 0:
                    kind = "plain-jump" if src != dst else "stay"
                else:
                    kind = "close-jump" if src != dst else "close-stay"
                event_rows.append(["", eid, kind, g.labels[src],
                                   g.labels[dst], int(n[pos])])
            records.append({
                "replica": r,
                "terminal_vertex": g.labels[drun.terminal_vertex],
                "duration": None,
                "cluster_count": clusters(
                    g, [e.id for pos, e in enumerate(g.edges)
                        if drun.remaining[pos] > 0]).count,
                "crossings": {e.id: int(drun.crossings[pos])
                              for pos, e in enumerate(g.edges)},
            })
            continue
        traj_rows += _trajectory_rows(g, run.trajectory)
        event_rows += _event_rows(g, run.events)
        records.append(_run_record(g, r, run))
    outputs = {}
    if args.engine != "discrete":
        outputs["trajectory.csv"] = _write_csv(
            out / "trajectory.csv",
            ["step", "vertex", "holding", "exit_kind", "edge_id"], traj_rows)
    outputs["events.csv"] = _write_csv(
        out / "events.csv",
        ["time", "edge", "kind", "from", "to", "n_after"], event_rows)
    outputs["runs.jsonl"] = _write_jsonl(out / "runs.jsonl", records)
    _write_summary(out, "inverse-rk",
                   {"graph": args.graph, "x0": g.labels[x0], "u": u,
                    "engine": args.engine, "n": args.n, "seed": args.seed},
                   outputs)
    return EXIT_OK


def cmd_invert_loopsoup(args) -> int:
    g, _, _ = _load(args)
    out = _out_dir(args)
    input_rows, loop_rows, occ_rows, cross_rows = [], [], [], []
    next_id = 0
    for r in range(args.n):
        rng = make_rng(args.seed, "invert-loopsoup", r)
        phi = sample_gff(g, condition(), rng)
        soup = invert_loop_soup(g, phi, rng)
        input_rows += _field_rows(g, phi.values)
        loop_rows += _loop_rows(g, soup, next_id)
        next_id += len(soup.loops)
        occ, cross = _soup_field_rows(g, soup)
        occ_rows += occ
        cross_rows += cross
    outputs = {
        "input.csv": _write_csv(out / "input.csv", ["vertex", "value"],
                                input_rows),
        "loops.csv": _write_csv(
            out / "loops.csv",
            ["loop_id", "root", "step", "vertex", "holding", "edge_id"],
            loop_rows),
        "fields.csv": _write_csv(out / "fields.csv", ["vertex", "L"], occ_rows),
        "crossings.csv": _write_csv(out / "crossings.csv", ["edge", "N"],
                                    cross_rows),
    }
    _write_summary(out, "invert-loopsoup",
                   {"graph": args.graph, "n": args.n, "seed": args.seed,
                    "loops": next_id},
                   outputs)
    return EXIT_OK


def cmd_couple_fk(args) -> int:
    g, x0, u = _load(args)
    if x0 is None:
        cond, pin_desc = condition(), "none"
    else:
        val = math.sqrt(2.0 * u) if u is not None else 0.0
        cond, pin_desc = condition({x0: val}), f"{g.labels[x0]}={val!r}"
    out = _out_dir(args)
    field_rows, records = [], []
    for r in range(args.n):
        rng = make_rng(args.seed, "couple-fk", r)
        phi = sample_gff(g, cond, rng)
        open_ids = fk_from_field(g, phi, rng)
        sigma = sign_sample_on_clusters(g, open_ids, rng, pin=x0)
        field_rows += _field_rows(g, phi.values)
        records.append({
            "replica": r,
            "phi": _field_record(g, phi.values),
            "open": sorted(open_ids),
            "sigma": {g.labels[x]: int(sigma[x]) for x in range(g.n)},
        })
    outputs = {
        "fields.csv": _write_csv(out / "fields.csv", ["vertex", "value"],
                                 field_rows),
        "couplings.jsonl": _write_jsonl(out / "couplings.jsonl", records),
    }
    _write_summary(out, "couple-fk",
                   {"graph": args.graph, "pin": pin_desc, "n": args.n,
                    "seed": args.seed},
                   outputs)
    return EXIT_OK


def cmd_invert_current(args) -> int:
    g, _, _ = _load(args)
    weights = [e.w for e in g.edges]  # couplings J_e = conductances
    fk = fk_exact(g, weights)
    out = _out_dir(args)
    current_rows, records = [], []
    for r in range(args.n):
        rng = make_rng(args.seed, "invert-current", r)
        om = fk.sample(rng)
        open_ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
        cur = invert_current_from_fk(g, weights, open_ids, rng)
        current_rows += [[e.id, int(cur[pos])] for pos, e in enumerate(g.edges)]
        records.append({
            "replica": r,
            "open": sorted(open_ids),
            "current": {e.id: int(cur[pos]) for pos, e in enumerate(g.edges)},
        })
    outputs = {
        "currents.csv": _write_csv(out / "currents.csv", ["edge", "N"],
                                   current_rows),
        "couplings.jsonl": _write_jsonl(out / "couplings.jsonl", records),
    }
    _write_summary(out, "invert-current",
                   {"graph": args.graph, "n": args.n, "seed": args.seed},
                   outputs)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g, _, _ = _load(args)
    weights = [e.w for e in g.edges]  # couplings J_e = conductances
    if args.which == "ising":
        dist = ising_exact(g, weights)
        fmt = lambda sig: "".join("+" if s > 0 else "-" for s in sig)  # noqa: E731
    elif args.which == "fk":
        dist = fk_exact(g, weights)
        fmt = lambda om: "".join(str(int(o)) for o in om)  # noqa: E731
    else:
        dist = current_exact(g, weights, n_max=40)
        fmt = lambda n: ",".join(str(int(k)) for k in n)  # noqa: E731
    out = _out_dir(args)
    rows = [[fmt(o), _fmt(p)] for o, p in zip(dist.outcomes, dist.probs)]
    n_rows = _write_csv(out / "oracle.csv", ["outcome", "probability"], rows)
    _write_summary(out, f"oracle {args.which}",
                   {"graph": args.graph, "log_z": dist.log_z,
                    "truncation_bound": dist.truncation_bound},
                   {"oracle.csv": n_rows})
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(available()) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in available():
            raise GraphError(
                f"unknown suite {name!r}; available: "
                f"{', '.join(available())} (or 'all')"
            )
    out = _out_dir(args)
    rows, lines, all_passed = [], [], True
    for name in names:
        report = run_suite(name, args.seed)
        all_passed &= report.passed
        rows += report.rows()
        lines += report.lines()
        for ln in report.lines():
            print(ln)
    header = ["suite", "seed", "check", "kind", "statistic", "p_value",
              "threshold", "passed", "passed_raw", "detail"]
    with open(out / "report.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header)
        w.writeheader()
        w.writerows(rows)
    _write_summary(out, f"verify {args.suite}",
                   {"seed": args.seed,
                    "result": "PASS" if all_passed else "FAIL"},
                   {"report.csv": len(rows)})
    (out / "verify.txt").write_text("\n".join(lines) + "\n")
    return EXIT_OK if all_passed else EXIT_TEST_FAILURE


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser, *, graph=True, x0=False, u=False,
                alpha=False, n=False, engine=False) -> None:
    if graph:
        p.add_argument("--graph", required=True, metavar="PATH",
                       help="graph description file (JSON)")
    if x0:
        p.add_argument("--x0", metavar="LABEL", default=None,
                       help="root vertex label (default: the graph file's "
                            "x0 entry, if present)")
    if u:
        p.add_argument("--u", type=float, metavar="F", default=None,
                       help="local-time level, > 0 (default: the graph "
                            "file's u entry, if present)")
    if alpha:
        p.add_argument("--alpha", type=float, metavar="F", default=0.5,
                       help="loop-ensemble intensity (default: 0.5)")
    if n:
        p.add_argument("--n", type=int, metavar="INT", default=1,
                       help="number of independent replicas (default: 1)")
    if engine:
        p.add_argument("--engine", choices=ENGINES, default="stack",
                       help="inverse engine (default: stack)")
    p.add_argument("--seed", type=int, metavar="INT", default=0,
                   help="master seed; every output is a pure function of it "
                        "(default: 0)")
    p.add_argument("--out", metavar="DIR", default=".",
                   help="output directory, created if missing (default: .)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopfield",
        description="Samplers, inversion engines and verification suites for "
                    "fields, loops, clusters and currents on finite weighted "
                    "graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "sample-gff",
        help="draw Gaussian fields; CSV rows vertex,value per replica",
        description="Draw exact samples of the Gaussian field.  Without "
                    "--x0 the unconditioned law is used (the graph must "
                    "carry killing); with --x0 the field is pinned there to "
                    "sqrt(2u) if --u is given, else to 0.  Replicas are "
                    "concatenated in fields.csv in replica order.")
    _add_common(p, x0=True, u=True, n=True)
    p.set_defaults(func=cmd_sample_gff)

    p = sub.add_parser(
        "sample-loopsoup",
        help="draw loop ensembles; loops.csv, fields.csv, crossings.csv",
        description="Sample the loop ensemble at intensity --alpha.  "
                    "loops.csv holds one row per loop step with a globally "
                    "increasing loop_id; fields.csv (vertex,L) and "
                    "crossings.csv (edge,N) hold one block per replica.")
    _add_common(p, alpha=True, n=True)
    p.set_defaults(func=cmd_sample_loopsoup)

    p = sub.add_parser(
        "forward-rk",
        help="field-and-walk coupling at level u",
        description="Couple a field pinned to zero at --x0 with the walk "
                    "conditioned to reach root local time --u: writes the "
                    "walk (trajectory.csv) and per-replica records of the "
                    "initial/final fields and open-edge sets "
                    "(couplings.jsonl).")
    _add_common(p, x0=True, u=True, n=True)
    p.set_defaults(func=cmd_forward_rk)

    p = sub.add_parser(
        "forward-enlarged",
        help="forward construction with live edge stacks",
        description="Run the forward construction that carries Poisson edge "
                    "stacks along the conditioned walk: trajectory.csv, "
                    "events.csv (time,edge,kind,from,to,n_after; from/to "
                    "filled for crossing events) and runs.jsonl.")
    _add_common(p, x0=True, u=True, n=True)
    p.set_defaults(func=cmd_forward_enlarged)

    p = sub.add_parser(
        "inverse-rk",
        help="unwind a level-u field into the walk that built it",
        description="Draw a field pinned to sqrt(2u) at --x0 and run the "
                    "chosen inverse engine to depletion.  Writes events.csv, "
                    "runs.jsonl (terminal vertex, duration, cluster count, "
                    "crossings per edge) and, for the continuous-time "
                    "engines, trajectory.csv.  The discrete engine is the "
                    "counts-only embedded chain: its events carry no times "
                    "and its runs no durations.")
    _add_common(p, x0=True, u=True, n=True, engine=True)
    p.set_defaults(func=cmd_inverse_rk)

    p = sub.add_parser(
        "invert-loopsoup",
        help="unwind sampled fields into loop ensembles",
        description="Draw unconditioned fields (the graph must carry "
                    "killing) and unwind each into an intensity-1/2 loop "
                    "ensemble: input.csv (vertex,value), loops.csv, "
                    "fields.csv (vertex,L; satisfies 2L = value^2), "
                    "crossings.csv (edge,N).")
    _add_common(p, n=True)
    p.set_defaults(func=cmd_invert_loopsoup)

    p = sub.add_parser(
        "couple-fk",
        help="field, open-edge set, and cluster signs",
        description="Draw a field (pinned as in sample-gff when --x0/--u "
                    "are given), open each equal-sign edge with probability "
                    "1 - exp(-2 W phi phi), and sign the clusters "
                    "uniformly (the pinned cluster forced to +1): "
                    "fields.csv plus couplings.jsonl.")
    _add_common(p, x0=True, u=True, n=True)
    p.set_defaults(func=cmd_couple_fk)

    p = sub.add_parser(
        "invert-current",
        help="exact cluster samples turned into integer currents",
        description="Sample the cluster law exactly (couplings J_e equal "
                    "the edge conductances; needs at most 20 edges) and "
                    "turn each sample into an integer current: currents.csv "
                    "(edge,N) one block per replica, plus couplings.jsonl.")
    _add_common(p, n=True)
    p.set_defaults(func=cmd_invert_current)

    p = sub.add_parser(
        "oracle",
        help="exact finite distributions; CSV rows outcome,probability",
        description="Enumerate an exact distribution with couplings J_e "
                    "equal to the edge conductances.  Outcomes: ising = one "
                    "+/- per vertex; fk = one 0/1 per edge; current = "
                    "comma-separated counts per edge (truncated at 40, "
                    "truncation bound in summary.txt).")
    p.add_argument("which", choices=("ising", "fk", "current"),
                   help="which distribution to enumerate")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser(
        "verify",
        help="run a seeded verification suite (exit 1 on failure)",
        description="Run one verification suite (or 'all').  Prints one "
                    "line per check, writes report.csv (raw and adjusted "
                    "pass columns) and verify.txt, and exits 1 if any "
                    "Bonferroni-adjusted check fails.")
    p.add_argument("suite", metavar="SUITE",
                   help="suite name, one of: " + ", ".join(available())
                        + ", or 'all'")
    p.add_argument("--seed", type=int, metavar="INT", required=True,
                   help="suite seed (required; suites are pure functions "
                        "of it)")
    p.add_argument("--out", metavar="DIR", default=".",
                   help="output directory, created if missing (default: .)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed its message
        return EXIT_OK if not exc.code else EXIT_CONFIG
    try:
        return args.func(args)
    except (GraphError, OSError) as exc:
        print(f"loopfield: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - unexpected failure
        print(f"loopfield: runtime error: {exc!r}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
