"""Command-line front end: reproducible experiments, sweeps, and artifacts.

Subcommands: generate, moran, bounds, aggregate, control, sweep. Every JSON
artifact embeds the tool version and the fully resolved parameter spec
(including the seed), and re-running that spec reproduces the artifact byte
for byte regardless of --threads. Series outputs are CSV with '#' comment
lines carrying the same self-description.

Exit codes: 0 success; 2 usage or precondition error; 3 runtime guard
(non-termination guard tripped, truncated Monte Carlo trials, or a
non-converged run).
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .aggregation import (
    AggregationError,
    complete_graph_trajectory,
    degree_of_influence,
    mutant_vector,
    round_mutant_count,
    run_to_convergence,
)
from .bounds import generic_upper_bound, lambda_bounds
from .control import ControlConfig, ControlError, run_continuous_control, run_phase_control
from .graphs import FAMILY_TAGS, Graph, GraphError, GraphFamily, generate, is_connected, load_edge_list, save_edge_list
from .moran import (
    EXACT_STATE_CAP,
    MoranConfig,
    MoranError,
    Placement,
    absorption_csv,
    estimate_fixation,
    exact_fixation,
)
from .rng import derive_seed


class UsageError(ValueError):
    """Bad command-line input not caught by argparse itself."""


_ERRORS = (UsageError, GraphError, MoranError, AggregationError, ControlError)


@dataclass
class Artifact:
    """One runner's output: envelope pieces plus side-channel series files."""

    spec: dict
    result: dict
    row: dict
    series: list[tuple[str, str]] = field(default_factory=list)  # (path, text)
    exit_code: int = 0
    text: str | None = None  # non-JSON payload (generate)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _py(value):
    """Convert numpy scalars/arrays to plain Python for JSON."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_py(v) for v in value]
    if isinstance(value, (list, tuple)):
        return [_py(v) for v in value]
    if isinstance(value, dict):
        return {k: _py(v) for k, v in value.items()}
    return value


def _artifact_json(spec: dict, result: dict) -> str:
    obj = {"tool": "evograph", "version": __version__, "spec": _py(spec), "result": _py(result)}
    return json.dumps(obj, indent=2) + "\n"


def _row_csv(row: dict) -> str:
    header = ",".join(row)
    values = ",".join(_csv_cell(v) for v in row.values())
    return header + "\n" + values + "\n"


def _csv_cell(v) -> str:
    v = _py(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _series_header(spec: dict) -> str:
    return (
        f"# evograph {__version__}\n"
        f"# spec: {json.dumps(_py(spec), separators=(',', ':'))}\n"
    )


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _set_threads(args) -> None:
    if getattr(args, "threads", None):
        import numba

        numba.set_num_threads(args.threads)


def _family_tag(name: str) -> str:
    tag = name.replace("-", "_")
    if tag not in FAMILY_TAGS or tag == "custom":
        raise UsageError(f"unknown family {name!r}")
    return tag


def _graph_from_args(args) -> tuple[Graph, dict, str, str | None, int | None]:
    """Build the graph; returns (graph, spec fields, description, family tag, family n)."""
    if getattr(args, "edges", None):
        with open(args.edges, "r", encoding="utf-8") as f:
            g = load_edge_list(f.read())
        return g, {"edges": args.edges}, args.edges, None, None
    if args.family is None or args.n is None:
        raise UsageError("need --family and --n (or --edges PATH)")
    tag = _family_tag(args.family)
    eps = getattr(args, "eps_weight", None)
    if tag == "weighted_star":
        if eps is None:
            raise UsageError("weighted-star needs --eps-weight")
        fam = GraphFamily(tag, args.n, eps)
        desc = f"weighted_star({args.n}, eps={eps})"
        spec = {"family": args.family, "n": args.n, "eps_weight": eps}
    else:
        fam = GraphFamily(tag, args.n)
        desc = f"{tag}({args.n})"
        spec = {"family": args.family, "n": args.n}
    return generate(fam), spec, desc, tag, args.n


def _placement_from_arg(text: str, g: Graph, family_tag: str | None, family_n: int | None) -> Placement:
    if text == "uniform":
        return Placement.uniform()
    if text.startswith("vertex:"):
        return Placement.vertex(int(text.split(":", 1)[1]))
    if text.startswith("set:"):
        return Placement.mutant_set(int(v) for v in text.split(":", 1)[1].split(","))
    if text in ("clique", "ring"):
        if family_tag != "clique_wheel" or family_n is None:
            raise UsageError(f"placement {text!r} needs --family clique-wheel")
        lo, hi = (0, family_n) if text == "clique" else (family_n, 2 * family_n)
        return Placement.uniform(range(lo, hi))
    raise UsageError(f"bad placement {text!r}; use uniform | vertex:ID | set:I,J,... | clique | ring")


def _parse_r_grid(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad r grid {text!r}") from exc
    if not values:
        raise UsageError("empty r grid")
    return values


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------


def run_generate(args) -> Artifact:
    g, spec, _, _, _ = _graph_from_args(args)
    spec = {"command": "generate", **spec}
    return Artifact(spec=spec, result={}, row={}, text=save_edge_list(g))


def run_moran(args) -> Artifact:
    g, gspec, desc, tag, fam_n = _graph_from_args(args)
    if not is_connected(g):
        raise UsageError("graph must be connected")
    spec = {
        "command": "moran", **gspec, "r": args.r, "method": args.method,
        "placement": args.placement, "trials": args.trials, "max_steps": args.max_steps,
        "exact_cap": args.exact_cap, "seed": args.seed, "format": args.format,
    }
    if args.dump_states:
        spec["dump_states"] = args.dump_states
    series: list[tuple[str, str]] = []
    exit_code = 0
    if args.method == "mc":
        placement = _placement_from_arg(args.placement, g, tag, fam_n)
        cfg = MoranConfig(r=args.r, placement=placement, max_steps=args.max_steps)
        _set_threads(args)
        est = estimate_fixation(g, cfg, args.trials, args.seed)
        result = {
            "graph": desc, "family": tag or "custom", "n": g.n, "r": args.r,
            "placement": args.placement, "trials": est.trials, "fixations": est.fixations,
            "probability": est.probability, "std_error": est.std_error, "seed": est.seed,
            "truncated": est.truncated, "mean_steps": est.mean_absorption_steps,
        }
        row = {
            "n": g.n, "r": args.r, "probability": est.probability, "std_error": est.std_error,
            "fixations": est.fixations, "trials": est.trials, "truncated": est.truncated,
            "mean_steps": est.mean_absorption_steps, "seed": est.seed,
        }
        if est.truncated > 0:
            exit_code = 3
    else:
        sol = exact_fixation(g, args.r, cap=args.exact_cap)
        result = {
            "graph": desc, "family": tag or "custom", "n": g.n, "r": args.r,
            "f_g": sol.f_g, "per_vertex": list(sol.per_vertex), "residual": sol.residual,
        }
        row = {"n": g.n, "r": args.r, "f_g": sol.f_g, "residual": sol.residual}
        if args.dump_states:
            series.append((args.dump_states, _series_header(spec) + absorption_csv(sol)))
    return Artifact(spec=spec, result=result, row=row, series=series, exit_code=exit_code)


def run_bounds(args) -> Artifact:
    g, gspec, desc, tag, _ = _graph_from_args(args)
    r_grid = _parse_r_grid(args.r)
    spec = {"command": "bounds", **gspec, "r": args.r, "seed": args.seed, "format": args.format}
    gub = generic_upper_bound(g)
    lb = lambda_bounds(g)
    per_r = []
    for r in r_grid:
        u, v = gub.argmax_edge(r)
        per_r.append({
            "r": r, "generic_upper": gub.value(r), "argmax_u": u, "argmax_v": v,
            "lambda_lower": lb.lower(r), "lambda_upper": lb.upper(r),
        })
    result = {"graph": desc, "family": tag or "custom", "n": g.n, "lambda": lb.lam, "per_r": per_r}
    first = per_r[0]
    row = {"n": g.n, "r": first["r"], "lambda": lb.lam, "generic_upper": first["generic_upper"],
           "lambda_lower": first["lambda_lower"], "lambda_upper": first["lambda_upper"]}
    return Artifact(spec=spec, result=result, row=row)


def _mutants_from_args(args, n: int) -> list[int]:
    if args.mutant_set:
        return sorted(int(v) for v in args.mutant_set.split(","))
    if args.alpha is None:
        raise UsageError("need --alpha (or --mutant-set)")
    return list(range(round_mutant_count(n, args.alpha)))


def run_aggregate(args) -> Artifact:
    g, gspec, desc, tag, fam_n = _graph_from_args(args)
    spec = {
        "command": "aggregate", **gspec, "r": args.r, "mode": args.mode,
        "eps": args.eps, "max_iters": args.max_iters, "seed": args.seed, "format": args.format,
    }
    if args.alpha is not None:
        spec["alpha"] = args.alpha
    if args.mutant_set:
        spec["mutant_set"] = args.mutant_set
    if args.traj_out:
        spec["traj_out"] = args.traj_out
    series: list[tuple[str, str]] = []
    exit_code = 0

    if args.mode == "influence":
        spec["influence_mode"] = args.influence_mode
        if args.samples is not None:
            spec["samples"] = args.samples
        if args.alpha is None:
            raise UsageError("influence mode needs --alpha")
        res = degree_of_influence(
            g, args.r, args.alpha, mode=args.influence_mode, samples=args.samples,
            seed=args.seed, eps=args.eps, max_iters=args.max_iters,
        )
        result = {
            "n": res.n, "alpha": res.alpha, "r": res.r, "mode": res.mode,
            "placements": res.placements, "f_G": res.f_g, "r_0": res.r_0,
            "degenerate_r": res.degenerate_r,
        }
        if res.placements <= 4096:
            result["per_placement"] = [
                {"vertices": list(s), "r_0": r0, "f": f} for s, r0, f in res.per_placement
            ]
        row = {"n": res.n, "alpha": res.alpha, "r": res.r, "placements": res.placements,
               "f_G": res.f_g, "r_0": res.r_0, "seed": args.seed}
        return Artifact(spec=spec, result=result, row=row, series=series)

    if args.mode == "two-class":
        if tag != "complete":
            raise UsageError("two-class mode needs --family complete")
        if args.alpha is None:
            raise UsageError("two-class mode needs --alpha")
        n = g.n
        if args.k_max is not None:
            k_max = args.k_max
            spec["k_max"] = args.k_max
        else:
            gap0 = args.r - 1.0
            if gap0 <= args.eps or n == 2:
                k_max = 1
            else:
                k_max = math.ceil(math.log(gap0 / args.eps) / math.log((n - 1) / (n - 2))) + 1
        traj = complete_graph_trajectory(n, args.alpha, args.r, k_max)
        k_stop = traj.first_k_below(args.eps)
        converged = k_stop is not None
        k_final = k_stop if converged else k_max
        result = {
            "graph": desc, "family": tag, "n": n, "r": args.r, "alpha": traj.alpha,
            "mutants": traj.mutants, "k_stop": k_final, "converged": converged,
            "r0_hat": traj.weighted_mean[k_final], "delta_final": traj.delta[k_final],
        }
        row = {"n": n, "r": args.r, "alpha": traj.alpha, "k_stop": k_final,
               "converged": converged, "r0_hat": traj.weighted_mean[k_final]}
        if args.traj_out:
            lines = [_series_header(spec) + "k,phi,max_gap,min_fitness,max_fitness,r1,r2"]
            a = traj.mutants
            for k in range(k_final + 1):
                phi = (a * traj.r1[k] + (n - a) * traj.r2[k]) / (n - 1)
                lines.append(
                    f"{k},{phi!r},{traj.delta[k]!r},{traj.r2[k]!r},{traj.r1[k]!r},"
                    f"{traj.r1[k]!r},{traj.r2[k]!r}"
                )
            series.append((args.traj_out, "\n".join(lines) + "\n"))
        if not converged:
            exit_code = 3
        return Artifact(spec=spec, result=result, row=row, series=series, exit_code=exit_code)

    # trajectory mode
    mutants = _mutants_from_args(args, g.n)
    run = run_to_convergence(g, mutant_vector(g.n, mutants, args.r).values, args.eps, args.max_iters)
    result = {
        "graph": desc, "family": tag or "custom", "n": g.n, "r": args.r,
        "alpha": len(mutants) / g.n, "mutants": mutants, "k_stop": run.k_stop,
        "converged": run.converged, "r0_hat": run.r0_hat, "spread": run.spread,
        "phi_final": run.phi[-1],
    }
    row = {"n": g.n, "r": args.r, "alpha": len(mutants) / g.n, "k_stop": run.k_stop,
           "converged": run.converged, "r0_hat": run.r0_hat, "spread": run.spread}
    if args.traj_out:
        lines = [_series_header(spec) + "k,phi,max_gap,min_fitness,max_fitness"]
        for k in range(len(run.phi)):
            lines.append(
                f"{k},{run.phi[k]!r},{run.max_gap[k]!r},{run.min_fitness[k]!r},{run.max_fitness[k]!r}"
            )
        series.append((args.traj_out, "\n".join(lines) + "\n"))
    if not run.converged:
        exit_code = 3
    return Artifact(spec=spec, result=result, row=row, series=series, exit_code=exit_code)


def run_control(args) -> Artifact:
    cfg = ControlConfig(
        n=args.n, alpha=args.alpha, r=args.r, beta=args.beta, delta=args.delta,
        mode=args.mode, eps=args.eps, policy=args.policy, policy_seed=args.seed,
    )
    spec = {
        "command": "control", "mode": args.mode, "n": args.n, "alpha": args.alpha,
        "r": args.r, "beta": args.beta, "delta": args.delta, "eps": args.eps,
        "policy": args.policy, "seed": args.seed, "format": args.format,
    }
    if args.traj_out:
        spec["traj_out"] = args.traj_out
    report = run_phase_control(cfg) if args.mode == "phases" else run_continuous_control(cfg)
    result = {
        "mode": report.mode, "n": report.n, "alpha": report.alpha, "r": report.r,
        "beta": report.beta, "eps": report.eps, "delta": report.delta,
        "policy": report.policy, "used": report.used, "bound": report.bound,
        "healthy": report.healthy, "trajectory_csv_path": args.traj_out,
    }
    row = {"n": report.n, "alpha": report.alpha, "r": report.r, "beta": report.beta,
           "delta": report.delta, "used": report.used, "bound": report.bound,
           "healthy": report.healthy, "seed": args.seed}
    series: list[tuple[str, str]] = []
    if args.traj_out:
        lines = [_series_header(spec) + "k_or_phase,r1,r2,max_fitness"]
        if report.mode == "phases":
            for ph in report.phases:
                lines.append(
                    f"{ph.phase},{ph.limit_estimate!r},{ph.min_fitness!r},{ph.max_fitness!r}"
                )
        else:
            for k in range(len(report.series_r1)):
                r1, r2 = report.series_r1[k], report.series_r2[k]
                lines.append(f"{k},{r1!r},{r2!r},{r1!r}")
        series.append((args.traj_out, "\n".join(lines) + "\n"))
    return Artifact(spec=spec, result=result, row=row, series=series,
                    exit_code=3 if report.guard_tripped else 0)


RUNNERS = {
    "generate": run_generate,
    "moran": run_moran,
    "bounds": run_bounds,
    "aggregate": run_aggregate,
    "control": run_control,
}


# ---------------------------------------------------------------------------
# Parsers
# ---------------------------------------------------------------------------


def _common_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", type=str, default=None, help="artifact path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=None, help="Monte Carlo thread count")
    p.add_argument("--config", type=str, default=None,
                   help="flat key=value file mirroring flags; flags win on conflict")
    return p


def _graph_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--family", type=str, default=None,
                   help="complete | cycle | path | star | clique-wheel | weighted-star")
    p.add_argument("--n", type=int, default=None, help="family size parameter")
    p.add_argument("--eps-weight", dest="eps_weight", type=float, default=None,
                   help="weight of the light edge (weighted-star)")
    p.add_argument("--edges", type=str, default=None, help="edge-list file instead of a family")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evograph")
    parser.add_argument("--version", action="version", version=f"evograph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common, graph = _common_parent(), _graph_parent()

    p = sub.add_parser("generate", parents=[common, graph], help="emit an edge list")

    p = sub.add_parser("moran", parents=[common, graph], help="fixation probability (MC or exact)")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--method", choices=("mc", "exact"), default="mc")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--placement", type=str, default="uniform",
                   help="uniform | vertex:ID | set:I,J,... | clique | ring")
    p.add_argument("--max-steps", dest="max_steps", type=int, default=10**9)
    p.add_argument("--exact-cap", dest="exact_cap", type=int, default=EXACT_STATE_CAP)
    p.add_argument("--dump-states", dest="dump_states", type=str, default=None,
                   help="CSV path for the exact state table (n <= 8)")

    p = sub.add_parser("bounds", parents=[common, graph], help="fixation-probability bounds")
    p.add_argument("--r", type=str, required=True, help="fitness or comma list, e.g. 1.5,2,3")

    p = sub.add_parser("aggregate", parents=[common, graph], help="mutual-influence dynamics")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--mutant-set", dest="mutant_set", type=str, default=None)
    p.add_argument("--mode", choices=("trajectory", "influence", "two-class"), default="trajectory")
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=1_000_000)
    p.add_argument("--influence-mode", dest="influence_mode",
                   choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--exhaustive", dest="influence_mode", action="store_const", const="exhaustive",
                   help="alias for --influence-mode exhaustive")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p.add_argument("--traj-out", dest="traj_out", type=str, default=None)

    p = sub.add_parser("control", parents=[common], help="invasion control on the complete graph")
    p.add_argument("--mode", choices=("phases", "continuous"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--policy", choices=("highest-fitness", "random", "fixed-prefix"),
                   default="highest-fitness")
    p.add_argument("--traj-out", dest="traj_out", type=str, default=None)
    return parser


def _sweep_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evograph sweep", parents=[_common_parent()])
    p.add_argument("target", choices=("moran", "bounds", "aggregate", "control"))
    p.add_argument("--axis", action="append", default=[],
                   help="name=v1,v2,... (repeatable); cells run in declaration order")
    return p


def _parse_axis(text: str) -> tuple[str, list]:
    if "=" not in text:
        raise UsageError(f"bad axis {text!r}; expected name=v1,v2,...")
    name, _, values = text.partition("=")
    name = name.strip()
    items = [v.strip() for v in values.split(",") if v.strip() != ""]
    if not name or not items:
        raise UsageError(f"axis {text!r} has no values")
    parsed = []
    for item in items:
        try:
            parsed.append(int(item))
        except ValueError:
            try:
                parsed.append(float(item))
            except ValueError:
                parsed.append(item)
    return name, parsed


def run_sweep(argv: list[str]) -> int:
    ns, rest = _sweep_parser().parse_known_args(argv)
    if not ns.axis:
        raise UsageError("sweep needs at least one --axis")
    axes = [_parse_axis(a) for a in ns.axis]
    spec = {
        "command": "sweep", "target": ns.target, "axis": list(ns.axis),
        "args": list(rest), "seed": ns.seed, "format": ns.format,
    }
    parser = build_parser()
    rows: list[dict] = []
    exit_code = 0
    for idx, combo in enumerate(itertools.product(*(vals for _, vals in axes))):
        cell_argv = [ns.target] + list(rest)
        for (name, _), value in zip(axes, combo):
            cell_argv += [f"--{name}", str(value)]
        cell_argv += ["--seed", str(derive_seed(ns.seed, idx))]
        if ns.threads is not None:
            cell_argv += ["--threads", str(ns.threads)]
        cell_args = parser.parse_args(cell_argv)
        artifact = RUNNERS[ns.target](cell_args)
        exit_code = max(exit_code, artifact.exit_code)
        row = {name: value for (name, _), value in zip(axes, combo)}
        for key, value in artifact.row.items():
            row.setdefault(key, value)
        rows.append(row)
    header = list(rows[0])
    lines = [_series_header(spec) + ",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(k, "")) for k in header))
    _write(ns.out, "\n".join(lines) + "\n")
    return exit_code


# ---------------------------------------------------------------------------
# Config files and spec replay
# ---------------------------------------------------------------------------


def _config_to_argv(path: str) -> list[str]:
    out: list[str] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line:
                key, _, value = line.partition("=")
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, value = parts
            key = key.strip().replace("_", "-")
            value = value.strip()
            if not key:
                raise UsageError(f"{path}:{lineno}: empty key")
            if value.lower() in ("true", "yes", "on"):
                out.append(f"--{key}")
            elif value.lower() in ("false", "no", "off"):
                continue
            else:
                out += [f"--{key}", value]
    return out


def _apply_config(argv: list[str]) -> list[str]:
    """Inject config-file values right after the subcommand; explicit flags win."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            break
        if token.startswith("--config="):
            path = token.split("=", 1)[1]
            break
    if path is None or not argv:
        return argv
    return [argv[0]] + _config_to_argv(path) + argv[1:]


def argv_from_spec(spec: dict) -> list[str]:
    """Reconstruct the command line that reproduces an embedded artifact spec."""
    command = spec["command"]
    if command == "sweep":
        argv = ["sweep", spec["target"]]
        for axis in spec.get("axis", []):
            argv += ["--axis", axis]
        argv += list(spec.get("args", []))
        argv += ["--seed", str(spec["seed"]), "--format", str(spec["format"])]
        return argv
    argv = [command]
    for key, value in spec.items():
        if key == "command" or value is None:
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv += [flag, str(value)]
    return argv


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
        if argv and argv[0] == "sweep":
            return run_sweep(argv[1:])
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        artifact = RUNNERS[args.command](args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path, text in artifact.series:
        _write(path, text)
    if artifact.text is not None:
        _write(args.out, artifact.text)
    elif args.format == "csv":
        _write(args.out, _series_header(artifact.spec) + _row_csv(artifact.row))
    else:
        _write(args.out, _artifact_json(artifact.spec, artifact.result))
    return artifact.exit_code


if __name__ == "__main__":
    sys.exit(main())
