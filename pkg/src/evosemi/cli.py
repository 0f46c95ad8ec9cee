"""Scenario-driven verification runner.

A scenario file (TOML) declares a growth rate, a semiflow, an
evolution family, optional projection and function profiles, and an
ordered list of verification pipelines.  Each pipeline writes one
report document plus plot-ready tables into the output directory and
contributes a pass/fail line; the process exits 0 only when every
pipeline passes its tolerance.

Exit codes: 0 all pipelines passed, 1 at least one pipeline failed,
2 the scenario was rejected before running.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - py < 3.11
    import tomli as tomllib

from . import growth, report
from .dichotomy import (
    DichotomyCertificate,
    ProjectionField,
    certify_dichotomy,
    infer_projection_heuristic,
    solve_green,
    verify_integral_equation,
)
from .errors import ConfigError, EvosemiError, PipelineFailure
from .exprs import compile_expr, compile_matrix
from .family import (
    EvolutionFamily,
    GrowthBound,
    continuity_modulus,
    check_cocycle,
    fit_growth_bound,
    ordered_pairs,
    random_triples,
)
from .growth import GrowthRate
from .semiflow import RealSemiflow, check_axioms, classify, recover_mu
from .semigroup import (
    GridFunction,
    SemigroupContext,
    check_semigroup_law,
    check_similarity,
    check_strong_continuity,
)

PIPELINE_NAMES = (
    "classify-semiflow",
    "recover-mu",
    "check-family",
    "fit-growth-bound",
    "check-semigroup",
    "check-similarity",
    "certify-dichotomy",
    "solve-green",
    "verify-integral-equation",
)

DEFAULT_TOLERANCES = {
    "classify-semiflow": 1e-8,
    "recover-mu": 1e-6,
    "check-family": 1e-6,
    "fit-growth-bound": 1e-6,
    "check-semigroup": 1e-6,
    "check-similarity": 1e-9,
    "certify-dichotomy": 1e-6,
    "solve-green": 1e-8,
    "verify-integral-equation": 1e-6,
}


@dataclass
class _State:
    name: str
    seed: int
    rate: GrowthRate
    flow: RealSemiflow
    family: EvolutionFamily
    projection: ProjectionField | str | None
    functions: dict[str, GridFunction]
    pipeline_opts: dict[str, dict]
    tolerances: dict[str, float]
    validate_hypotheses: bool = True
    certificate: DichotomyCertificate | None = None
    context_cache: SemigroupContext | None = field(default=None, repr=False)

    def context(self) -> SemigroupContext:
        if self.context_cache is None:
            self.context_cache = SemigroupContext.create(
                self.family, self.flow,
                validate=self.validate_hypotheses)
        return self.context_cache


# -- scenario construction -------------------------------------------------


def _need(table: dict, key: str, path: str):
    if key not in table:
        raise ConfigError(f"{path}.{key} is required")
    return table[key]


def _build_rate(cfg: dict) -> GrowthRate:
    kind = _need(cfg, "kind", "[growth_rate]")
    if kind == "identity":
        return growth.identity()
    if kind == "polynomial_log":
        return growth.polynomial_log()
    if kind == "neg_exp":
        return growth.neg_exp()
    if kind == "odd_power":
        return growth.odd_power(int(cfg.get("power", 3)) // 2)
    if kind == "table":
        return growth.from_table(
            _need(cfg, "nodes", "[growth_rate]"),
            _need(cfg, "values", "[growth_rate]"),
        )
    if kind == "expression":
        fn = compile_expr(_need(cfg, "expr", "[growth_rate]"), ("s",))
        deriv = cfg.get("derivative")
        inv = cfg.get("inverse")
        return GrowthRate(
            fn=fn,
            ell=float(cfg.get("ell", "inf")),
            derivative=compile_expr(deriv, ("s",)) if deriv else None,
            inverse=compile_expr(inv, ("r",)) if inv else None,
            label=f"expr({cfg['expr']})",
        )
    raise ConfigError(f"[growth_rate].kind: unknown kind {kind!r}")


def _build_flow(cfg: dict, rate: GrowthRate) -> RealSemiflow:
    kind = _need(cfg, "kind", "[semiflow]")
    if kind == "generated":
        return RealSemiflow.generated(rate)
    if kind == "closed_form":
        fn = compile_expr(_need(cfg, "expr", "[semiflow]"), ("t", "s"))
        window = cfg.get("window", [-1e12, 1e12])
        return RealSemiflow.closed_form(
            fn, domain_window=(float(window[0]), float(window[1])),
            margin=float(cfg.get("margin", 0.0)),
            label=cfg.get("label", "closed_form"),
        )
    raise ConfigError(f"[semiflow].kind: unknown kind {kind!r}")


def _rate_env(rate: GrowthRate) -> dict[str, Callable]:
    env = {
        "mu": lambda x: float(rate(x)),
        "mu_inv": lambda r: float(rate.invert(r)),
    }
    if rate.derivative is not None:
        env["mu_prime"] = lambda x: float(rate.prime(x))
    return env


def _build_family(cfg: dict, env: dict) -> EvolutionFamily:
    kind = _need(cfg, "kind", "[family]")
    dim = int(_need(cfg, "dim", "[family]"))
    if kind == "closed_form":
        rows = _need(cfg, "matrix", "[family]")
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ConfigError(f"[family].matrix must be {dim}x{dim}")
        fn = compile_matrix(rows, ("t", "s"), env)
        return EvolutionFamily.closed_form(fn, dim, label="scenario")
    if kind == "ode":
        rows = _need(cfg, "coeff", "[family]")
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ConfigError(f"[family].coeff must be {dim}x{dim}")
        fn = compile_matrix(rows, ("t",), env)
        return EvolutionFamily.from_ode(
            fn, dim, tol=float(cfg.get("tol", 1e-9)), label="scenario")
    raise ConfigError(f"[family].kind: unknown kind {kind!r}")


def _build_projection(cfg: dict | None, env: dict, dim: int):
    if cfg is None:
        return None
    kind = _need(cfg, "kind", "[projection]")
    if kind == "infer":
        return "infer"
    rows = _need(cfg, "matrix", "[projection]")
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ConfigError(f"[projection].matrix must be {dim}x{dim}")
    if kind == "constant":
        mat = np.asarray(rows, dtype=float)
        return ProjectionField.constant(mat)
    if kind == "expression":
        fn = compile_matrix(rows, ("t",), env)
        return ProjectionField.from_callable(fn, dim)
    raise ConfigError(f"[projection].kind: unknown kind {kind!r}")


def _build_function(name: str, cfg: dict, rate: GrowthRate) -> GridFunction:
    path = f"[functions.{name}]"
    kind = _need(cfg, "kind", path)
    if kind == "hat":
        return GridFunction.hat(
            float(_need(cfg, "center", path)),
            float(_need(cfg, "half_width", path)),
            np.asarray(cfg.get("value", [1.0]), dtype=float),
        )
    if kind == "plateau":
        return GridFunction.plateau(
            float(_need(cfg, "left", path)),
            float(_need(cfg, "right", path)),
            float(_need(cfg, "ramp", path)),
            np.asarray(cfg.get("value", [1.0]), dtype=float),
        )
    if kind == "table":
        return GridFunction(
            np.asarray(_need(cfg, "nodes", path), dtype=float),
            np.asarray(_need(cfg, "values", path), dtype=float),
        )
    if kind in ("expression", "rate_uniform"):
        comps = _need(cfg, "components", path)
        fns = [compile_expr(c, ("s",)) for c in comps]
        if kind == "expression":
            if "nodes" in cfg:
                nodes = np.asarray(cfg["nodes"], dtype=float)
            else:
                lo, hi, n = _need(cfg, "linspace", path)
                nodes = np.linspace(float(lo), float(hi), int(n))
        else:
            lo, hi = _need(cfg, "r_range", path)
            n = int(_need(cfg, "num", path))
            rs = np.linspace(float(lo), float(hi), n)
            nodes = np.asarray([rate.invert(float(r)) for r in rs])
        values = np.column_stack([[f(float(s)) for s in nodes]
                                  for f in fns])
        return GridFunction(nodes, values)
    raise ConfigError(f"{path}.kind: unknown kind {kind!r}")


def _validate_references(pipelines: list[str], opts: dict[str, dict],
                         functions: dict[str, GridFunction],
                         projection, flow: RealSemiflow) -> None:
    """Static checks so runtime lookups cannot dangle."""
    known = set(functions)
    for name in pipelines:
        o = opts.get(name.replace("-", "_"), {})
        if name in ("check-semigroup", "check-similarity"):
            uname = o.get("u")
            if uname is None:
                raise ConfigError(
                    f"[pipeline.{name.replace('-', '_')}].u is required")
            if uname not in known:
                raise ConfigError(
                    f"[pipeline.{name.replace('-', '_')}].u: unknown "
                    f"function {uname!r}")
        if name == "check-similarity" and flow.kind != "generated":
            raise ConfigError(
                "check-similarity requires a generated semiflow")
        if name in ("certify-dichotomy", "solve-green") and projection is None:
            raise ConfigError(
                f"pipeline {name} requires a [projection] section")
        if name == "solve-green":
            fname = o.get("f")
            if fname is None:
                raise ConfigError("[pipeline.solve_green].f is required")
            if fname not in known:
                raise ConfigError(
                    f"[pipeline.solve_green].f: unknown function {fname!r}")
            if "certify-dichotomy" not in pipelines[:pipelines.index(name)]:
                raise ConfigError(
                    "solve-green needs certify-dichotomy earlier in the "
                    "pipeline list")
            known.add(o.get("store", "green_solution"))
        if name == "verify-integral-equation":
            for key in ("u", "f"):
                ref = o.get(key, "green_solution" if key == "u" else None)
                if ref is None:
                    raise ConfigError(
                        "[pipeline.verify_integral_equation].f is required")
                if ref not in known:
                    raise ConfigError(
                        f"[pipeline.verify_integral_equation].{key}: "
                        f"unknown function {ref!r}")


def load_scenario(path: Path, tol_overrides: dict[str, float],
                  seed_override: int | None) -> tuple[_State, list[str]]:
    with open(path, "rb") as fh:
        try:
            cfg = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}")

    meta = cfg.get("scenario", {})
    name = meta.get("name", path.stem)
    pipelines = _need(meta, "pipelines", "[scenario]")
    for p in pipelines:
        if p not in PIPELINE_NAMES:
            raise ConfigError(f"[scenario].pipelines: unknown pipeline {p!r}")
    seed = int(meta.get("seed", 0))
    if seed_override is not None:
        seed = seed_override

    rate = _build_rate(_need(cfg, "growth_rate", "top level"))
    flow = _build_flow(_need(cfg, "semiflow", "top level"), rate)
    env = _rate_env(rate)
    family = _build_family(_need(cfg, "family", "top level"), env)
    projection = _build_projection(cfg.get("projection"), env, family.dim)
    functions = {
        fname: _build_function(fname, fcfg, rate)
        for fname, fcfg in cfg.get("functions", {}).items()
    }

    tolerances = dict(DEFAULT_TOLERANCES)
    for key, val in cfg.get("tolerances", {}).items():
        if key not in PIPELINE_NAMES:
            raise ConfigError(f"[tolerances].{key}: unknown pipeline")
        tolerances[key] = float(val)
    tolerances.update(tol_overrides)
    if any(v <= 0 for v in tolerances.values()):
        raise ConfigError("tolerances must be positive")

    pipeline_opts = cfg.get("pipeline", {})
    _validate_references(pipelines, pipeline_opts, functions, projection,
                         flow)

    state = _State(
        name=name, seed=seed, rate=rate, flow=flow, family=family,
        projection=projection, functions=functions,
        pipeline_opts=pipeline_opts, tolerances=tolerances,
        validate_hypotheses=bool(meta.get("validate_hypotheses", True)),
    )
    return state, list(pipelines)


# -- pipelines --------------------------------------------------------------


def _opts(state: _State, name: str) -> dict:
    return state.pipeline_opts.get(name.replace("-", "_"), {})


def _run_classify(state: _State, tol: float):
    o = _opts(state, "classify-semiflow")
    window = tuple(float(x) for x in o.get("window", [-10.0, 10.0]))
    ax = check_axioms(state.flow, window=window,
                      n_samples=int(o.get("axiom_samples", 1000)),
                      t_max=float(o.get("t_max", 5.0)), seed=state.seed)
    grid = np.linspace(window[0], window[1], int(o.get("points", 9)))
    cls = classify(state.flow, grid)
    payload = {
        "classification": cls.label,
        "fixed_points": list(cls.fixed_points),
        "axiom_residuals": ax.residuals,
        "passed": ax.passed(tol),
    }
    rows = [(r.start, r.value, r.floor_hit) for r in cls.omegas]
    return ax.passed(tol), payload, {
        "omega": (("s", "omega", "floor_hit"), rows)}


def _run_recover(state: _State, tol: float):
    o = _opts(state, "recover-mu")
    window = tuple(float(x) for x in o.get("window", [-10.0, 10.0]))
    num = int(o.get("num", 401))
    mu_hat = recover_mu(state.flow, window=window,
                        tol=float(o.get("root_tol", 1e-12)), num=num)
    nodes = np.linspace(window[0], window[1], num)
    rows = [(float(s), float(mu_hat(s))) for s in nodes]
    payload: dict = {"window": list(window), "nodes": num}
    passed = True
    if state.flow.kind == "generated":
        # The recovery is anchored at mu(0) = 0.
        base = float(state.rate(0.0))
        err = max(abs(float(mu_hat(s)) - (float(state.rate(s)) - base))
                  for s in nodes)
        payload["sup_error_vs_reference"] = err
        passed = err <= tol
    payload["passed"] = passed
    return passed, payload, {"recovered_mu": (("s", "mu_hat"), rows)}


def _run_family(state: _State, tol: float):
    o = _opts(state, "check-family")
    window = tuple(float(x) for x in o.get("window", [-5.0, 5.0]))
    triples = random_triples(window, int(o.get("triples", 100)),
                             seed=state.seed)
    rep = check_cocycle(state.family, triples)
    modulus = continuity_modulus(state.family, window,
                                 n_steps=int(o.get("modulus_steps", 64)))
    passed = rep.passed(tol)
    payload = {
        "n_triples": rep.n_triples,
        "identity_residual": rep.identity_residual,
        "max_cocycle_residual": rep.max_residual,
        "worst_triple": list(rep.worst_triple),
        "continuity_modulus": modulus,
        "passed": passed,
    }
    return passed, payload, {}


def _run_fit_growth(state: _State, tol: float):
    o = _opts(state, "fit-growth-bound")
    window = tuple(float(x) for x in o.get("window", [-8.0, 8.0]))
    pairs = ordered_pairs(window, int(o.get("count", 1000)))
    res = fit_growth_bound(state.family, state.rate, pairs)
    expect = o.get("expect", "bound")
    tables = {"cloud": (("d", "log_norm"),
                        [(float(d), float(L)) for d, L in res.cloud])}
    if isinstance(res, GrowthBound):
        passed = expect == "bound" and res.holds()
        if "alpha_max" in o:
            passed = passed and res.alpha <= float(o["alpha_max"]) + tol
        if "K_max" in o:
            passed = passed and res.K <= float(o["K_max"]) + tol
        payload = {
            "result": "bound", "alpha": res.alpha, "K": res.K,
            "max_slack": res.max_slack, "n_pairs": res.n_pairs,
            "passed": passed,
        }
    else:
        passed = expect == "violation"
        payload = {
            "result": "violation",
            "alpha_by_radius": [list(x) for x in res.alpha_by_radius],
            "ratio": res.ratio,
            "worst_pair": list(res.worst_pair),
            "passed": passed,
        }
    return passed, payload, tables


def _run_semigroup(state: _State, tol: float):
    o = _opts(state, "check-semigroup")
    ctx = state.context()
    u = state.functions[o["u"]]
    law_times = o.get("law_times", [[0.3, 0.5]])
    law = max(check_semigroup_law(ctx, float(t), float(tau), u)
              for t, tau in law_times)
    t0 = float(o.get("t0", 1.0))
    halvings = int(o.get("halvings", 12))
    times = [t0 * 2.0 ** (-k) for k in range(halvings + 1)]
    cont = check_strong_continuity(ctx, u, times)
    cont_tol = float(o.get("continuity_tol", 1e-2))
    passed = law <= tol and cont.passed(cont_tol)
    payload = {
        "max_law_residual": law,
        "law_times": [list(map(float, p)) for p in law_times],
        "continuity_final_residual": cont.residuals[-1],
        "hypotheses_checked": ctx.hypotheses_checked,
        "passed": passed,
    }
    rows = list(zip(cont.times, cont.residuals))
    return passed, payload, {"continuity": (("t", "residual"), rows)}


def _run_similarity(state: _State, tol: float):
    o = _opts(state, "check-similarity")
    ctx = state.context()
    u = state.functions[o["u"]]
    times = [float(t) for t in o.get("times", [0.1, 1.0, 3.0])]
    residuals = [(t, check_similarity(ctx, t, u)) for t in times]
    worst = max(r for _, r in residuals)
    passed = worst <= tol
    payload = {"max_residual": worst, "times": times, "passed": passed}
    return passed, payload, {
        "similarity": (("t", "residual"), residuals)}


def _resolve_projection(state: _State, o: dict) -> ProjectionField:
    if state.projection == "infer":
        window = tuple(float(x) for x in o.get("window", [-8.0, 8.0]))
        inferred = infer_projection_heuristic(
            state.family, state.rate, window)
        return inferred.field
    return state.projection


def _run_certify(state: _State, tol: float):
    o = _opts(state, "certify-dichotomy")
    window = tuple(float(x) for x in o.get("window", [-8.0, 8.0]))
    pairs = ordered_pairs(window, int(o.get("count", 1000)))
    proj = _resolve_projection(state, o)
    res = certify_dichotomy(state.family, state.rate, proj, pairs,
                            compat_tol=float(o.get("compat_tol", 1e-8)))
    expect = o.get("expect", "certificate")
    tables = {"cloud": (("d", "log_norm", "branch"),
                        [(float(d), float(L), int(b))
                         for d, L, b in res.cloud])}
    if isinstance(res, DichotomyCertificate):
        passed = expect == "certificate" and res.holds()
        if "nu_min" in o:
            passed = passed and res.nu >= float(o["nu_min"]) - tol
        if "N_max" in o:
            passed = passed and res.N <= float(o["N_max"]) + tol
        if passed:
            state.certificate = res
        payload = {
            "result": "certificate", "N": res.N, "nu": res.nu,
            "slack_forward": res.slack_forward,
            "slack_backward": res.slack_backward,
            "passed": passed,
        }
    else:
        passed = expect == "violation"
        payload = {
            "result": "violation", "nu_fitted": res.nu_fitted,
            "worst_pair": list(res.worst_pair),
            "worst_branch": res.worst_branch,
            "passed": passed,
        }
    return passed, payload, tables


def _run_solve_green(state: _State, tol: float):
    o = _opts(state, "solve-green")
    if state.certificate is None:
        raise PipelineFailure(
            "solve-green has no certificate; certify-dichotomy did not "
            "produce one")
    f = state.functions[o["f"]]
    if "out" in o:
        lo, hi, n = o["out"]
        nodes = np.linspace(float(lo), float(hi), int(n))
    else:
        nodes = f.nodes
    u = solve_green(state.family, state.rate, state.certificate, f,
                    out_nodes=nodes, quad_tol=tol)
    store = o.get("store", "green_solution")
    state.functions[store] = u
    payload = {
        "stored_as": store, "nodes": int(nodes.size),
        "sup_norm": u.sup_norm, "passed": True,
    }
    rows = [tuple(row) for row in u.to_table()]
    header = ("t",) + tuple(f"u{j + 1}" for j in range(u.dim))
    return True, payload, {"solution": (header, rows)}


def _run_verify_integral(state: _State, tol: float):
    o = _opts(state, "verify-integral-equation")
    u = state.functions[o.get("u", "green_solution")]
    f = state.functions[o["f"]]
    count = int(o.get("pairs", 50))
    nodes = u.nodes
    if "window" in o:
        lo, hi = (float(x) for x in o["window"])
        nodes = nodes[(nodes >= lo) & (nodes <= hi)]
    if nodes.size < 2:
        raise PipelineFailure("not enough nodes in the verification window")
    rng = np.random.default_rng(state.seed)
    pairs = []
    for _ in range(count):
        i, j = rng.choice(nodes.size, size=2, replace=False)
        lo_n, hi_n = sorted((float(nodes[i]), float(nodes[j])))
        pairs.append((hi_n, lo_n))
    rep = verify_integral_equation(
        state.family, state.rate, u, f, np.asarray(pairs),
        quad_tol=float(o.get("quad_tol", 1e-8)))
    passed = rep.passed(tol)
    payload = {
        "n_pairs": rep.n_pairs, "max_residual": rep.max_residual,
        "worst_pair": list(rep.worst_pair), "passed": passed,
    }
    rows = [(t, s, r) for (t, s), r in zip(pairs, rep.residuals)]
    return passed, payload, {
        "residuals": (("t", "s", "residual"), rows)}


_RUNNERS = {
    "classify-semiflow": _run_classify,
    "recover-mu": _run_recover,
    "check-family": _run_family,
    "fit-growth-bound": _run_fit_growth,
    "check-semigroup": _run_semigroup,
    "check-similarity": _run_similarity,
    "certify-dichotomy": _run_certify,
    "solve-green": _run_solve_green,
    "verify-integral-equation": _run_verify_integral,
}


def run_scenario(state: _State, pipelines: list[str], out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    for name in pipelines:
        tol = state.tolerances[name]
        try:
            passed, payload, tables = _RUNNERS[name](state, tol)
        except EvosemiError as exc:
            passed = False
            payload = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
            tables = {}
        payload["tolerance"] = tol
        report.write_report(
            out_dir / f"{state.name}.{name}.report",
            f"{state.name} :: {name}", payload)
        for tname, (header, rows) in tables.items():
            report.write_table(
                out_dir / f"{state.name}.{name}.{tname}.csv", header, rows)
        status = "PASS" if passed else "FAIL"
        detail = payload.get("error") or _summary_line(payload)
        print(f"[{status}] {name}: {detail}")
        if not passed:
            failures.append(name)
    if failures:
        print(f"failed pipelines: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


def _summary_line(payload: dict) -> str:
    for key in ("max_residual", "max_cocycle_residual", "max_law_residual",
                "sup_error_vs_reference", "max_slack"):
        if key in payload:
            return f"{key}={payload[key]:.3e}"
    if payload.get("result") == "certificate":
        return f"N={payload['N']:.6f} nu={payload['nu']:.6f}"
    if payload.get("result") == "violation":
        return "violation detected"
    if "classification" in payload:
        return payload["classification"]
    return "ok"


def _resolve_scenario_path(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    from importlib.resources import files
    fname = name.replace("-", "_").replace(".", "_") + ".toml"
    bundled = files("evosemi").joinpath("scenarios", fname)
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigError(f"scenario {name!r} is neither a file nor bundled")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="evosemi",
        description="Run verification pipelines from a scenario file.")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a scenario")
    runp.add_argument("scenario",
                      help="path to a scenario file, or a bundled name")
    runp.add_argument("--out", default=".", help="output directory")
    runp.add_argument("--tol", action="append", default=[],
                      metavar="NAME=VALUE",
                      help="override a pipeline tolerance")
    runp.add_argument("--seed", type=int, default=None,
                      help="override the scenario seed")
    args = parser.parse_args(argv)

    try:
        overrides = {}
        for item in args.tol:
            if "=" not in item:
                raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
            key, _, val = item.partition("=")
            if key not in PIPELINE_NAMES:
                raise ConfigError(f"--tol: unknown pipeline {key!r}")
            try:
                overrides[key] = float(val)
            except ValueError:
                raise ConfigError(f"--tol {key}: {val!r} is not a number")
        path = _resolve_scenario_path(args.scenario)
        state, pipelines = load_scenario(path, overrides, args.seed)
        return run_scenario(state, pipelines, Path(args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
