"""
Command-line front end.

    pushpull [--jobs N] [--out DIR] [--quiet] run <config.json>
    pushpull [--jobs N] [--out DIR] [--quiet] compare <sweep.json>
    pushpull [--jobs N] [--out DIR] [--quiet] bounds <config.json>
    pushpull [--jobs N] [--out DIR] [--quiet] graph-stats <config.json>

Exit codes: 0 converged (or informational success), 1 configuration error,
2 iteration budget exhausted, 3 divergence.
"""

import argparse
import copy
import csv
import io
import itertools
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .analysis import certify, fit_linear_rate, verify_propositions
from .errors import DivergenceError, PushPullError
from .graph import generate_sequence, graph_stats, min_degree
from .problems import CsvSchema, accuracy, load_csv, logistic_problem, ridge_problem
from .solver import SolverConfig, mode_config, run

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_MAX_ITERS = 2
EXIT_DIVERGED = 3

MAX_SWEEP = 10**4
DATA_ENV = "PUSHPULL_DATA_DIR"

PRESETS = {
    "sensor-fusion": {
        "problem": {"kind": "ridge", "p": 20, "s": 1, "lam": 0.01, "noise_sigma": 1.0, "seed": 0},
        "network": {"n": 20, "extra_edge_prob": 0.2, "seed": 0},
        "solver": {
            "alpha": 0.25,
            "beta": 0.7,
            "gamma": 0.05,
            "max_iters": 8000,
            "stop_tolerance": 1e-10,
            "stop_metric": "residual",
        },
    },
    "diabetes": {
        "problem": {
            "kind": "logistic",
            "dataset": "diabetes.csv",
            "label_column": "Outcome",
            "positive_label": "1",
            "normalize": True,
            "n_train": 700,
            "n_test": 68,
            "lam": 0.001,
        },
        "network": {"n": 7, "extra_edge_prob": 0.2, "seed": 0},
        "solver": {"alpha": 0.5, "beta": 0.7, "gamma": 0.1, "max_iters": 200000, "stop_tolerance": 1e-7},
    },
    "mnist-binary": {
        "problem": {
            "kind": "logistic",
            "dataset": "mnist_train.csv",
            "label_column": "label",
            "positive_label": "1",
            "keep_labels": ["1", "2"],
            "normalize": True,
            "n_train": 2000,
            "n_test": 1000,
            "lam": 0.001,
        },
        "network": {"n": 10, "extra_edge_prob": 0.2, "seed": 0},
        "solver": {"alpha": 0.01, "beta": 0.3, "gamma": 0.01, "max_iters": 200000, "stop_tolerance": 1e-3},
    },
}

DOWNLOAD_HINT = {
    "diabetes.csv": "Pima Indians Diabetes CSV with an 'Outcome' column",
    "mnist_train.csv": "MNIST CSV export with a 'label' column followed by 784 pixel columns",
}


class ConfigError(PushPullError, ValueError):
    def __init__(self, field_path, message, line=None):
        super().__init__(message)
        self.field_path = field_path
        self.message = message
        self.line = line

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        return f"{where}{self.field_path}: {self.message}" if self.field_path else f"{where}{self.message}"


def _number(value, where, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if integer and not (isinstance(value, int) or float(value).is_integer()):
        raise ConfigError(where, f"expected an integer, got {value!r}")
    return int(value) if integer else float(value)


def _require(cond, where, message):
    if not cond:
        raise ConfigError(where, message)


def _load_section(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(where, "expected an object")
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(f"{where}.{key}", "unknown key")
    spec = cls(**data)
    spec.validate(where)
    return spec


@dataclass
class ProblemSpec:
    kind: str = "ridge"
    p: int = 20
    s: int = 1
    lam: float = 0.01
    noise_sigma: float = 1.0
    seed: int = 0
    dataset: str = None
    label_column: str = None
    positive_label: str = "1"
    feature_columns: list = None
    keep_labels: list = None
    normalize: bool = False
    n_train: int = None
    n_test: int = 0

    def validate(self, where):
        _require(self.kind in ("ridge", "logistic"), f"{where}.kind", f"must be 'ridge' or 'logistic', got {self.kind!r}")
        _require(_number(self.lam, f"{where}.lam") > 0, f"{where}.lam", f"must be > 0, got {self.lam}")
        if self.kind == "ridge":
            for name in ("p", "s"):
                v = _number(getattr(self, name), f"{where}.{name}", integer=True)
                _require(v >= 1, f"{where}.{name}", f"must be >= 1, got {v}")
            _require(_number(self.noise_sigma, f"{where}.noise_sigma") >= 0, f"{where}.noise_sigma", "must be >= 0")
            _number(self.seed, f"{where}.seed", integer=True)
        else:
            _require(isinstance(self.dataset, str) and self.dataset, f"{where}.dataset", "logistic problems need a dataset path")
            _require(isinstance(self.label_column, str), f"{where}.label_column", "must be a column name")
            if self.n_train is not None:
                _require(_number(self.n_train, f"{where}.n_train", integer=True) >= 1, f"{where}.n_train", "must be >= 1")
            _require(_number(self.n_test, f"{where}.n_test", integer=True) >= 0, f"{where}.n_test", "must be >= 0")


@dataclass
class NetworkSpec:
    n: int = 20
    horizon: int = None
    extra_edge_prob: float = 0.2
    seed: int = 0

    def validate(self, where):
        _require(_number(self.n, f"{where}.n", integer=True) >= 1, f"{where}.n", f"must be >= 1, got {self.n}")
        if self.horizon is not None:
            _require(_number(self.horizon, f"{where}.horizon", integer=True) >= 1, f"{where}.horizon", "must be >= 1")
        p = _number(self.extra_edge_prob, f"{where}.extra_edge_prob")
        _require(0 <= p <= 1, f"{where}.extra_edge_prob", f"must lie in [0, 1], got {p}")
        _number(self.seed, f"{where}.seed", integer=True)


@dataclass
class SolverSpec:
    alpha: float = 0.1
    beta: float = 0.0
    gamma: float = 0.0
    max_iters: int = 1000
    stop_tolerance: float = None
    log_stride: int = 1
    stop_metric: str = "consensus"
    init: str = "zeros"

    def validate(self, where):
        _require(_number(self.alpha, f"{where}.alpha") > 0, f"{where}.alpha", f"must be > 0, got {self.alpha}")
        for name in ("beta", "gamma"):
            v = _number(getattr(self, name), f"{where}.{name}")
            _require(v >= 0, f"{where}.{name}", f"must be >= 0, got {v}")
        _require(_number(self.max_iters, f"{where}.max_iters", integer=True) >= 1, f"{where}.max_iters", "must be >= 1")
        _require(_number(self.log_stride, f"{where}.log_stride", integer=True) >= 1, f"{where}.log_stride", "must be >= 1")
        if self.stop_tolerance is not None:
            _require(_number(self.stop_tolerance, f"{where}.stop_tolerance") > 0, f"{where}.stop_tolerance", "must be > 0")
        _require(
            self.stop_metric in ("consensus", "residual"),
            f"{where}.stop_metric",
            f"must be 'consensus' or 'residual', got {self.stop_metric!r}",
        )
        _require(self.init == "zeros", f"{where}.init", f"only 'zeros' is supported, got {self.init!r}")

    def solver_config(self):
        return SolverConfig(
            alpha=float(self.alpha),
            beta=float(self.beta),
            gamma=float(self.gamma),
            max_iters=int(self.max_iters),
            stop_tolerance=None if self.stop_tolerance is None else float(self.stop_tolerance),
            log_stride=int(self.log_stride),
            stop_metric=self.stop_metric,
        )


@dataclass
class AnalysisSpec:
    certificate: bool = False
    verify_propositions: bool = False
    sigma_source: str = "measured"

    def validate(self, where):
        for name in ("certificate", "verify_propositions"):
            _require(isinstance(getattr(self, name), bool), f"{where}.{name}", "must be true or false")
        _require(
            self.sigma_source in ("measured", "analytic"),
            f"{where}.sigma_source",
            f"must be 'measured' or 'analytic', got {self.sigma_source!r}",
        )


@dataclass
class OutputSpec:
    dir: str = "out"

    def validate(self, where):
        _require(isinstance(self.dir, str) and self.dir, f"{where}.dir", "must be a non-empty path")


SECTIONS = {
    "problem": ProblemSpec,
    "network": NetworkSpec,
    "solver": SolverSpec,
    "analysis": AnalysisSpec,
    "output": OutputSpec,
}


def _merge(base, over):
    out = copy.deepcopy(base)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass
class RunConfig:
    preset: str = None
    problem: ProblemSpec = field(default_factory=ProblemSpec)
    network: NetworkSpec = field(default_factory=NetworkSpec)
    solver: SolverSpec = field(default_factory=SolverSpec)
    analysis: AnalysisSpec = field(default_factory=AnalysisSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    base_dir: str = field(default=".", compare=False, repr=False)

    @classmethod
    def from_dict(cls, data, where="config", base_dir="."):
        if not isinstance(data, dict):
            raise ConfigError(where, "expected an object")
        for key in data:
            if key != "preset" and key not in SECTIONS:
                raise ConfigError(f"{where}.{key}" if where != "config" else key, "unknown key")
        preset = data.get("preset")
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError(_join(where, "preset"), f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
            data = _merge(PRESETS[preset], data)
        sections = {
            name: _load_section(spec, data.get(name, {}), _join(where, name)) for name, spec in SECTIONS.items()
        }
        cfg = cls(preset=preset, base_dir=str(base_dir), **sections)
        if cfg.problem.kind == "ridge" and cfg.network.n < 1:
            raise ConfigError(_join(where, "network.n"), "must be >= 1")
        return cfg

    def to_dict(self):
        d = {"preset": self.preset}
        d.update({name: asdict(getattr(self, name)) for name in SECTIONS})
        return d

    @property
    def horizon(self):
        return self.network.horizon if self.network.horizon is not None else int(self.solver.max_iters)


def _join(where, key):
    return key if where == "config" else f"{where}.{key}"


@dataclass
class SweepConfig:
    base: RunConfig
    modes: list = field(default_factory=lambda: ["plain", "heavy-ball", "nesterov", "combined"])
    grid: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data, base_dir="."):
        if not isinstance(data, dict):
            raise ConfigError("", "expected an object")
        for key in data:
            if key not in ("base", "modes", "grid"):
                raise ConfigError(key, "unknown key")
        base = RunConfig.from_dict(data.get("base", {}), "base", base_dir)
        modes = data.get("modes", cls.__dataclass_fields__["modes"].default_factory())
        _require(isinstance(modes, list) and modes, "modes", "must be a non-empty list")
        for i, m in enumerate(modes):
            try:
                mode_config(base.solver.solver_config(), m)
            except PushPullError as err:
                raise ConfigError(f"modes[{i}]", str(err)) from None
        grid = data.get("grid", {})
        _require(isinstance(grid, dict), "grid", "expected an object")
        for key, values in grid.items():
            _require(key in ("alpha", "beta", "gamma"), f"grid.{key}", "unknown key")
            _require(isinstance(values, list) and values, f"grid.{key}", "must be a non-empty list")
            for v in values:
                probe = asdict(base.solver) | {key: v}
                _load_section(SolverSpec, probe, "grid")
        sweep = cls(base, list(modes), {k: list(v) for k, v in grid.items()})
        _require(sweep.size <= MAX_SWEEP, "grid", f"{sweep.size} runs exceed the limit of {MAX_SWEEP}")
        return sweep

    @property
    def size(self):
        return len(self.modes) * int(np.prod([len(v) for v in self.grid.values()], dtype=np.int64))

    def to_dict(self):
        return {"base": self.base.to_dict(), "modes": list(self.modes), "grid": copy.deepcopy(self.grid)}

    def points(self):
        keys = sorted(self.grid)
        for values in itertools.product(*(self.grid[k] for k in keys)):
            yield dict(zip(keys, values))


def _line_of(text, field_path):
    """Best-effort line of the last key in `field_path` within the raw JSON."""
    if not field_path:
        return None
    key = re.sub(r"\[\d+\]$", "", field_path.split(".")[-1])
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, match.start()) + 1 if match else None


def read_config(path, sweep=False):
    """Parse a JSON config file into a :class:`RunConfig` or :class:`SweepConfig`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError("", f"cannot read {path}: {err.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError("", f"invalid JSON: {err.msg}", line=err.lineno) from None
    try:
        if sweep:
            return SweepConfig.from_dict(data, path.parent)
        return RunConfig.from_dict(data, base_dir=path.parent)
    except ConfigError as err:
        err.line = err.line or _line_of(text, err.field_path)
        raise


def write_atomic(path, text):
    """Write `text` to `path` through a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj):
    return json.dumps(obj, indent=2, default=_to_builtin) + "\n"


def _to_builtin(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def resolve_data_path(name, base_dir):
    p = Path(name)
    if p.is_absolute():
        candidates = [p]
    else:
        candidates = [Path(base_dir) / p]
        root = os.environ.get(DATA_ENV)
        if root:
            candidates.append(Path(root) / p)
    for c in candidates:
        if c.is_file():
            return c
    hint = DOWNLOAD_HINT.get(p.name, "a CSV file with a header row")
    tried = ", ".join(str(c) for c in candidates)
    raise ConfigError("problem.dataset", f"dataset not found (tried {tried}); supply {hint} or set {DATA_ENV}")


def build_problem(cfg):
    """Returns ``(problem, test_set)``; the test set is ``None`` for ridge."""
    spec, n = cfg.problem, int(cfg.network.n)
    if spec.kind == "ridge":
        return ridge_problem(n, int(spec.p), int(spec.s), float(spec.lam), float(spec.noise_sigma), int(spec.seed)), None
    path = resolve_data_path(spec.dataset, cfg.base_dir)
    schema = CsvSchema(
        spec.label_column,
        str(spec.positive_label),
        spec.feature_columns,
        bool(spec.normalize),
        None if spec.keep_labels is None else [str(v) for v in spec.keep_labels],
    )
    data = load_csv(path, schema)
    n_train = len(data) if spec.n_train is None else int(spec.n_train)
    needed = n_train + int(spec.n_test)
    if len(data) < needed:
        raise ConfigError("problem.n_train", f"{path} has {len(data)} usable rows, {needed} requested")
    train, rest = data.split(n_train)
    test = rest.head(int(spec.n_test)) if spec.n_test else None
    return logistic_problem(train, n, float(spec.lam)), test


def build_graphs(cfg, horizon=None):
    net = cfg.network
    return generate_sequence(int(net.n), horizon or cfg.horizon, float(net.extra_edge_prob), int(net.seed))


def _log(quiet, msg):
    if not quiet:
        print(msg, file=sys.stderr)


def _announce(cfg, quiet):
    if cfg.preset is not None:
        _log(quiet, f"preset {cfg.preset}: " + json.dumps({k: v for k, v in cfg.to_dict().items() if k != "preset"}))


def _exit_for(status):
    return {"converged": EXIT_OK, "diverged": EXIT_DIVERGED}.get(status, EXIT_MAX_ITERS)


def _run_one(problem, graphs, solver_cfg, test_set, verify=False):
    """Worker body; returns a plain dict so it pickles cheaply."""
    try:
        rec = run(problem, graphs, solver_cfg, keep_states=verify)
    except DivergenceError as err:
        rec = err.record
        rec.status = "diverged"
    res = rec.rows["residual"]
    rate = np.nan
    if np.isfinite(res).all() and len(res) >= 10:
        rate = fit_linear_rate(res)[0]
    out = {
        "summary": rec.summary(),
        "csv": rec.to_csv(),
        "residual": res,
        "k": rec.rows["k"],
        "fitted_rate": float(rate),
        "accuracy": None,
    }
    if test_set is not None:
        out["accuracy"] = accuracy(rec.final.x.mean(axis=0), test_set)
    if verify:
        cfgd = rec.config
        report = verify_propositions(rec, problem, cfgd["alpha"], cfgd["beta"], cfgd["gamma"], graphs)
        out["propositions"] = {"violations": report.violations, "csv": report.to_csv()}
    return out


def _certificate_dict(problem, graphs, sc, sigma_source, horizon_graphs=None):
    try:
        cert = certify(problem, horizon_graphs or graphs, sc.alpha, sc.beta, sc.gamma, sigma_source)
    except PushPullError as err:
        return {"alpha": sc.alpha, "beta": sc.beta, "gamma": sc.gamma, "verdict": False, "reason": str(err)}
    return json.loads(cert.to_json())


def cmd_run(cfg, out_dir, quiet=False):
    _announce(cfg, quiet)
    problem, test_set = build_problem(cfg)
    graphs = build_graphs(cfg)
    sc = cfg.solver.solver_config()
    result = _run_one(problem, graphs, sc, test_set, cfg.analysis.verify_propositions)
    summary = result["summary"] | {"fitted_rate": result["fitted_rate"], "accuracy": result["accuracy"]}
    summary["run_config"] = cfg.to_dict()
    write_atomic(out_dir / "run.csv", result["csv"])
    if cfg.analysis.verify_propositions:
        summary["proposition_violations"] = result["propositions"]["violations"]
        write_atomic(out_dir / "propositions.csv", result["propositions"]["csv"])
    if cfg.analysis.certificate:
        cert = _certificate_dict(problem, graphs, sc, cfg.analysis.sigma_source)
        summary["certificate_verdict"] = cert["verdict"]
        write_atomic(out_dir / "certificate.json", _dumps(cert))
    write_atomic(out_dir / "summary.json", _dumps(summary))
    status = summary["status"]
    _log(quiet, f"{status} after {summary['iterations']} iterations, residual {summary['final_residual']:.3e}")
    return _exit_for(status)


def _label(mode, point, taken):
    label = mode if not point else mode + "[" + ",".join(f"{k}={v:g}" for k, v in point.items()) + "]"
    base, i = label, 2
    while label in taken:
        label, i = f"{base}#{i}", i + 1
    taken.add(label)
    return label


def _compare_csv(labels, results):
    ks = sorted({int(k) for r in results for k in r["k"]})
    cols = [dict(zip((int(k) for k in r["k"]), r["residual"])) for r in results]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k"] + labels)
    for k in ks:
        w.writerow([k] + [repr(float(c[k])) if k in c else "" for c in cols])
    return buf.getvalue()


def _table_csv(rows):
    buf = io.StringIO()
    keys = ["label", "mode", "alpha", "beta", "gamma", "status", "iterations", "wall_ms", "final_residual", "fitted_rate", "accuracy"]
    w = csv.DictWriter(buf, keys, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_compare(sweep, out_dir, jobs=1, quiet=False):
    cfg = sweep.base
    _announce(cfg, quiet)
    problem, test_set = build_problem(cfg)
    graphs = build_graphs(cfg)
    tasks, labels, taken = [], [], set()
    for point in sweep.points():
        sc = SolverSpec(**(asdict(cfg.solver) | point)).solver_config()
        for mode in sweep.modes:
            tasks.append((mode, point, mode_config(sc, mode)))
            labels.append(_label(mode, point, taken))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, problem, graphs, sc, test_set) for _, _, sc in tasks]
            results = [f.result() for f in futures]
    else:
        results = [_run_one(problem, graphs, sc, test_set) for _, _, sc in tasks]
    table = []
    for label, (mode, point, sc), res in zip(labels, tasks, results):
        sub = out_dir / "runs" / re.sub(r"[^A-Za-z0-9_.=#-]+", "_", label)
        write_atomic(sub / "run.csv", res["csv"])
        summary = res["summary"] | {"fitted_rate": res["fitted_rate"], "accuracy": res["accuracy"]}
        write_atomic(sub / "summary.json", _dumps(summary))
        table.append(
            {
                "label": label,
                "mode": sc.mode,
                "alpha": sc.alpha,
                "beta": sc.beta,
                "gamma": sc.gamma,
                "status": summary["status"],
                "iterations": summary["iterations"],
                "wall_ms": round(summary["wall_ms"], 3),
                "final_residual": summary["final_residual"],
                "fitted_rate": summary["fitted_rate"],
                "accuracy": summary["accuracy"],
            }
        )
        _log(quiet, f"{label}: {summary['status']} after {summary['iterations']} iterations")
    write_atomic(out_dir / "compare.csv", _compare_csv(labels, results))
    write_atomic(out_dir / "compare_table.csv", _table_csv(table))
    write_atomic(out_dir / "compare.json", _dumps({"sweep": sweep.to_dict(), "runs": table}))
    statuses = {row["status"] for row in table}
    if "diverged" in statuses:
        return EXIT_DIVERGED
    return EXIT_OK if statuses == {"converged"} else EXIT_MAX_ITERS


def cmd_bounds(cfg, out_dir, quiet=False):
    _announce(cfg, quiet)
    if cfg.network.n < 2:
        raise ConfigError("network.n", "certificates need n >= 2")
    problem, _ = build_problem(cfg)
    graphs = build_graphs(cfg)
    sc = cfg.solver.solver_config()
    cert = certify(problem, graphs, sc.alpha, sc.beta, sc.gamma, cfg.analysis.sigma_source)
    write_atomic(out_dir / "certificate.json", cert.to_json() + "\n")
    if cert.ranges.empty:
        _log(quiet, f"empty alpha range: kappa={cert.ranges.kappa:g} >= eta1/eta5={cert.kappa_max:.3e}")
    _log(quiet, f"rho_M={cert.rho_M:.6f} alpha_max={cert.alpha_max:.3e} verdict={cert.verdict}")
    return EXIT_OK


def cmd_graph_stats(cfg, out_dir, quiet=False):
    graphs = build_graphs(cfg)
    per = []
    for k, g in enumerate(graphs):
        if g.n < 2:
            per.append({"k": k, "diameter": 0, "max_edge_utility": 0, "min_degree": 0})
            continue
        st = graph_stats(g)
        per.append({"k": k, "diameter": st.diameter, "max_edge_utility": st.max_edge_utility, "min_degree": min_degree(g)})
    out = {
        "n": int(cfg.network.n),
        "horizon": len(per),
        "seed": int(cfg.network.seed),
        "max_diameter": max(r["diameter"] for r in per),
        "max_edge_utility": max(r["max_edge_utility"] for r in per),
        "min_degree": min(r["min_degree"] for r in per),
        "per_iteration": per,
    }
    write_atomic(out_dir / "stats.json", _dumps(out))
    _log(quiet, f"max D={out['max_diameter']} max K={out['max_edge_utility']} over {len(per)} graphs")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="concurrent sub-runs for compare")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (overrides output.dir)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="suppress progress messages")
    parser = argparse.ArgumentParser(
        prog="pushpull",
        parents=[common],
        description="\n\n".join(__doc__.strip().split("\n\n")[1:]),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("run", "single run from a JSON config"),
        ("compare", "mode comparison or parameter sweep from a JSON sweep config"),
        ("bounds", "convergence certificate without running the solver"),
        ("graph-stats", "diameter and edge-utility of every generated graph"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("config", help="path to a JSON config file")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    jobs = getattr(args, "jobs", 1)
    quiet = getattr(args, "quiet", False)
    try:
        if jobs < 1:
            raise ConfigError("--jobs", f"must be >= 1, got {jobs}")
        cfg = read_config(args.config, sweep=args.command == "compare")
        base = cfg.base if args.command == "compare" else cfg
        out_dir = Path(getattr(args, "out", base.output.dir))
        if args.command == "run":
            return cmd_run(cfg, out_dir, quiet)
        if args.command == "compare":
            return cmd_compare(cfg, out_dir, jobs, quiet)
        if args.command == "bounds":
            return cmd_bounds(cfg, out_dir, quiet)
        return cmd_graph_stats(cfg, out_dir, quiet)
    except ConfigError as err:
        if err.line is None:
            try:
                err.line = _line_of(Path(args.config).read_text(), err.field_path)
            except OSError:
                pass
        print(f"{args.config}: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except PushPullError as err:
        print(f"{args.config}: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
