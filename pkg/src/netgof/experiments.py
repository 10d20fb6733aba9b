"""Reproduction harness: seeded Monte Carlo experiments over model grids.

Experiments are described by a small key/value config (see
``parse_config_file``), expanded over parameter grids, and executed with
one independent random stream per replication, derived from (base seed,
experiment label, replication index). Aggregation is a fold over results
sorted by replication index, so output files are byte-identical
regardless of worker count or completion order.
"""

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import kstest

from .datasets import DATASETS, DatasetMissingError, load_dataset
from .estimators import FitError, make_estimator
from .gof import gof_test, normalize_true, select_k, trace_statistic
from .models import L_CHOICES, build_probability_matrix, preset, sample_adjacency
from .numerics import derive_stream, normal_quantile

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "parse_config_file",
    "parse_candidate",
    "ResultRow",
    "ResultTable",
    "emit",
    "run_null_qq",
    "run_size",
    "run_power",
    "run_kest",
    "run_real",
]

EXPERIMENT_KINDS = ("null", "size", "power", "kest", "real")

_DEFAULT_REPS = {"null": 1000, "size": 200, "power": 200, "kest": 100, "real": 1}
_DEFAULT_ALPHA = {"kest": 0.001}


class ConfigError(ValueError):
    """An experiment configuration is invalid or incomplete."""


def parse_candidate(text):
    """Parse a candidate spec like "er", "sbm:3", or "lsm:2"."""
    parts = text.strip().split(":")
    family = parts[0]
    if family in ("er", "beta"):
        if len(parts) > 1:
            raise ConfigError(f"candidate {text!r} takes no hyperparameter")
        return {"family": family}
    if family in ("sbm", "dcsbm", "dcmm"):
        k = int(parts[1]) if len(parts) > 1 else 1
        return {"family": family, "n_communities": k}
    if family == "lsm":
        d = int(parts[1]) if len(parts) > 1 else 1
        return {"family": family, "n_dims": d}
    raise ConfigError(f"unknown candidate family in {text!r}")


def format_candidate(cand):
    hyper = cand.get("n_communities") or cand.get("n_dims")
    return cand["family"] if hyper is None else f"{cand['family']}:{hyper}"


@dataclass
class ExperimentConfig:
    """One experiment: a truth grid, candidates, and replication budget."""

    kind: str
    truth: str = None
    truth_params: dict = field(default_factory=dict)
    ns: tuple = ()
    candidates: tuple = ()
    reps: int = None
    alpha: float = None
    base_seed: int = 0
    k_max: int = 10
    k_true: int = 3
    oracle: bool = False
    datasets: tuple = ()
    data_dir: str = None
    jobs: int = 1

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(
                f"unknown experiment {self.kind!r}; choose from {EXPERIMENT_KINDS}"
            )
        if self.reps is None:
            self.reps = _DEFAULT_REPS[self.kind]
        if self.alpha is None:
            self.alpha = _DEFAULT_ALPHA.get(self.kind, 0.05)
        if self.reps < 1:
            raise ConfigError("reps must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.kind in ("null", "size", "power", "kest"):
            if self.truth is None:
                raise ConfigError(f"{self.kind} experiment needs a truth preset")
            if not self.ns:
                raise ConfigError("n grid must be non-empty")
        if self.kind in ("size", "power") and not self.candidates:
            raise ConfigError(f"{self.kind} experiment needs candidate models")
        if self.kind == "null" and not self.oracle and not self.candidates:
            raise ConfigError(
                "null experiment needs a candidate (or oracle = true)"
            )
        if self.kind == "real" and not self.datasets:
            raise ConfigError("real experiment needs a dataset list")

    def cells(self):
        """Cross the n grid with any list-valued truth parameters."""
        grid_keys = sorted(
            k for k, v in self.truth_params.items() if isinstance(v, list)
        )
        grids = [self.truth_params[k] for k in grid_keys]
        for n in self.ns:
            for combo in itertools.product(*grids) if grids else [()]:
                params = dict(self.truth_params)
                label_parts = [f"n={n}"]
                for key, value in zip(grid_keys, combo):
                    params[key] = value
                    label_parts.append(f"{key}={value}")
                for key in sorted(params):
                    if key not in grid_keys:
                        label_parts.append(f"{key}={params[key]}")
                # Named attractiveness ranges resolve per n.
                if isinstance(params.get("L"), str):
                    try:
                        params["L"] = L_CHOICES[params["L"]](n)
                    except KeyError:
                        raise ConfigError(
                            f"unknown L choice {params['L']!r}; "
                            f"choose from {sorted(L_CHOICES)}"
                        ) from None
                yield n, params, ",".join(label_parts)


def _parse_scalar(token):
    token = token.strip()
    for cast in (int, float):
        try:
            return cast(token)
        except ValueError:
            continue
    if token.lower() in ("true", "false"):
        return token.lower() == "true"
    return token


def parse_config_file(path_or_stream):
    """Read a key = value experiment config.

    One assignment per line, '#' for comments, comma-separated values for
    grids and lists. Keys not recognized by the harness are passed to the
    truth preset as parameters.
    """
    if isinstance(path_or_stream, (str, bytes)):
        stream = open(path_or_stream, "r", encoding="utf-8")
        close = True
    else:
        stream, close = path_or_stream, False
    raw = {}
    try:
        for lineno, line in enumerate(stream, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"line {lineno}: expected key = value")
            key, value = (part.strip() for part in text.split("=", 1))
            tokens = [t for t in value.split(",") if t.strip()]
            parsed = [_parse_scalar(t) for t in tokens]
            raw[key] = parsed[0] if len(parsed) == 1 else parsed
    finally:
        if close:
            stream.close()
    return config_from_mapping(raw)


def config_from_mapping(raw):
    raw = dict(raw)
    kind = raw.pop("experiment", None)
    if kind is None:
        raise ConfigError("config must set 'experiment'")
    listify = lambda v: v if isinstance(v, list) else [v]
    known = {
        "truth": raw.pop("truth", None),
        "ns": tuple(listify(raw.pop("n", []))),
        "reps": raw.pop("reps", None),
        "alpha": raw.pop("alpha", None),
        "base_seed": raw.pop("seed", 0),
        "k_max": raw.pop("kmax", 10),
        "k_true": raw.pop("k_true", 3),
        "oracle": raw.pop("oracle", False),
        "data_dir": raw.pop("data_dir", None),
        "jobs": raw.pop("jobs", 1),
    }
    cands = raw.pop("candidates", raw.pop("candidate", []))
    known["candidates"] = tuple(parse_candidate(str(c)) for c in listify(cands))
    datasets = raw.pop("datasets", raw.pop("dataset", []))
    known["datasets"] = tuple(str(d) for d in listify(datasets))
    return ExperimentConfig(kind=kind, truth_params=raw, **known)


# ---------------------------------------------------------------------------
# Result tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRow:
    setting: str
    estimate: float
    stderr: float
    reps: int
    failures: int = 0


@dataclass(frozen=True)
class ResultTable:
    rows: tuple

    def to_csv(self, stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["setting", "estimate", "stderr", "reps", "failures"])
        for row in self.rows:
            writer.writerow(
                [row.setting, f"{row.estimate:.6f}", f"{row.stderr:.6f}",
                 row.reps, row.failures]
            )

    def to_json(self):
        return json.dumps(
            {"rows": [asdict(row) for row in self.rows]},
            indent=2, sort_keys=True,
        ) + "\n"

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        return cls(rows=tuple(ResultRow(**row) for row in payload["rows"]))


def emit(table, fmt, path):
    """Write a ResultTable as csv or json with deterministic formatting."""
    if fmt == "csv":
        buffer = io.StringIO()
        table.to_csv(buffer)
        payload = buffer.getvalue()
    elif fmt == "json":
        payload = table.to_json()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(payload)


def _binomial_stderr(p, m):
    return float(np.sqrt(p * (1.0 - p) / m)) if m > 0 else 0.0


# ---------------------------------------------------------------------------
# Replication workers (module level so process pools can pickle them)
# ---------------------------------------------------------------------------


def _sample_cell(truth, params, n, stream):
    model = preset(truth, n, random_state=stream.child("truth"), **params)
    P = build_probability_matrix(model)
    A = sample_adjacency(P, stream.child("sample"))
    return model, P, A


def _rejection_rep(args):
    truth, params, n, cand, alpha, base_seed, label, rep = args
    stream = derive_stream(base_seed, label, rep)
    _, _, A = _sample_cell(truth, params, n, stream)
    est = make_estimator(**cand)
    try:
        result = gof_test(A, est, alpha=alpha, random_state=stream.child("fit"),
                          keep_residuals=False)
    except FitError:
        return None
    return bool(result.reject)


def _null_rep(args):
    truth, params, n, cand, oracle, base_seed, label, rep = args
    stream = derive_stream(base_seed, label, rep)
    _, P, A = _sample_cell(truth, params, n, stream)
    if oracle:
        return float(trace_statistic(normalize_true(A, P)))
    est = make_estimator(**cand)
    try:
        result = gof_test(A, est, random_state=stream.child("fit"),
                          keep_residuals=False)
    except FitError:
        return None
    return float(result.statistic)


def _kest_rep(args):
    truth, params, n, k_max, alpha, base_seed, label, rep = args
    stream = derive_stream(base_seed, label, rep)
    _, _, A = _sample_cell(truth, params, n, stream)
    result = select_k(A, k_max=k_max, alpha=alpha,
                      random_state=stream.child("fit"))
    return result.k_hat


def _map_tasks(worker, tasks, jobs):
    if jobs <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------


def _rejection_table(config, exclude_matching_truth=False):
    rows = []
    for n, params, cell in config.cells():
        for cand in config.candidates:
            label = f"{config.kind}|{cell}|{format_candidate(cand)}"
            tasks = [
                (config.truth, params, n, cand, config.alpha,
                 config.base_seed, label, rep)
                for rep in range(config.reps)
            ]
            outcomes = _map_tasks(_rejection_rep, tasks, config.jobs)
            tested = [o for o in outcomes if o is not None]
            failures = len(outcomes) - len(tested)
            rate = float(np.mean(tested)) if tested else float("nan")
            rows.append(
                ResultRow(
                    setting=f"{cell},candidate={format_candidate(cand)}",
                    estimate=rate,
                    stderr=_binomial_stderr(rate, len(tested)) if tested else 0.0,
                    reps=len(tested),
                    failures=failures,
                )
            )
    return ResultTable(rows=tuple(rows))


def run_size(config):
    """Rejection frequency when the candidate family matches the truth."""
    return _rejection_table(config)


def run_power(config):
    """Rejection frequency under mismatched (truth, candidate) pairs."""
    return _rejection_table(config)


def run_null_qq(config):
    """Sorted statistics vs. normal quantiles, plus the KS distance.

    Uses the oracle normalization when ``config.oracle`` is set and the
    first configured candidate otherwise. Returns a dict with the sorted
    sample, matching theoretical quantiles, KS distance, and the count of
    failed replications.
    """
    n, params, cell = next(iter(config.cells()))
    cand = None if config.oracle else config.candidates[0]
    label = f"null|{cell}|{'oracle' if config.oracle else format_candidate(cand)}"
    tasks = [
        (config.truth, params, n, cand, config.oracle,
         config.base_seed, label, rep)
        for rep in range(config.reps)
    ]
    outcomes = _map_tasks(_null_rep, tasks, config.jobs)
    stats = np.sort(np.array([o for o in outcomes if o is not None]))
    failures = len(outcomes) - stats.size
    if stats.size == 0:
        raise RuntimeError("all replications failed; nothing to report")
    positions = (np.arange(1, stats.size + 1) - 0.5) / stats.size
    return {
        "setting": label,
        "statistics": stats.tolist(),
        "normal_quantiles": normal_quantile(positions).tolist(),
        "ks_distance": float(kstest(stats, "norm").statistic),
        "reps": int(stats.size),
        "failures": failures,
    }


def run_kest(config):
    """Sequential community-count estimation over the truth grid.

    Emits three rows per grid cell: the frequency of recovering the
    planted count, the mean estimate, and its variance; replications
    where every candidate was rejected count as failures.
    """
    rows = []
    for n, params, cell in config.cells():
        label = f"kest|{cell}|kmax={config.k_max}"
        tasks = [
            (config.truth, params, n, config.k_max, config.alpha,
             config.base_seed, label, rep)
            for rep in range(config.reps)
        ]
        outcomes = _map_tasks(_kest_rep, tasks, config.jobs)
        found = np.array([k for k in outcomes if k is not None], dtype=float)
        failures = len(outcomes) - found.size
        p_correct = float(np.mean(found == config.k_true)) if found.size else 0.0
        mean_k = float(found.mean()) if found.size else float("nan")
        var_k = float(found.var()) if found.size else float("nan")
        common = dict(reps=int(found.size), failures=failures)
        rows.append(ResultRow(setting=f"{cell},stat=p_correct",
                              estimate=p_correct,
                              stderr=_binomial_stderr(p_correct, found.size),
                              **common))
        rows.append(ResultRow(setting=f"{cell},stat=mean_khat",
                              estimate=mean_k,
                              stderr=float(found.std() / np.sqrt(found.size))
                              if found.size else 0.0,
                              **common))
        rows.append(ResultRow(setting=f"{cell},stat=var_khat",
                              estimate=var_k, stderr=0.0, **common))
    return ResultTable(rows=tuple(rows))


def run_real(datasets, candidates, alpha=0.05, data_dir=None, base_seed=0,
             k_overrides=None):
    """Goodness-of-fit p-values for named datasets under each candidate.

    Block-model candidates take their community count from the dataset
    registry unless ``k_overrides`` maps the dataset name to a count.
    Missing dataset files are skipped with a notice; estimation failures
    are reported as untestable rather than rejected.
    """
    rows = []
    skipped = []
    for name in datasets:
        try:
            A = load_dataset(name, data_dir=data_dir)
        except DatasetMissingError as err:
            skipped.append({"dataset": name, "reason": str(err)})
            continue
        k = (k_overrides or {}).get(name) or DATASETS[name].n_communities or 1
        for cand_text in candidates:
            cand = dict(parse_candidate(cand_text))
            if cand["family"] in ("sbm", "dcsbm", "dcmm") and len(
                cand_text.split(":")
            ) == 1:
                cand["n_communities"] = k
            est = make_estimator(**cand)
            stream = derive_stream(base_seed, f"real|{name}", 0)
            entry = {"dataset": name, "candidate": format_candidate(cand)}
            try:
                result = gof_test(A, est, alpha=alpha, random_state=stream,
                                  keep_residuals=False)
                entry.update(
                    statistic=result.statistic,
                    p_value=result.p_value,
                    decision=result.decision,
                )
            except FitError as err:
                entry.update(decision="untestable", error=str(err))
            rows.append(entry)
    return {"alpha": alpha, "rows": rows, "skipped": skipped}
