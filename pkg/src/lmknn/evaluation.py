"""Cross-validated MAE and phase timings for landmark and baseline kNN."""

import configparser
import csv
import logging
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import _backend, kernels
from .ingest import DatasetSpec, ParsedRatings, kfold_split, load
from .landmark import Strategy, build_embedding, landmark_similarity_matrix, select_landmarks
from .measures import Measure
from .predict import PredictorConfig, predict_batch
from .ratings import build_matrix
from .similarity import similarity_matrix

_log = logging.getLogger(__name__)

PHASES = ("selection_s", "embedding_s", "similarity_s", "prediction_s")


class ConfigError(ValueError):
    pass


class SweepError(RuntimeError):
    def __init__(self, index, cause):
        super().__init__(f"config #{index} failed: {cause}")
        self.index = index


@dataclass(frozen=True)
class ExperimentConfig:
    orientation: str = "user"
    algorithm: str = "landmark"
    strategy: Strategy = Strategy.POPULARITY
    n: int = 20
    d1: Measure = Measure.COSINE
    d2: Measure = Measure.COSINE
    measure: Measure = Measure.COSINE
    k: int = 13
    k_folds: int = 10
    seed: int = 0
    positive_only: bool = True
    rating_step: float = 1.0
    dataset: DatasetSpec = None
    cut: int = None

    def __post_init__(self):
        alg = {"landmark-knn": "landmark", "baseline-knn": "baseline"}.get(self.algorithm, self.algorithm)
        if alg not in ("landmark", "baseline"):
            raise ConfigError(f"algorithm must be 'landmark' or 'baseline', got {self.algorithm!r}")
        object.__setattr__(self, "algorithm", alg)
        if self.orientation not in ("user", "item"):
            raise ConfigError(f"orientation must be 'user' or 'item', got {self.orientation!r}")
        for name, parse in (("d1", Measure.parse), ("d2", Measure.parse), ("measure", Measure.parse)):
            object.__setattr__(self, name, parse(getattr(self, name)))
        if alg == "landmark":
            object.__setattr__(self, "strategy", Strategy.parse(self.strategy))
            if self.n is None or self.n < 1:
                raise ConfigError(f"landmark runs need n >= 1, got {self.n}")
        else:
            object.__setattr__(self, "strategy", None)
            object.__setattr__(self, "n", None)
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.rating_step is not None and self.rating_step < 0:
            raise ConfigError(f"rating_step must be >= 0, got {self.rating_step}")
        if self.k_folds < 2:
            raise ConfigError(f"k_folds must be >= 2, got {self.k_folds}")

    @property
    def config_id(self):
        if self.algorithm == "baseline":
            return f"baseline-{self.orientation}-{self.measure.label}-k{self.k}"
        return (f"landmark-{self.orientation}-{self.strategy.value}-n{self.n}-"
                f"{self.d1.label}-{self.d2.label}-k{self.k}")

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class FoldReport:
    fold: int
    mae: float
    n_test: int
    sources: dict
    timings: dict
    global_mean_mae: float = float("nan")

    @property
    def total_s(self):
        return sum(self.timings[p] for p in PHASES)


@dataclass
class RunReport:
    config: ExperimentConfig
    folds: list
    warnings: list = field(default_factory=list)

    @property
    def mean_mae(self):
        return float(np.mean([f.mae for f in self.folds]))

    @property
    def mean_total_s(self):
        return float(np.mean([f.total_s for f in self.folds]))

    def mean_phase(self, phase):
        return float(np.mean([f.timings[phase] for f in self.folds]))


def mae(predictions, truths):
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(truths, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    if p.size == 0:
        raise ValueError("MAE of an empty prediction set")
    return float(np.abs(p - t).mean())


def _timing_threads(timing_mode):
    if timing_mode == "single":
        _backend.set_threads(1)
    elif timing_mode == "parallel":
        _backend.set_threads(_backend.max_threads())
    else:
        raise ConfigError(f"timing mode must be 'single' or 'parallel', got {timing_mode!r}")


def run_fold(config: ExperimentConfig, data: ParsedRatings, folds, fold) -> FoldReport:
    ratings = data.ratings
    train = ratings.subset(folds.train_index(fold))
    test = ratings.subset(folds.test_index(fold))
    matrix = build_matrix(train, data.num_users, data.num_items, data.scale)
    view = matrix.view(config.orientation)
    if config.orientation == "user":
        rows, cols = test.users, test.items
    else:
        rows, cols = test.items, test.users

    timings = dict.fromkeys(PHASES, 0.0)
    clock = time.perf_counter
    if config.algorithm == "landmark":
        t0 = clock()
        lm = select_landmarks(view, config.strategy, config.n, seed=config.seed, d1=config.d1, stream=1 + fold)
        t1 = clock()
        emb = build_embedding(view, lm, config.d1)
        t2 = clock()
        S = landmark_similarity_matrix(emb, config.d2)
        t3 = clock()
        timings["selection_s"] = t1 - t0
        timings["embedding_s"] = t2 - t1
        timings["similarity_s"] = t3 - t2
    else:
        t2 = clock()
        S = similarity_matrix(view, config.measure)
        t3 = clock()
        timings["similarity_s"] = t3 - t2
    pred = predict_batch(view, S, rows, cols, PredictorConfig(k=config.k, positive_only=config.positive_only,
                                                              rating_step=config.rating_step or None))
    timings["prediction_s"] = clock() - t3

    gm = np.full(len(test), matrix.global_mean)
    return FoldReport(
        fold=fold,
        mae=mae(pred.values, test.values),
        n_test=len(test),
        sources=pred.source_counts(),
        timings=timings,
        global_mean_mae=mae(gm, test.values),
    )


def run_experiment(config: ExperimentConfig, data: ParsedRatings = None, timing_mode="parallel") -> RunReport:
    """k-fold cross-validation of one configuration.

    ``data`` overrides loading ``config.dataset``; folds depend only on the
    number of ratings, ``k_folds`` and ``seed``, so runs sharing those are
    evaluated on identical folds.
    """
    if data is None:
        if config.dataset is None:
            raise ConfigError("no dataset given")
        data = load(config.dataset, cut=config.cut)
    if len(data.ratings) < config.k_folds:
        raise ConfigError(f"{len(data.ratings)} ratings cannot fill {config.k_folds} folds")
    if config.algorithm == "landmark":
        n_rows = data.num_users if config.orientation == "user" else data.num_items
        if config.n > n_rows:
            raise ConfigError(f"{config.n} landmarks requested but only {n_rows} {config.orientation}s exist")
    _timing_threads(timing_mode)
    kernels.warmup()
    folds = kfold_split(len(data.ratings), config.k_folds, config.seed)
    reports = []
    for f in range(config.k_folds):
        rep = run_fold(config, data, folds, f)
        _log.debug("%s fold %d: mae=%.5f total=%.3fs", config.config_id, f, rep.mae, rep.total_s)
        reports.append(rep)
    run = RunReport(config, reports)
    worse = [r.fold for r in reports if r.mae > r.global_mean_mae + 1e-12]
    if worse:
        msg = f"{config.config_id}: MAE above the global-mean predictor on folds {worse}"
        _log.warning(msg)
        run.warnings.append(msg)
    _log.info("%s: mean MAE %.5f, mean runtime %.3fs", config.config_id, run.mean_mae, run.mean_total_s)
    return run


def sweep(configs, data: ParsedRatings = None, timing_mode="parallel"):
    """Run each config in order; datasets are parsed once per distinct spec."""
    configs = list(configs)
    if not configs:
        raise ValueError("sweep needs at least one config")
    cache = {}
    out = []
    for idx, cfg in enumerate(configs):
        try:
            d = data
            if d is None:
                key = (cfg.dataset, cfg.cut)
                if key not in cache:
                    cache[key] = load(cfg.dataset, cut=cfg.cut)
                d = cache[key]
            out.append(run_experiment(cfg, d, timing_mode))
        except Exception as exc:
            raise SweepError(idx, exc) from exc
    return out


FOLD_HEADER = ["config_id", "fold", "mae", "n_test", *PHASES]
SUMMARY_HEADER = ["config_id", "orientation", "algorithm", "strategy", "n", "d1", "d2", "measure", "k",
                  "k_folds", "seed", "mean_mae", "mean_total_s", *(f"mean_{p}" for p in PHASES),
                  "knn", "user_mean_fallback", "global_mean_fallback"]


def write_fold_csv(reports, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(FOLD_HEADER)
        for run in reports:
            for f in run.folds:
                w.writerow([run.config.config_id, f.fold, f"{f.mae:.6f}", f.n_test,
                            *(f"{f.timings[p]:.6f}" for p in PHASES)])


def write_summary_csv(reports, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_HEADER)
        for run in reports:
            c = run.config
            src = {k: sum(f.sources[k] for f in run.folds) for k in run.folds[0].sources}
            w.writerow([
                c.config_id, c.orientation, c.algorithm, c.strategy.value if c.strategy else "",
                c.n or "", c.d1.label if c.algorithm == "landmark" else "",
                c.d2.label if c.algorithm == "landmark" else "",
                c.measure.label if c.algorithm == "baseline" else "", c.k, c.k_folds, c.seed,
                f"{run.mean_mae:.6f}", f"{run.mean_total_s:.6f}",
                *(f"{run.mean_phase(p):.6f}" for p in PHASES),
                src["knn"], src["user-mean-fallback"], src["global-mean-fallback"],
            ])


_INT_KEYS = {"n", "k", "k_folds", "seed", "cut"}


def read_config(path) -> ExperimentConfig:
    """Load an ``[experiment]`` section (with optional ``[dataset]``) from an INI file."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path}")
    if "experiment" not in parser:
        raise ConfigError(f"{path}: missing [experiment] section")
    kw = {}
    for key, raw in parser["experiment"].items():
        key = key.replace("-", "_")
        if key == "folds":
            key = "k_folds"
        if key not in ExperimentConfig.__dataclass_fields__:
            raise ConfigError(f"{path}: unknown key {key!r}")
        if key in _INT_KEYS:
            kw[key] = int(raw)
        elif key == "rating_step":
            kw[key] = float(raw)
        elif key == "positive_only":
            kw[key] = parser["experiment"].getboolean(key)
        else:
            kw[key] = raw.strip()
    if "dataset" in parser:
        ds = dict(parser["dataset"])
        base = Path(path).parent
        p = Path(ds.pop("path"))
        kw["dataset"] = DatasetSpec(
            path=str(p if p.is_absolute() else base / p),
            format=ds.pop("format", "ml-100k"),
            sep=ds.pop("sep", None),
            has_header=parser["dataset"].getboolean("has_header", False),
            columns=tuple(ds.pop("columns", ",".join(("user", "item", "rating", "timestamp"))).split(",")),
        )
    return ExperimentConfig(**kw)


def config_dict(config: ExperimentConfig):
    d = asdict(config)
    d["strategy"] = config.strategy.value if config.strategy else None
    for m in ("d1", "d2", "measure"):
        d[m] = getattr(config, m).label
    return d
