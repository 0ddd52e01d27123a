"""One-vs-rest evaluation protocol driven by a flat ``key = value`` config file.

For every class of a multiclass dataset: form the class-specific problem,
draw seeded stratified train/test splits, select ``(d, K)`` by
cross-validation on the training part (separately for mAP and f1), refit on
the full training part and score the held-out part.
"""
import io
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import SplitSpec, load_csv, make_class_specific, split
from .exceptions import ConfigError
from .inference import classify, rank
from .metrics import average_precision, f1_score
from .model import SOLVERS, fit_model
from .model_selection import DEFAULT_K_GRID, MODES, CvGrid, cross_validate, kernel_features


def _parse_int_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part == "all":
            out.append("all")
        else:
            out.append(int(part))
    if not out:
        raise ValueError("empty list")
    return tuple(out)


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_ridge(text):
    return "auto" if text == "auto" else float(text)


def _parse_sigma(text):
    if text == "auto":
        return "auto"
    v = float(text)
    if not v > 0:
        raise ValueError("must be positive")
    return v


def _parse_kernel(text):
    if text.lower() in ("none", ""):
        return None
    if text != "rbf":
        raise ValueError("must be 'none' or 'rbf'")
    return text


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text
    return parse


def _positive_int(minimum):
    def parse(text):
        v = int(text)
        if v < minimum:
            raise ValueError(f"must be an integer >= {minimum}")
        return v
    return parse


def _fraction(text):
    v = float(text)
    if not 0 < v < 1:
        raise ValueError("must lie strictly between 0 and 1")
    return v


def _optional_int(text):
    return None if text.lower() == "none" else _positive_int(1)(text)


def _kernel_tau(text):
    v = float(text)
    if not 0 <= v < 1:
        raise ValueError("must lie in [0, 1)")
    return v


def _classes(text):
    return "all" if text == "all" else tuple(c.strip() for c in text.split(",") if c.strip())


# key -> (parser, default); "data" has no default
_FIELDS = {
    "data": (str, None),
    "label_col": (str, "-1"),
    "mode": (_choice(MODES), "pcsdaK"),
    "solver": (_choice(SOLVERS), "direct"),
    "kernel": (_parse_kernel, None),
    "sigma": (_parse_sigma, "auto"),
    "ridge": (_parse_ridge, "auto"),
    "d_values": (_parse_int_list, tuple(range(1, 26))),
    "k_values": (_parse_int_list, DEFAULT_K_GRID),
    "folds": (_positive_int(2), 5),
    "seed": (_positive_int(0), 0),
    "repeats": (_positive_int(1), 5),
    "train_fraction": (_fraction, 0.7),
    "classes": (_classes, "all"),
    "equiprobable": (_parse_bool, False),
    "max_iter": (_positive_int(1), 300),
    "kernel_max_dim": (_optional_int, None),
    "kernel_tau": (_kernel_tau, 1e-10),
}


@dataclass(frozen=True)
class ExperimentConfig:
    data: str
    label_col: str = "-1"
    mode: str = "pcsdaK"
    solver: str = "direct"
    kernel: object = None
    sigma: object = "auto"
    ridge: object = "auto"
    d_values: tuple = tuple(range(1, 26))
    k_values: tuple = DEFAULT_K_GRID
    folds: int = 5
    seed: int = 0
    repeats: int = 5
    train_fraction: float = 0.7
    classes: object = "all"
    equiprobable: bool = False
    max_iter: int = 300
    kernel_max_dim: object = None
    kernel_tau: float = 1e-10

    @property
    def grid(self):
        return CvGrid.for_mode(self.mode, self.d_values, self.k_values, self.folds, self.seed)


def parse_config(text, base_dir="."):
    """Parse ``key = value`` lines (``#`` starts a comment).

    Relative ``data`` paths are resolved against ``base_dir``. Every problem
    raises :class:`ConfigError` naming the offending line or field.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown field {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate field {key!r}")
        parser = _FIELDS[key][0]
        try:
            values[key] = parser(val)
        except ValueError as exc:
            raise ConfigError(f"field {key!r}: {exc}") from None
    if "data" not in values:
        raise ConfigError("field 'data' is required")
    path = Path(values["data"])
    if not path.is_absolute():
        values["data"] = str(Path(base_dir) / path)
    return ExperimentConfig(**values)


def load_config(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), path.parent)


@dataclass
class ClassResult:
    target: str
    ap: list
    f1: list
    chosen_map: list
    chosen_f1: list

    @property
    def mean_ap(self):
        return float(np.mean(self.ap))

    @property
    def mean_f1(self):
        return float(np.mean(self.f1))


@dataclass
class EvalReport:
    """Per-class results plus dataset-level aggregates.

    ``timings`` (seconds per phase) is kept out of :meth:`render` so that the
    rendered report is reproducible byte for byte.
    """

    config: ExperimentConfig
    classes: list
    timings: dict = field(default_factory=dict)

    def summary(self):
        aps = np.array([c.mean_ap for c in self.classes])
        f1s = np.array([c.mean_f1 for c in self.classes])
        return {
            "map_mean": float(aps.mean()),
            "map_std_over_classes": float(aps.std()),
            "map_std_within_class": float(np.mean([np.std(c.ap) for c in self.classes])),
            "f1_mean": float(f1s.mean()),
            "f1_std_over_classes": float(f1s.std()),
            "f1_std_within_class": float(np.mean([np.std(c.f1) for c in self.classes])),
        }

    def table_csv(self):
        buf = io.StringIO()
        buf.write("class,map_mean,map_std,f1_mean,f1_std,chosen_map,chosen_f1\n")
        for c in self.classes:
            pick = lambda cells: " ".join(f"d={d}/K={k}" for d, k in cells)
            buf.write(f"{c.target},{c.mean_ap:.6f},{np.std(c.ap):.6f},{c.mean_f1:.6f},"
                      f"{np.std(c.f1):.6f},{pick(c.chosen_map)},{pick(c.chosen_f1)}\n")
        return buf.getvalue()

    def render(self):
        cfg = self.config
        lines = [
            "PCSDA one-vs-rest evaluation",
            f"data: {Path(cfg.data).name}",
            f"mode: {cfg.mode}  solver: {cfg.solver}  kernel: {cfg.kernel or 'none'}  sigma: {cfg.sigma}"
            + (f"  tau: {cfg.kernel_tau:g}  max dim: {cfg.kernel_max_dim}" if cfg.kernel else ""),
            f"repeats: {cfg.repeats}  train_fraction: {cfg.train_fraction}  folds: {cfg.folds}  seed: {cfg.seed}",
            f"d grid: {list(cfg.grid.d_values)}",
            f"K grid: {list(cfg.grid.k_values)}",
            "",
            f"{'class':<16}{'mAP':>10}{'(std)':>10}{'f1':>10}{'(std)':>10}",
        ]
        for c in self.classes:
            lines.append(f"{c.target:<16}{c.mean_ap:>10.4f}{np.std(c.ap):>10.4f}"
                         f"{c.mean_f1:>10.4f}{np.std(c.f1):>10.4f}")
        s = self.summary()
        lines += [
            "",
            f"mAP  mean {s['map_mean']:.4f}  std over classes {s['map_std_over_classes']:.4f}"
            f"  mean std over splits {s['map_std_within_class']:.4f}",
            f"f1   mean {s['f1_mean']:.4f}  std over classes {s['f1_std_over_classes']:.4f}"
            f"  mean std over splits {s['f1_std_within_class']:.4f}",
        ]
        return "\n".join(lines) + "\n"


def _fit_and_score(train, test, cell, cfg, which):
    d, K = cell
    F_tr, F_te = kernel_features(train.X, train.y, test.X, cfg.kernel, cfg.sigma,
                                 cfg.kernel_tau, cfg.kernel_max_dim)
    m = fit_model(F_tr, train.y, d, K, cfg.ridge, cfg.seed, cfg.solver, cfg.max_iter)
    scores = {}
    if "map" in which:
        scores["map"] = average_precision(rank(m, F_te), test.y)
    if "f1" in which:
        scores["f1"] = f1_score(classify(m, F_te, cfg.equiprobable).labels, test.y)
    return scores


def run_experiment(cfg, progress=None):
    """Run the full protocol described by ``cfg`` (an :class:`ExperimentConfig` or path)."""
    if not isinstance(cfg, ExperimentConfig):
        cfg = load_config(cfg)
    data = load_csv(cfg.data, cfg.label_col)
    targets = data.classes if cfg.classes == "all" else list(cfg.classes)
    unknown = [t for t in targets if t not in data.classes]
    if unknown:
        raise ConfigError(f"field 'classes': unknown classes {unknown}")
    grid = cfg.grid
    timings = {"cv": 0.0, "fit_eval": 0.0}
    results = []
    for target in targets:
        problem = make_class_specific(data, target)
        res = ClassResult(target, [], [], [], [])
        for r in range(cfg.repeats):
            train, test = split(problem, SplitSpec(cfg.train_fraction, cfg.seed + r))
            t0 = time.perf_counter()
            rep_grid = CvGrid(grid.d_values, grid.k_values, grid.folds, cfg.seed + r)
            cv = cross_validate(train.X, train.y, rep_grid, "both", cfg.solver, cfg.kernel, cfg.sigma,
                                cfg.ridge, cfg.equiprobable, cfg.max_iter, cfg.kernel_max_dim,
                                cfg.kernel_tau)
            t1 = time.perf_counter()
            cell_map, cell_f1 = cv.best_params("map"), cv.best_params("f1")
            if cell_map == cell_f1:
                scores = _fit_and_score(train, test, cell_map, cfg, ("map", "f1"))
            else:
                scores = _fit_and_score(train, test, cell_map, cfg, ("map",))
                scores.update(_fit_and_score(train, test, cell_f1, cfg, ("f1",)))
            timings["cv"] += t1 - t0
            timings["fit_eval"] += time.perf_counter() - t1
            res.ap.append(scores["map"])
            res.f1.append(scores["f1"])
            res.chosen_map.append(cell_map)
            res.chosen_f1.append(cell_f1)
            if progress is not None:
                progress(f"class {target} split {r + 1}/{cfg.repeats}: "
                         f"AP={scores['map']:.4f} f1={scores['f1']:.4f}")
        results.append(res)
    return EvalReport(cfg, results, timings)
