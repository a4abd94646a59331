"""End-to-end training/evaluation runs with a fixed leakage-safe order.

Every run follows the same sequence: split by patient, fit the scaler on
training rows only, scale all splits, oversample the training split if
asked, then fit the model. A patient-disjointness gate guards every
evaluation; the only way around it is the explicit allow_leaky_split
switch, which exists to demonstrate how optimistic row-level splits are.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .epochs import build_sequences
from .errors import ConfigError, DataError
from .evaluation import (
    assert_patient_disjoint,
    compute_metrics,
    kfold_patients,
    roc_auc,
    split_patients,
    summarize_folds,
)
from .features import FeatureMatrix, apply_scaler, fit_scaler
from .models import (
    ConstantModel,
    KnnModel,
    LogRegConfig,
    LstmParams,
    LstmTrainConfig,
    RFConfig,
    SVMModel,
    constant_predict,
    constant_scores,
    init_params,
    knn_predict,
    knn_scores,
    logreg_fit,
    logreg_predict,
    logreg_predict_proba,
    lstm_predict,
    lstm_train,
    rf_fit,
    rf_predict,
    rf_scores,
    svm_decision,
    svm_fit_smo,
    svm_predict,
)
from .models.forest import RFModel
from .models.logistic import LogRegModel
from .smote import SmoteConfig, smote

MODEL_NAMES = ("knn", "logreg", "rf", "svm", "lstm", "constant")

# SMO cost grows quadratically with rows, so SVM training is capped to a
# seeded stratified subsample unless the caller sets an explicit limit.
DEFAULT_SVM_TRAIN_CAP = 3000

_ALLOWED_PARAMS = {
    "knn": {"k", "class_weights"},
    "logreg": {
        "learning_rate",
        "l2_lambda",
        "max_iters",
        "tolerance",
        "class_weights",
        "threshold",
    },
    "rf": {"n_trees", "max_depth", "min_samples_split", "max_features"},
    "svm": {"C", "gamma", "tol", "max_passes"},
    "lstm": {
        "hidden_dim",
        "learning_rate",
        "epochs",
        "batch_size",
        "grad_clip_norm",
        "patience",
        "threshold",
    },
    "constant": {"class"},
}


@dataclass(frozen=True)
class PipelineConfig:
    model: str = "logreg"
    model_params: dict = field(default_factory=dict)
    use_smote: bool = False
    smote_k: int = 5
    smote_ratio: float = 1.0
    split_ratios: tuple[float, float, float] = (0.5, 0.25, 0.25)
    sequence_length: int = 10
    max_train_rows: int | None = None
    allow_leaky_split: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODEL_NAMES:
            raise ConfigError(
                f"unknown model {self.model!r}; choose from {MODEL_NAMES}"
            )
        unknown = set(self.model_params) - _ALLOWED_PARAMS[self.model]
        if unknown:
            raise ConfigError(
                f"unknown {self.model} parameter(s) {sorted(unknown)}; "
                f"allowed: {sorted(_ALLOWED_PARAMS[self.model])}"
            )
        if self.sequence_length < 1:
            raise ConfigError(
                f"sequence_length must be >= 1, got {self.sequence_length}"
            )
        if self.max_train_rows is not None and self.max_train_rows < 2:
            raise ConfigError(
                f"max_train_rows must be >= 2, got {self.max_train_rows}"
            )


def resolve_class_weights(spec, y) -> dict | None:
    """None, an explicit {class: weight} dict, or 'balanced' (inverse frequency)."""
    if spec is None:
        return None
    if spec == "balanced":
        y = np.asarray(y)
        n = len(y)
        out = {}
        for c in (0, 1):
            n_c = int((y == c).sum())
            out[c] = n / (2.0 * n_c) if n_c else 1.0
        return out
    if isinstance(spec, dict):
        return {int(k): float(v) for k, v in spec.items()}
    raise ConfigError(f"class_weights must be None, 'balanced', or a dict, got {spec!r}")


def stratified_cap(y, cap: int, seed: int) -> np.ndarray:
    """Seeded index subsample of at most cap rows, preserving class ratio."""
    y = np.asarray(y)
    n = len(y)
    if n <= cap:
        return np.arange(n)
    rng = np.random.default_rng(seed)
    keep: list[np.ndarray] = []
    classes = np.unique(y)
    for c in classes:
        idx = np.flatnonzero(y == c)
        quota = max(1, math.floor(cap * len(idx) / n))
        keep.append(rng.choice(idx, size=min(quota, len(idx)), replace=False))
    out = np.sort(np.concatenate(keep))
    return out


def _fit(name: str, X: np.ndarray, y: np.ndarray, params: dict, seed: int):
    """Train one model by registry name on already-scaled arrays."""
    p = dict(params)
    if name == "knn":
        return KnnModel(
            train_X=np.asarray(X, dtype=np.float64),
            train_y=np.asarray(y, dtype=np.int64),
            k=int(p.get("k", 2)),
            class_weights=resolve_class_weights(p.get("class_weights"), y),
        )
    if name == "logreg":
        cfg = LogRegConfig(
            learning_rate=float(p.get("learning_rate", 0.1)),
            l2_lambda=float(p.get("l2_lambda", 0.0)),
            max_iters=int(p.get("max_iters", 1000)),
            tolerance=float(p.get("tolerance", 1e-6)),
            class_weights=resolve_class_weights(p.get("class_weights"), y),
            seed=seed,
        )
        return logreg_fit(X, y, cfg)
    if name == "rf":
        cfg = RFConfig(
            n_trees=int(p.get("n_trees", 100)),
            max_depth=p.get("max_depth"),
            min_samples_split=int(p.get("min_samples_split", 2)),
            max_features=p.get("max_features"),
            seed=seed,
        )
        return rf_fit(X, y, cfg)
    if name == "svm":
        gamma = p.get("gamma")
        if gamma is None:
            gamma = 1.0 / X.shape[1]
        return svm_fit_smo(
            X,
            y,
            C=float(p.get("C", 1.0)),
            gamma=float(gamma),
            tol=float(p.get("tol", 1e-3)),
            max_passes=int(p.get("max_passes", 50)),
            seed=seed,
        )
    if name == "constant":
        return ConstantModel(constant_class=int(p.get("class", 0)))
    raise ConfigError(f"unknown model {name!r}")


def predict_and_score(model, X, threshold: float = 0.5):
    """(predicted classes, ranking scores) for any supported model."""
    if isinstance(model, KnnModel):
        classes = knn_predict(model.train_X, model.train_y, X, model.k, model.class_weights)
        scores = knn_scores(model.train_X, model.train_y, X, model.k, model.class_weights)
        return classes, scores
    if isinstance(model, LogRegModel):
        proba = logreg_predict_proba(model, X)
        return (proba >= threshold).astype(np.int64), proba
    if isinstance(model, RFModel):
        return rf_predict(model, X), rf_scores(model, X)
    if isinstance(model, SVMModel):
        return svm_predict(model, X), svm_decision(model, X)
    if isinstance(model, ConstantModel):
        return constant_predict(model, X), constant_scores(model, X)
    raise DataError(f"cannot predict with {type(model).__name__}")


def _leaky_row_split(n: int, ratios, seed: int):
    """Row-level (patient-ignoring) split; only for the optimism demo."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_train = math.floor(ratios[0] * n + 0.5)
    n_val = math.floor(ratios[1] * n + 0.5)
    return (
        np.sort(order[:n_train]),
        np.sort(order[n_train : n_train + n_val]),
        np.sort(order[n_train + n_val :]),
    )


def _metrics_dict(y_true, y_pred, scores) -> dict:
    report = compute_metrics(y_true, y_pred)
    out = report.to_dict()
    if scores is not None and len(np.unique(np.asarray(y_true))) == 2:
        points, auc = roc_auc(y_true, scores)
        out["auc"] = auc
        out["roc_points"] = [[float(a), float(b)] for a, b in points]
    return out


@dataclass(frozen=True)
class RunResult:
    report: dict
    model: object
    scaler: object
    split: dict


def _balance_by_duplication(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Duplicate minority windows cyclically until the classes are even."""
    y = np.asarray(y)
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) < 2 or counts.min() == counts.max():
        return X, y
    minority = classes[np.argmin(counts)]
    idx = np.flatnonzero(y == minority)
    need = int(counts.max() - counts.min())
    extra = np.tile(idx, math.ceil(need / len(idx)))[:need]
    return np.concatenate([X, X[extra]]), np.concatenate([y, y[extra]])


def _run_lstm(
    scaled: dict, labels: dict, cfg: PipelineConfig
) -> tuple[dict, LstmParams]:
    p = dict(cfg.model_params)
    T = cfg.sequence_length
    seq = {
        split: build_sequences(scaled[split], labels[split], T)
        for split in scaled
    }
    for split_name, ds in seq.items():
        if split_name == "train" and len(ds) == 0:
            raise DataError("no training sequences; files shorter than T?")
    X_tr, y_tr = _balance_by_duplication(seq["train"].X, seq["train"].y)
    params = init_params(
        X_tr.shape[2], hidden_dim=int(p.get("hidden_dim", 64)), seed=cfg.seed
    )
    train_cfg = LstmTrainConfig(
        learning_rate=float(p.get("learning_rate", 0.05)),
        epochs=int(p.get("epochs", 30)),
        batch_size=int(p.get("batch_size", 32)),
        grad_clip_norm=float(p.get("grad_clip_norm", 5.0)),
        seed=cfg.seed,
        patience=p.get("patience"),
    )
    val = None
    if "val" in seq and len(seq["val"]) > 0:
        val = (seq["val"].X, seq["val"].y)
    best, history = lstm_train((X_tr, y_tr), val, train_cfg, params=params)
    threshold = float(p.get("threshold", 0.5))
    y_pred, scores = lstm_predict(best, seq["test"].X, threshold)
    report = _metrics_dict(seq["test"].y, y_pred, scores)
    report["n_train_sequences"] = int(len(X_tr))
    report["n_test_sequences"] = int(len(seq["test"]))
    report["epochs_run"] = len(history["train_loss"])
    return report, best


def evaluate_split(
    fm: FeatureMatrix,
    labels: np.ndarray,
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    cfg: PipelineConfig,
    val_idx: np.ndarray | None = None,
    skip_gate: bool = False,
) -> RunResult:
    """Scale, oversample, fit, and score one train/test assignment.

    Row indices select from fm/labels. The patient-disjointness gate runs
    on row metadata unless skip_gate (set only by the leaky-split path).
    """
    labels = np.asarray(labels)
    if not skip_gate:
        assert_patient_disjoint(fm.patients[train_idx], fm.patients[test_idx])
        if val_idx is not None and len(val_idx):
            assert_patient_disjoint(fm.patients[train_idx], fm.patients[val_idx])
            assert_patient_disjoint(fm.patients[val_idx], fm.patients[test_idx])

    train_fm = fm.take(train_idx)
    scaler = fit_scaler(train_fm)
    scaled = {"train": apply_scaler(scaler, train_fm), "test": apply_scaler(scaler, fm.take(test_idx))}
    split_labels = {"train": labels[train_idx], "test": labels[test_idx]}
    if val_idx is not None and len(val_idx):
        scaled["val"] = apply_scaler(scaler, fm.take(val_idx))
        split_labels["val"] = labels[val_idx]

    split_info = {
        "n_train_rows": int(len(train_idx)),
        "n_val_rows": int(len(val_idx)) if val_idx is not None else 0,
        "n_test_rows": int(len(test_idx)),
    }

    if cfg.model == "lstm":
        report, model = _run_lstm(scaled, split_labels, cfg)
        report.update(split_info)
        return RunResult(report=report, model=model, scaler=scaler, split=split_info)

    X_tr = scaled["train"].values
    y_tr = split_labels["train"]

    cap = cfg.max_train_rows
    if cap is None and cfg.model == "svm":
        cap = DEFAULT_SVM_TRAIN_CAP
    if cap is not None and len(X_tr) > cap:
        keep = stratified_cap(y_tr, cap, cfg.seed)
        X_tr, y_tr = X_tr[keep], y_tr[keep]

    n_synth = 0
    if cfg.use_smote:
        smote_cfg = SmoteConfig(
            k_neighbors=cfg.smote_k, target_ratio=cfg.smote_ratio, seed=cfg.seed
        )
        X_tr, y_tr, synth_mask = smote(X_tr, y_tr, smote_cfg)
        n_synth = int(synth_mask.sum())

    threshold = float(cfg.model_params.get("threshold", 0.5))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = _fit(cfg.model, X_tr, y_tr, cfg.model_params, cfg.seed)
    y_pred, scores = predict_and_score(model, scaled["test"].values, threshold)

    report = _metrics_dict(split_labels["test"], y_pred, scores)
    report.update(split_info)
    report["n_train_rows_used"] = int(len(X_tr))
    report["n_synthetic_train_rows"] = n_synth
    notes = [str(w.message) for w in caught]
    if notes:
        report["warnings"] = notes
    return RunResult(report=report, model=model, scaler=scaler, split=split_info)


def run_holdout(fm: FeatureMatrix, labels: np.ndarray, cfg: PipelineConfig) -> RunResult:
    """Patient-level holdout per split_ratios (or a leaky row split on request)."""
    if cfg.allow_leaky_split:
        train_idx, val_idx, test_idx = _leaky_row_split(
            fm.n_rows, cfg.split_ratios, cfg.seed
        )
        result = evaluate_split(
            fm, labels, train_idx, test_idx, cfg, val_idx=val_idx, skip_gate=True
        )
        result.report["split"] = {"leaky_row_level": True, "seed": cfg.seed}
        return result

    plan = split_patients(
        sorted(set(fm.patients)), ratios=cfg.split_ratios, seed=cfg.seed
    )
    in_train = np.isin(fm.patients, plan.train_patients)
    in_val = np.isin(fm.patients, plan.val_patients)
    in_test = np.isin(fm.patients, plan.test_patients)
    result = evaluate_split(
        fm,
        labels,
        np.flatnonzero(in_train),
        np.flatnonzero(in_test),
        cfg,
        val_idx=np.flatnonzero(in_val),
    )
    result.report["split"] = {
        "train_patients": list(plan.train_patients),
        "val_patients": list(plan.val_patients),
        "test_patients": list(plan.test_patients),
        "seed": plan.seed,
    }
    return result


def run_cv(
    fm: FeatureMatrix, labels: np.ndarray, cfg: PipelineConfig, k: int = 5
) -> dict:
    """Patient-wise k-fold CV: per-fold reports plus mean/std summary."""
    if cfg.allow_leaky_split:
        raise ConfigError("cross-validation does not support the leaky split")
    folds = kfold_patients(sorted(set(fm.patients)), k=k, seed=cfg.seed)
    fold_reports = []
    for i, (train_p, test_p) in enumerate(folds):
        train_idx = np.flatnonzero(np.isin(fm.patients, train_p))
        test_idx = np.flatnonzero(np.isin(fm.patients, test_p))
        result = evaluate_split(fm, labels, train_idx, test_idx, cfg)
        report = dict(result.report)
        report["fold"] = i
        report["test_patients"] = list(test_p)
        fold_reports.append(report)
    summary = summarize_folds(
        [
            {
                key: r[key]
                for key in ("accuracy", "precision", "recall", "f1", "auc")
                if key in r
            }
            for r in fold_reports
        ]
    )
    return {"folds": fold_reports, "summary": summary, "k": k, "seed": cfg.seed}
