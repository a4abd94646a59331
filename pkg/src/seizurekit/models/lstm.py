"""Single-layer LSTM binary classifier trained from scratch with BPTT.

The recurrence is the standard one: input, forget, and output gates with
sigmoid activations, a tanh candidate, c_t = f*c_{t-1} + i*g, h_t =
o*tanh(c_t), with h_0 = c_0 = 0. A sigmoid head on the final hidden state
gives the positive-class probability. Gradients of the mean binary
cross-entropy are computed by exact backpropagation through time and
clipped by global norm before each SGD step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigError, DataError
from .logistic import sigmoid


@dataclass(frozen=True)
class LstmParams:
    W_i: np.ndarray  # (h, d + h)
    W_f: np.ndarray
    W_o: np.ndarray
    W_g: np.ndarray
    b_i: np.ndarray  # (h,)
    b_f: np.ndarray
    b_o: np.ndarray
    b_g: np.ndarray
    w_out: np.ndarray  # (h,)
    b_out: float

    @property
    def hidden_dim(self) -> int:
        return self.W_i.shape[0]

    @property
    def input_dim(self) -> int:
        return self.W_i.shape[1] - self.W_i.shape[0]


_FIELDS = ("W_i", "W_f", "W_o", "W_g", "b_i", "b_f", "b_o", "b_g", "w_out", "b_out")


def init_params(input_dim: int, hidden_dim: int = 64, seed: int = 0) -> LstmParams:
    """Uniform(-s, s) init with s = 1/sqrt(h); forget-gate bias starts at 1."""
    if input_dim < 1 or hidden_dim < 1:
        raise ConfigError(f"bad dims d={input_dim}, h={hidden_dim}")
    rng = np.random.default_rng(seed)
    s = 1.0 / np.sqrt(hidden_dim)
    def u(*shape):
        return rng.uniform(-s, s, size=shape)
    return LstmParams(
        W_i=u(hidden_dim, input_dim + hidden_dim),
        W_f=u(hidden_dim, input_dim + hidden_dim),
        W_o=u(hidden_dim, input_dim + hidden_dim),
        W_g=u(hidden_dim, input_dim + hidden_dim),
        b_i=u(hidden_dim),
        b_f=np.ones(hidden_dim),  # starts open so early gradients flow
        b_o=u(hidden_dim),
        b_g=u(hidden_dim),
        w_out=u(hidden_dim),
        b_out=float(u()),
    )


def _forward_batch(p: LstmParams, seqs: np.ndarray):
    """Run the recurrence over a (N, T, d) batch; cache all activations."""
    N, T, d = seqs.shape
    h_dim = p.hidden_dim
    if d != p.input_dim:
        raise DataError(f"input dim {d} does not match parameters ({p.input_dim})")
    h = np.zeros((N, h_dim))
    c = np.zeros((N, h_dim))
    cache = {"z": [], "i": [], "f": [], "o": [], "g": [], "c": [], "tanh_c": [], "h": [h]}
    for t in range(T):
        z = np.concatenate([seqs[:, t, :], h], axis=1)  # (N, d + h)
        gi = sigmoid(z @ p.W_i.T + p.b_i)
        gf = sigmoid(z @ p.W_f.T + p.b_f)
        go = sigmoid(z @ p.W_o.T + p.b_o)
        gg = np.tanh(z @ p.W_g.T + p.b_g)
        c = gf * c + gi * gg
        tanh_c = np.tanh(c)
        h = go * tanh_c
        for key, val in (
            ("z", z), ("i", gi), ("f", gf), ("o", go), ("g", gg),
            ("c", c), ("tanh_c", tanh_c), ("h", h),
        ):
            cache[key].append(val)
    logits = cache["h"][-1] @ p.w_out + p.b_out
    probs = sigmoid(logits)
    return probs, cache


def lstm_forward(p: LstmParams, seq) -> tuple[float, dict]:
    """Probability for one (T, d) sequence, plus cached activations."""
    seq = np.asarray(seq, dtype=np.float64)
    if seq.ndim != 2:
        raise DataError("sequence must be a (T, d) array")
    if seq.shape[0] < 1:
        raise DataError("sequence must have at least one step")
    probs, cache = _forward_batch(p, seq[None, :, :])
    return float(probs[0]), cache


def lstm_grad(
    p: LstmParams,
    seqs,
    labels,
    clip_norm: float | None = 5.0,
) -> tuple[dict, float]:
    """Exact BPTT gradients of the mean BCE over a (N, T, d) batch.

    clip_norm rescales the whole gradient when its global L2 norm exceeds
    the limit; pass None to disable (finite-difference checks need the raw
    gradient).
    """
    seqs = np.asarray(seqs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if seqs.ndim != 3 or len(seqs) == 0:
        raise DataError("batch must be a nonempty (N, T, d) array")
    if len(labels) != len(seqs):
        raise DataError(f"{len(labels)} labels for {len(seqs)} sequences")

    N, T, d = seqs.shape
    probs, cache = _forward_batch(p, seqs)
    per_seq = -(labels * np.log(np.maximum(probs, 1e-300))
                + (1 - labels) * np.log(np.maximum(1 - probs, 1e-300)))
    if not np.isfinite(per_seq).all():
        bad = int(np.flatnonzero(~np.isfinite(per_seq))[0])
        raise DataError(f"non-finite loss at sequence index {bad}")
    loss = float(per_seq.mean())

    grads = {
        "W_i": np.zeros_like(p.W_i), "W_f": np.zeros_like(p.W_f),
        "W_o": np.zeros_like(p.W_o), "W_g": np.zeros_like(p.W_g),
        "b_i": np.zeros_like(p.b_i), "b_f": np.zeros_like(p.b_f),
        "b_o": np.zeros_like(p.b_o), "b_g": np.zeros_like(p.b_g),
        "w_out": np.zeros_like(p.w_out), "b_out": 0.0,
    }

    # d(mean BCE)/d(logit) = (p - y) / N; the head feeds h_T.
    dlogits = (probs - labels) / N  # (N,)
    h_T = cache["h"][-1]
    grads["w_out"] = dlogits @ h_T
    grads["b_out"] = float(dlogits.sum())

    h_dim = p.hidden_dim
    dh = dlogits[:, None] * p.w_out[None, :]  # (N, h)
    dc = np.zeros((N, h_dim))
    for t in range(T - 1, -1, -1):
        z = cache["z"][t]
        gi, gf, go, gg = cache["i"][t], cache["f"][t], cache["o"][t], cache["g"][t]
        tanh_c = cache["tanh_c"][t]
        c_prev = cache["c"][t - 1] if t > 0 else np.zeros((N, h_dim))

        do = dh * tanh_c
        dc = dc + dh * go * (1.0 - tanh_c**2)
        di = dc * gg
        dg = dc * gi
        df = dc * c_prev

        da_i = di * gi * (1.0 - gi)
        da_f = df * gf * (1.0 - gf)
        da_o = do * go * (1.0 - go)
        da_g = dg * (1.0 - gg**2)

        grads["W_i"] += da_i.T @ z
        grads["W_f"] += da_f.T @ z
        grads["W_o"] += da_o.T @ z
        grads["W_g"] += da_g.T @ z
        grads["b_i"] += da_i.sum(axis=0)
        grads["b_f"] += da_f.sum(axis=0)
        grads["b_o"] += da_o.sum(axis=0)
        grads["b_g"] += da_g.sum(axis=0)

        dz = da_i @ p.W_i + da_f @ p.W_f + da_o @ p.W_o + da_g @ p.W_g
        dh = dz[:, d:]
        dc = dc * gf

    if clip_norm is not None:
        total = 0.0
        for k in grads:
            g = grads[k]
            total += float(g**2) if k == "b_out" else float((g * g).sum())
        norm = np.sqrt(total)
        if norm > clip_norm:
            scale = clip_norm / norm
            for k in grads:
                grads[k] = grads[k] * scale
    return grads, loss


@dataclass(frozen=True)
class LstmTrainConfig:
    learning_rate: float = 0.05
    epochs: int = 100
    batch_size: int = 16
    grad_clip_norm: float = 5.0
    seed: int = 0
    patience: int | None = None  # epochs without val improvement; None = run all

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.grad_clip_norm <= 0:
            raise ConfigError(
                f"grad_clip_norm must be positive, got {self.grad_clip_norm}"
            )
        if self.patience is not None and self.patience < 1:
            raise ConfigError(f"patience must be >= 1, got {self.patience}")


def _mean_loss(p: LstmParams, seqs, labels) -> float:
    probs, _ = _forward_batch(p, np.asarray(seqs, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.float64)
    per = -(labels * np.log(np.maximum(probs, 1e-300))
            + (1 - labels) * np.log(np.maximum(1 - probs, 1e-300)))
    return float(per.mean())


def lstm_train(
    train: tuple,
    val: tuple | None,
    cfg: LstmTrainConfig,
    params: LstmParams | None = None,
) -> tuple[LstmParams, dict]:
    """Mini-batch SGD over seeded shuffles; keeps the best-validation params.

    train and val are (seqs, labels) pairs; val may be None, in which case
    the training loss drives best-epoch selection and early stopping.
    Returns (best parameters, history dict with per-epoch losses).
    """
    seqs, labels = train
    seqs = np.asarray(seqs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if seqs.ndim != 3 or len(seqs) == 0:
        raise DataError("training set must be a nonempty (N, T, d) array")
    rng = np.random.default_rng(cfg.seed)
    if params is None:
        params = init_params(seqs.shape[2], seed=cfg.seed)

    monitor = val if val is not None else (seqs, labels)
    history: dict = {"train_loss": [], "val_loss": []}
    best = params
    best_loss = _mean_loss(params, *monitor)
    stale = 0

    for _ in range(cfg.epochs):
        order = rng.permutation(len(seqs))
        for lo in range(0, len(order), cfg.batch_size):
            batch = order[lo : lo + cfg.batch_size]
            grads, _ = lstm_grad(
                params, seqs[batch], labels[batch], clip_norm=cfg.grad_clip_norm
            )
            updates = {
                k: getattr(params, k) - cfg.learning_rate * grads[k] for k in _FIELDS
            }
            updates["b_out"] = float(updates["b_out"])
            params = replace(params, **updates)
        history["train_loss"].append(_mean_loss(params, seqs, labels))
        vloss = _mean_loss(params, *monitor)
        history["val_loss"].append(vloss)
        if vloss < best_loss:
            best_loss = vloss
            best = params
            stale = 0
        else:
            stale += 1
            if cfg.patience is not None and stale >= cfg.patience:
                break
    return best, history


def lstm_predict(
    p: LstmParams, seqs, threshold: float = 0.5
) -> tuple[np.ndarray, np.ndarray]:
    """(classes, probabilities); class 1 iff probability >= threshold."""
    seqs = np.asarray(seqs, dtype=np.float64)
    if seqs.ndim != 3:
        raise DataError("sequences must be a (N, T, d) array")
    if len(seqs) == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    probs, _ = _forward_batch(p, seqs)
    return (probs >= threshold).astype(np.int64), probs
