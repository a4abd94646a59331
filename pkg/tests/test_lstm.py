"""LSTM recurrence, exact BPTT gradients, training, and prediction."""

import numpy as np
import pytest

from seizurekit import ConfigError, DataError
from seizurekit.models import (
    LstmParams,
    LstmTrainConfig,
    init_params,
    lstm_forward,
    lstm_grad,
    lstm_predict,
    lstm_train,
)
from seizurekit.models.lstm import _FIELDS, _mean_loss


def zero_params(d=3, h=4):
    zw = np.zeros((h, d + h))
    zb = np.zeros(h)
    return LstmParams(
        W_i=zw.copy(), W_f=zw.copy(), W_o=zw.copy(), W_g=zw.copy(),
        b_i=zb.copy(), b_f=zb.copy(), b_o=zb.copy(), b_g=zb.copy(),
        w_out=np.zeros(h), b_out=0.0,
    )


def flatten(p):
    parts = []
    for k in _FIELDS:
        v = getattr(p, k)
        parts.append(np.atleast_1d(np.asarray(v, dtype=np.float64)).ravel())
    return np.concatenate(parts)


def unflatten(template, vec):
    out = {}
    pos = 0
    for k in _FIELDS:
        v = getattr(template, k)
        if np.isscalar(v) or getattr(v, "ndim", 0) == 0:
            out[k] = float(vec[pos])
            pos += 1
        else:
            size = v.size
            out[k] = vec[pos : pos + size].reshape(v.shape)
            pos += size
    return LstmParams(**out)


def test_zero_parameters_emit_half():
    p = zero_params()
    prob, _ = lstm_forward(p, np.ones((5, 3)))
    assert prob == 0.5


def test_output_head_sigmoid_oracle():
    # all-zero recurrence plus b_out=2 makes the output sigmoid(2) exactly
    p = zero_params()
    p = LstmParams(**{**{k: getattr(p, k) for k in _FIELDS}, "b_out": 2.0})
    prob, _ = lstm_forward(p, np.ones((4, 3)))
    assert prob == pytest.approx(0.8807970779778823, abs=1e-15)


def test_forward_is_deterministic():
    p = init_params(3, hidden_dim=4, seed=0)
    seq = np.random.default_rng(1).normal(size=(6, 3))
    a, _ = lstm_forward(p, seq)
    b, _ = lstm_forward(p, seq)
    assert a == b


def test_gate_activations_are_bounded():
    p = init_params(3, hidden_dim=4, seed=2)
    seq = np.random.default_rng(3).normal(size=(7, 3)) * 5.0
    prob, cache = lstm_forward(p, seq)
    for key in ("i", "f", "o"):
        for arr in cache[key]:
            assert np.all((arr > 0) & (arr < 1))
    for arr in cache["g"] + cache["tanh_c"]:
        assert np.all(np.abs(arr) <= 1.0)
    assert 0.0 < prob < 1.0


def test_init_bounds_and_forget_bias():
    p = init_params(5, hidden_dim=16, seed=4)
    s = 1.0 / np.sqrt(16)
    for k in ("W_i", "W_f", "W_o", "W_g", "b_i", "b_o", "b_g", "w_out"):
        v = getattr(p, k)
        assert np.all(np.abs(v) <= s)
    assert np.all(p.b_f == 1.0)
    assert p.hidden_dim == 16 and p.input_dim == 5


def test_gradients_match_finite_differences():
    # every parameter entry, central differences, multiple seeds
    d, h, T, N = 3, 4, 5, 3
    worst = 0.0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        p = init_params(d, hidden_dim=h, seed=seed)
        seqs = rng.normal(size=(N, T, d))
        labels = rng.integers(0, 2, size=N).astype(float)
        grads, _ = lstm_grad(p, seqs, labels, clip_norm=None)
        gvec = flatten(
            LstmParams(**{k: grads[k] for k in _FIELDS})
        )
        pvec = flatten(p)
        eps = 1e-5
        for j in range(len(pvec)):
            up = pvec.copy()
            up[j] += eps
            dn = pvec.copy()
            dn[j] -= eps
            lp = _mean_loss(unflatten(p, up), seqs, labels)
            lm = _mean_loss(unflatten(p, dn), seqs, labels)
            num = (lp - lm) / (2 * eps)
            rel = abs(num - gvec[j]) / max(1e-8, abs(num), abs(gvec[j]))
            worst = max(worst, rel)
    assert worst < 1e-4


def test_gradient_clipping_rescales_global_norm():
    rng = np.random.default_rng(6)
    p = init_params(3, hidden_dim=4, seed=6)
    seqs = rng.normal(size=(4, 5, 3)) * 10
    labels = np.array([1.0, 0.0, 1.0, 0.0])
    raw, _ = lstm_grad(p, seqs, labels, clip_norm=None)
    raw_norm = np.sqrt(sum(
        float(np.sum(np.square(raw[k]))) for k in _FIELDS
    ))
    clip = raw_norm / 2
    clipped, _ = lstm_grad(p, seqs, labels, clip_norm=clip)
    norm = np.sqrt(sum(float(np.sum(np.square(clipped[k]))) for k in _FIELDS))
    assert norm == pytest.approx(clip, rel=1e-12)
    # direction is preserved
    assert np.allclose(clipped["W_i"] * 2, raw["W_i"])


def test_batch_duplication_leaves_mean_gradient_unchanged():
    rng = np.random.default_rng(7)
    p = init_params(2, hidden_dim=3, seed=7)
    seqs = rng.normal(size=(3, 4, 2))
    labels = np.array([1.0, 0.0, 1.0])
    g1, l1 = lstm_grad(p, seqs, labels, clip_norm=None)
    g2, l2 = lstm_grad(
        p, np.concatenate([seqs, seqs]), np.concatenate([labels, labels]), clip_norm=None
    )
    assert l1 == pytest.approx(l2, rel=1e-12)
    for k in _FIELDS:
        assert np.allclose(g1[k], g2[k], rtol=1e-10)


def test_memorizes_toy_sequences():
    rng = np.random.default_rng(8)
    n, T, d = 20, 6, 4
    labels = np.array([i % 2 for i in range(n)], dtype=float)
    seqs = rng.normal(size=(n, T, d)) + labels[:, None, None] * 1.5
    params, history = lstm_train(
        (seqs, labels), None,
        LstmTrainConfig(learning_rate=0.2, epochs=200, batch_size=4, seed=0),
    )
    classes, probs = lstm_predict(params, seqs)
    assert (classes == labels).mean() >= 0.95
    assert history["train_loss"][-1] < history["train_loss"][0] * 0.5


def test_training_history_is_reproducible():
    rng = np.random.default_rng(9)
    seqs = rng.normal(size=(10, 5, 3))
    labels = (rng.random(10) > 0.5).astype(float)
    cfg = LstmTrainConfig(learning_rate=0.1, epochs=5, batch_size=4, seed=3)
    _, h1 = lstm_train((seqs, labels), None, cfg)
    _, h2 = lstm_train((seqs, labels), None, cfg)
    assert h1["train_loss"] == h2["train_loss"]
    assert h1["val_loss"] == h2["val_loss"]


def test_validation_set_drives_model_selection():
    rng = np.random.default_rng(10)
    seqs = rng.normal(size=(12, 4, 2))
    labels = (seqs[:, -1, 0] > 0).astype(float)
    vseqs = rng.normal(size=(6, 4, 2))
    vlabels = (vseqs[:, -1, 0] > 0).astype(float)
    params, history = lstm_train(
        (seqs, labels), (vseqs, vlabels),
        LstmTrainConfig(learning_rate=0.3, epochs=30, batch_size=4, seed=1),
    )
    # returned params are the best-validation snapshot, not the last epoch
    assert _mean_loss(params, vseqs, vlabels) <= min(history["val_loss"]) + 1e-12


def test_early_stopping_with_patience():
    rng = np.random.default_rng(11)
    seqs = rng.normal(size=(8, 3, 2))
    labels = rng.integers(0, 2, size=8).astype(float)
    cfg = LstmTrainConfig(learning_rate=5.0, epochs=500, batch_size=8, seed=0, patience=3)
    _, history = lstm_train((seqs, labels), None, cfg)
    assert len(history["train_loss"]) < 500


def test_predict_threshold_boundary_and_empty():
    p = zero_params()
    classes, probs = lstm_predict(p, np.zeros((3, 2, 3)))
    assert probs.tolist() == [0.5, 0.5, 0.5]
    assert classes.tolist() == [1, 1, 1]  # p >= threshold at exactly 0.5
    assert lstm_predict(p, np.zeros((0, 2, 3)))[0].size == 0


def test_bad_input_rejected():
    p = zero_params()
    with pytest.raises(DataError):
        lstm_forward(p, np.zeros((0, 3)))
    with pytest.raises(DataError):
        lstm_forward(p, np.zeros((4, 7)))  # wrong feature width
    with pytest.raises(DataError):
        lstm_grad(p, np.zeros((0, 2, 3)), np.zeros(0))
    with pytest.raises(DataError):
        lstm_grad(p, np.zeros((2, 2, 3)), np.zeros(3))
    with pytest.raises(ConfigError):
        LstmTrainConfig(learning_rate=0.0)
    with pytest.raises(ConfigError):
        LstmTrainConfig(patience=0)
    with pytest.raises(ConfigError):
        init_params(0)
