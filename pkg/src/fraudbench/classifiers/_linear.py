"""Linear models: logistic regression, ridge, and the online hinge family.

All operate on the feature matrix with a bias column appended.  Labels are
re-encoded to +-1 internally.  The online family (perceptron, passive-
aggressive, hinge SGD) runs one shuffled pass per epoch through the kernel
backend; shuffles come from the model's rng, so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from fraudbench import _kernels

_VARIANTS = {"perceptron": 0, "passive_aggressive": 1, "sgd_hinge": 2}


def _augment(x):
    return np.ascontiguousarray(np.hstack([x, np.ones((x.shape[0], 1))]))


def _signed(y):
    return (2.0 * np.asarray(y) - 1.0).astype(np.float64)


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def train_logistic(params, x, y, rng):
    """Full-batch gradient descent on L2-penalized logistic loss.

    Penalty lambda excludes the bias; step size by Armijo backtracking from
    1.0; stops at max_iter or gradient 2-norm below tol.
    """
    lam = float(params["l2"])
    max_iter = int(params["max_iter"])
    tol = float(params["tol"])
    xb = _augment(x)
    ys = _signed(y)
    n = xb.shape[0]
    w = np.zeros(xb.shape[1])

    def loss_and_grad(wv):
        margins = ys * (xb @ wv)
        loss = float(np.mean(np.logaddexp(0.0, -margins)))
        loss += 0.5 * lam * float(wv[:-1] @ wv[:-1])
        coef = ys * _sigmoid(-margins)
        grad = -(xb.T @ coef) / n
        grad[:-1] += lam * wv[:-1]
        return loss, grad

    def loss_only(wv):
        margins = ys * (xb @ wv)
        return float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * lam * float(
            wv[:-1] @ wv[:-1]
        )

    for _ in range(max_iter):
        loss, grad = loss_and_grad(w)
        gnorm2 = float(grad @ grad)
        if np.sqrt(gnorm2) < tol:
            break
        step = 1.0
        for _ in range(60):
            if loss_only(w - step * grad) <= loss - 1e-4 * step * gnorm2:
                break
            step *= 0.5
        else:
            break  # no productive step left at float precision
        w = w - step * grad
    return {"w": w}


def score_logistic(state, x):
    return _sigmoid(_augment(x) @ state["w"])


def train_ridge(params, x, y, rng):
    """Closed-form normal equations on +-1 labels; bias unpenalized."""
    lam = float(params["l2"])
    xb = _augment(x)
    ys = _signed(y)
    gram = xb.T @ xb
    gram[np.diag_indices_from(gram)] += np.append(np.full(x.shape[1], lam), 0.0)
    w = np.linalg.solve(gram, xb.T @ ys)
    return {"w": w}


def score_ridge(state, x):
    return _augment(x) @ state["w"]


def train_online(kind):
    """Trainer factory for the perceptron family (kind fixes the update rule)."""
    variant = _VARIANTS[kind]

    def _train(params, x, y, rng):
        epochs = int(params["epochs"])
        lr = float(params.get("step", 0.0))
        xb = _augment(x)
        ys = _signed(y)
        norms2 = np.sum(xb * xb, axis=1)
        w = np.zeros(xb.shape[1])
        t = 0
        gen = rng.generator
        for _ in range(epochs):
            order = gen.permutation(xb.shape[0]).astype(np.int64)
            t = _kernels.linear_epoch(xb, ys, norms2, w, order, variant, lr, t)
        return {"w": w}

    return _train


def score_margin(state, x):
    return _augment(x) @ state["w"]
