"""Gaussian naive Bayes and quadratic discriminant analysis."""

from __future__ import annotations

import math

import numpy as np

from fraudbench.errors import NumericalError

_LOG2PI = math.log(2.0 * math.pi)


def train_gaussian_nb(params, x, y, rng):
    """Per-class feature means/variances (population), shared variance floor.

    The floor is 1e-9 times the largest overall feature variance, so noisy
    and constant features alike keep the densities finite.
    """
    floor = 1e-9 * float(np.max(x.var(axis=0)))
    state = {"log_prior": {}, "mean": {}, "var": {}}
    for c in (0, 1):
        xc = x[y == c]
        state["log_prior"][c] = math.log(xc.shape[0] / x.shape[0])
        state["mean"][c] = xc.mean(axis=0)
        state["var"][c] = np.maximum(np.maximum(xc.var(axis=0), floor), 1e-300)
    return state


def score_gaussian_nb(state, x):
    ll = _nb_log_likelihoods(state, x)
    return np.exp(ll[1] - np.logaddexp(ll[0], ll[1]))


def _nb_log_likelihoods(state, x):
    out = {}
    for c in (0, 1):
        diff = x - state["mean"][c]
        var = state["var"][c]
        out[c] = state["log_prior"][c] - 0.5 * np.sum(
            _LOG2PI + np.log(var) + diff * diff / var, axis=1
        )
    return out


def train_qda(params, x, y, rng):
    """Per-class full covariance (sample, ddof=1) with trace-scaled ridge.

    A class covariance that is still not positive definite after adding
    reg * trace/d to the diagonal is a numerical failure, reported as such.
    """
    reg = float(params["reg"])
    d = x.shape[1]
    state = {"log_prior": {}, "mean": {}, "chol": {}, "logdet": {}}
    for c in (0, 1):
        xc = x[y == c]
        if xc.shape[0] < 2:
            raise NumericalError(
                f"QDA class {c} has {xc.shape[0]} instance(s); covariance is singular"
            )
        state["log_prior"][c] = math.log(xc.shape[0] / x.shape[0])
        mu = xc.mean(axis=0)
        state["mean"][c] = mu
        cov = np.atleast_2d(np.cov(xc, rowvar=False, ddof=1))
        cov[np.diag_indices_from(cov)] += reg * float(np.trace(cov)) / d
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise NumericalError(
                f"QDA class {c} covariance singular even after regularization"
            ) from None
        state["chol"][c] = chol
        state["logdet"][c] = 2.0 * float(np.sum(np.log(np.diag(chol))))
    return state


def score_qda(state, x):
    ll = {}
    for c in (0, 1):
        diff = x - state["mean"][c]
        z = np.linalg.solve(state["chol"][c], diff.T)
        quad = np.sum(z * z, axis=0)
        d = x.shape[1]
        ll[c] = state["log_prior"][c] - 0.5 * (d * _LOG2PI + state["logdet"][c] + quad)
    return np.exp(ll[1] - np.logaddexp(ll[0], ll[1]))
