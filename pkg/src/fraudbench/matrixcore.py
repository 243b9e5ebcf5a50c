"""Dense-matrix validation, exact SVD, and the seeded random-source contract.

A "matrix" throughout this package is a validated 2-D C-contiguous float64
ndarray: finite entries only, at least one row and one column.  ``as_matrix``
is the checked constructor.

The SVD is a one-sided Jacobi (100-sweep cap, relative off-diagonal threshold
1e-12), delegating the sweep loop to the kernel backend.  Right singular
vectors follow a fixed sign convention so downstream PCA output is comparable
across runs: the largest-magnitude entry of each vector is made positive,
ties resolved to the lowest index.

``RandomSource`` wraps numpy's PCG64.  Streams are identified by a key path;
a child stream for ``(parent, label)`` is seeded from SHA-256 of
``parent_key + "/" + label``, so derivation is reproducible regardless of how
much the parent has been consumed.  The generator algorithm (PCG64) and this
derivation rule are part of the documented contract and must not change
silently.
"""

from __future__ import annotations

import hashlib
from typing import NamedTuple

import numpy as np

from fraudbench import _kernels
from fraudbench.errors import ContractError, NumericalError

JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-12


def as_matrix(values, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Validate ``values`` as a matrix, returning a C-contiguous float64 copy-or-view.

    With ``rows``/``cols`` given, flat input is reshaped and the length is
    checked against rows * cols.  Non-finite entries are rejected.
    """
    try:
        m = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ContractError(f"matrix values are not numeric: {exc}") from None
    if rows is not None or cols is not None:
        if rows is None or cols is None:
            raise ContractError("rows and cols must be given together")
        if rows < 1 or cols < 1:
            raise ContractError(f"matrix shape must be positive, got {rows}x{cols}")
        if m.ndim == 1:
            if m.size != rows * cols:
                raise ContractError(
                    f"got {m.size} values for a {rows}x{cols} matrix (need {rows * cols})"
                )
            m = m.reshape(rows, cols)
        elif m.shape != (rows, cols):
            raise ContractError(f"values have shape {m.shape}, expected {(rows, cols)}")
    if m.ndim != 2:
        raise ContractError(f"matrix must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ContractError(f"matrix must be non-empty, got shape {m.shape}")
    if not np.isfinite(m).all():
        bad = np.argwhere(~np.isfinite(m))[0]
        raise ContractError(f"non-finite matrix entry at row {bad[0]}, column {bad[1]}")
    return np.ascontiguousarray(m)


class SvdResult(NamedTuple):
    """Thin SVD ``u @ diag(s) @ vt`` with s non-negative, non-increasing."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


def svd(m) -> SvdResult:
    """Exact thin SVD by one-sided Jacobi.

    Raises NumericalError (naming the shape) if the sweep cap is hit before
    every column pair is relatively orthogonal within 1e-12.
    """
    a = as_matrix(m)
    n, d = a.shape
    if n >= d:
        u, s, v = _jacobi_svd(a)
        vt = np.ascontiguousarray(v.T)
    else:
        # orthogonalize the transpose, then swap sides: M = (U' S V'^T)^T = V' S U'^T
        u2, s, v2 = _jacobi_svd(np.ascontiguousarray(a.T))
        u = np.ascontiguousarray(v2)
        vt = np.ascontiguousarray(u2.T)
    _apply_sign_convention(u, vt)
    return SvdResult(u, s, vt)


def _jacobi_svd(a):
    """Core decomposition for n >= d input: returns (u, s, v) sorted descending."""
    n, d = a.shape
    work = np.array(a, dtype=np.float64, order="F", copy=True)
    v = np.asfortranarray(np.eye(d))
    sweeps, off = _kernels.jacobi_orthogonalize(work, v, JACOBI_MAX_SWEEPS, JACOBI_TOL)
    if off > JACOBI_TOL:
        raise NumericalError(
            f"jacobi SVD failed to converge on a {n}x{d} matrix "
            f"after {sweeps} sweeps (off-diagonal {off:.3e})"
        )

    s = np.sqrt(np.sum(work * work, axis=0))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    work = work[:, order]
    v = np.ascontiguousarray(v[:, order])

    u = np.zeros((n, d))
    nonzero = s > 0.0
    u[:, nonzero] = work[:, nonzero] / s[nonzero]
    if not nonzero.all():
        _fill_orthonormal(u, np.flatnonzero(~nonzero))
    return u, s, v


def _apply_sign_convention(u, vt):
    """Flip each right singular vector so its largest-|entry| is positive.

    Ties go to the lowest index (np.argmax convention); the matching left
    vector is flipped with it so the product is unchanged.  In place.
    """
    for j in range(vt.shape[0]):
        i = int(np.argmax(np.abs(vt[j])))
        if vt[j, i] < 0.0:
            vt[j] = -vt[j]
            u[:, j] = -u[:, j]


def _fill_orthonormal(u, cols):
    """Complete zero columns of ``u`` to an orthonormal set, deterministically.

    Gram-Schmidt of canonical basis vectors against the existing columns;
    candidates are tried in index order and accepted when the residual norm
    is non-negligible (guaranteed to happen within n tries).
    """
    n = u.shape[0]
    for j in cols:
        for cand in range(n):
            vec = np.zeros(n)
            vec[cand] = 1.0
            for _ in range(2):  # re-orthogonalize once for accuracy
                vec -= u @ (u.T @ vec)
            norm = float(np.linalg.norm(vec))
            if norm > 1e-6:
                u[:, j] = vec / norm
                break
        else:
            raise NumericalError("failed to complete an orthonormal basis")


class RandomSource:
    """Deterministic PCG64 stream addressed by (seed, derivation path).

    Identical seeds produce identical draw sequences across runs and
    platforms; children derived with the same label are identical no matter
    how much the parent stream was consumed.
    """

    __slots__ = ("seed", "key", "generator")

    def __init__(self, seed: int, _key: str | None = None):
        if not isinstance(seed, (int, np.integer)):
            raise ContractError(f"seed must be an integer, got {type(seed).__name__}")
        if not 0 <= int(seed) < 2**64:
            raise ContractError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = int(seed)
        self.key = f"seed:{self.seed}" if _key is None else _key
        digest = hashlib.sha256(self.key.encode("utf-8")).digest()
        entropy = int.from_bytes(digest, "big")
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def derive_child(self, label: str) -> "RandomSource":
        return RandomSource(self.seed, _key=f"{self.key}/{label}")

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, key={self.key!r})"


def derive_child(rng: RandomSource, label: str) -> RandomSource:
    """Child stream for (rng, label); same pair always yields the same stream."""
    return rng.derive_child(label)
