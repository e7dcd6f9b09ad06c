"""Nonnegative least squares via the Lawson-Hanson active-set method."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch


def nnls(a, b, max_iterations: int | None = None) -> tuple[np.ndarray, float]:
    """Minimize ``||a @ x - b||`` subject to ``x >= 0``.

    Classic active-set iteration: start with every coefficient clamped
    at zero, repeatedly free the coefficient with the largest positive
    gradient, solve the unconstrained subproblem on the free set, and
    step back onto the boundary whenever the subproblem solution turns
    a freed coefficient negative.

    Parameters
    ----------
    a : array_like, shape (m, k)
    b : array_like, shape (m,)
    max_iterations : int, optional
        Cap on coefficient moves (default ``3 * k``).

    Returns
    -------
    x : numpy.ndarray, shape (k,)
        The nonnegative solution.
    rnorm : float
        Euclidean norm of the residual ``b - a @ x``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"incompatible shapes {a.shape} and {b.shape} for nnls"
        )
    m, k = a.shape
    if max_iterations is None:
        max_iterations = 3 * k
    tol = 10.0 * np.finfo(float).eps * max(m, k) * max(
        1.0, float(np.abs(a).sum(axis=0).max(initial=0.0))
    ) * max(1.0, float(np.abs(b).max(initial=0.0)))

    x = np.zeros(k)
    passive = np.zeros(k, dtype=bool)
    w = a.T @ b
    moves = 0
    while not passive.all():
        w_masked = np.where(passive, -np.inf, w)
        j = int(np.argmax(w_masked))
        if w_masked[j] <= tol:
            break
        passive[j] = True
        while True:
            if not passive.any():
                break
            z = np.zeros(k)
            z[passive], *_ = np.linalg.lstsq(a[:, passive], b, rcond=None)
            if z[passive].min() > 0.0:
                x = z
                break
            moves += 1
            if moves > max_iterations:
                x = np.maximum(z, 0.0)
                break
            blocking = passive & (z <= 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = np.where(blocking, x / (x - z), np.inf)
            alpha = float(steps.min())
            x = x + alpha * (z - x)
            passive &= x > tol
            x[~passive] = 0.0
        if moves > max_iterations:
            break
        w = a.T @ (b - a @ x)
    residual = b - a @ x
    return x, float(np.linalg.norm(residual))
