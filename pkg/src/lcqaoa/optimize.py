"""Derivative-free minimisation with linear interpolation models.

An unconstrained variant of Powell's COBYLA: a simplex of ``n + 1`` points
defines a linear model of ``f``; each iteration steps a distance ``rho`` down
the model gradient from the best point (the pole). ``rho`` halves whenever a
step fails to achieve a tenth of the predicted decrease on a well-shaped
simplex, and the run stops once a failure occurs at ``rho == tol``.

One addition to the classical method: when the model is flat (all simplex
values equal, as at the zero initialisation of QAOA, which is a saddle
point) the method probes the reversed and pairwise-diagonal simplex
directions once per radius before shrinking, until one such probe fails.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_FAR = 2.1
_THIN = 0.25
_ACCEPT = 0.1


@dataclass
class OptRun:
    history: list[tuple[int, list[float], float]]
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool
    message: str = ""
    wall_time: float = field(default=0.0, compare=False)

    @property
    def final(self):
        """The final point as a ``ParamSchedule`` (interleaved gamma/beta)."""
        from .vqa import ParamSchedule

        return ParamSchedule.from_vector(self.x)

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "message": self.message,
            "final_params": [float(v) for v in self.x],
            "final_value": self.fun,
            "history": [{"iteration": i, "params": p, "value": v} for i, p, v in self.history],
            "wall_time": self.wall_time,
        }


class _Budget(Exception):
    pass


def minimize_cobyla_like(f: Callable[[np.ndarray], float], x0, tol: float = 1e-3,
                         max_iter: int | None = None, rhobeg: float = 1.0) -> OptRun:
    """Minimise ``f`` from ``x0`` until the trust radius reaches ``tol``.

    ``max_iter`` caps the number of function evaluations; hitting it returns
    the best point so far with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    started = time.perf_counter()
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1).copy()
    n = x0.size
    history: list[tuple[int, list[float], float]] = []

    def evaluate(x):
        if max_iter is not None and len(history) >= max_iter:
            raise _Budget
        value = float(f(x.copy()))
        history.append((len(history), x.tolist(), value))
        return value

    rho = max(rhobeg, tol)
    X = np.vstack([x0, x0 + rho * np.eye(n)]) if n else x0.reshape(1, 0)
    F = np.empty(n + 1)
    best = 0
    converged = False
    message = ""
    try:
        for i in range(n + 1):
            F[i] = evaluate(X[i])
            if F[i] < F[best]:
                best = i
        if n == 0:
            converged = True
            raise _Budget
        probed_at = None
        probe_failed = False
        repairs = 0
        shrink = False
        while True:
            others = [i for i in range(n + 1) if i != best]
            A = X[others] - X[best]
            dF = F[others] - F[best]
            try:
                Ainv = np.linalg.inv(A)
            except np.linalg.LinAlgError:
                Ainv = None
            if Ainv is None or not np.all(np.isfinite(Ainv)):
                # degenerate simplex: rebuild around the pole
                for k, j in enumerate(others):
                    X[j] = X[best] + rho * np.eye(n)[k]
                    F[j] = evaluate(X[j])
                best = _argmin_keep(F, best)
                continue
            lengths = np.linalg.norm(A, axis=1)
            widths = 1.0 / np.linalg.norm(Ainv, axis=0)  # distance of each vertex to the opposite face
            far = lengths > _FAR * rho
            bad_geometry = bool(far.any() or (widths < _THIN * rho).any())
            g = Ainv @ dF
            gnorm = float(np.linalg.norm(g))

            if shrink:
                shrink = False
                if bad_geometry and repairs < 5 * n:
                    repairs += 1
                    k = int(np.argmax(lengths)) if far.any() else int(np.argmin(widths))
                    direction = Ainv[:, k] / np.linalg.norm(Ainv[:, k])
                    if gnorm > 0 and direction @ g > 0:
                        direction = -direction
                    j = others[k]
                    X[j] = X[best] + rho * direction
                    F[j] = evaluate(X[j])
                    best = _argmin_keep(F, best)
                    continue
                if rho <= tol:
                    converged = True
                    break
                rho *= 0.5
                if rho <= 1.5 * tol:
                    rho = tol
                repairs = 0
                continue

            if gnorm * rho <= 1e-12 * (1.0 + abs(F[best])):
                if not probe_failed and probed_at != rho:
                    probed_at = rho
                    found = _probe(evaluate, X, F, best, A, Ainv, rho)
                    if found is not None:
                        best = found
                        continue
                    probe_failed = True
                shrink = True
                continue

            step = -rho * g / gnorm
            xt = X[best] + step
            ft = evaluate(xt)
            predicted = rho * gnorm
            k = _drop_index(step, Ainv, lengths, rho)
            j = others[k]
            previous = F[best]
            X[j], F[j] = xt, ft
            if ft < previous:
                best = j
            if (previous - ft) <= _ACCEPT * predicted:
                shrink = True
    except _Budget:
        if not converged:
            message = "MaxIterExceeded"
    if converged:
        message = "trust radius reached tol"
    return OptRun(history, X[best].copy(), float(F[best]), len(history), converged, message,
                  time.perf_counter() - started)


def _argmin_keep(F, best):
    # strict improvement only, so ties keep the current pole
    j = int(np.argmin(F))
    return j if F[j] < F[best] else best


def _drop_index(step, Ainv, lengths, rho):
    # replacing vertex k scales the simplex volume by |step . Ainv[:, k]|
    score = np.abs(step @ Ainv) * np.maximum(1.0, lengths / rho)
    return int(np.argmax(score))


def _probe(evaluate, X, F, best, A, Ainv, rho):
    """Try reversed and diagonal simplex directions; insert the first strict improvement."""
    units = A / np.linalg.norm(A, axis=1, keepdims=True)
    directions = [-u for u in units]
    for a in range(len(units)):
        for b in range(a + 1, len(units)):
            for d in (units[a] + units[b], units[a] - units[b]):
                norm = np.linalg.norm(d)
                if norm > 0:
                    directions.append(d / norm)
    others = [i for i in range(len(F)) if i != best]
    lengths = np.linalg.norm(A, axis=1)
    for d in directions:
        step = rho * d
        xt = X[best] + step
        ft = evaluate(xt)
        if ft < F[best]:
            j = others[_drop_index(step, Ainv, lengths, rho)]
            X[j], F[j] = xt, ft
            return j
    return None
