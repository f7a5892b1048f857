"""Search for extremal Bell-CH violations over analyzer angles.

Every probability is invariant under ``chi -> chi + pi``, so angles live in
``[0, pi)``.  The grid search is exhaustive and vectorised; refinement is a
compass (pattern) search that halves its step whenever no axis move helps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .amplitude import ProcessKind
from .bell import AngleQuad, Verdict, classify, s_statistic, s_value
from .closed_form import Which, joint, marginal
from .errors import InputValidationError
from .kinematics import check_beta

MIN_STEP = 1e-7


class Objective(enum.Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"

    @classmethod
    def parse(cls, value) -> Objective:
        if isinstance(value, cls):
            return value
        v = str(value).lower()[:3]
        if v not in ("min", "max"):
            raise InputValidationError(f"objective must be 'min' or 'max', got {value!r}")
        return cls(v)

    @property
    def sign(self) -> float:
        # Internally everything is minimised.
        return -1.0 if self is Objective.MAXIMIZE else 1.0


class Direction(enum.Enum):
    ABOVE = "above"
    BELOW = "below"

    @classmethod
    def parse(cls, value) -> Direction:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InputValidationError(f"direction must be 'above' or 'below', got {value!r}") from None

    @property
    def verdict(self) -> Verdict:
        return Verdict.VIOLATES_ABOVE if self is Direction.ABOVE else Verdict.VIOLATES_BELOW


@dataclass(frozen=True)
class SearchConfig:
    grid_points_per_angle: int = 24
    refine_iterations: int = 200
    refine_initial_step: float = math.radians(5.0)
    objective: Objective = Objective.MINIMIZE

    def __post_init__(self):
        object.__setattr__(self, "objective", Objective.parse(self.objective))
        if self.grid_points_per_angle < 4:
            raise InputValidationError("grid_points_per_angle must be >= 4")
        if self.refine_iterations < 0:
            raise InputValidationError("refine_iterations must be >= 0")
        if not self.refine_initial_step > 0:
            raise InputValidationError("refine_initial_step must be positive")


@dataclass(frozen=True)
class SearchResult:
    best_quad: AngleQuad
    best_s: float
    beta: float
    process: ProcessKind
    objective: Objective
    trace: tuple[tuple[int, float], ...] = field(default_factory=tuple)


def angle_grid(points: int) -> np.ndarray:
    return np.arange(points) * (math.pi / points)


def grid_s_values(process, beta: float, grid: np.ndarray) -> np.ndarray:
    """``S[i, j, k, l]`` for ``(chi1, chi2, chi1', chi2') = grid[[i, j, k, l]]``."""
    a = grid[:, None]
    b = grid[None, :]
    jm = np.asarray(joint(process, beta, a, b), dtype=float)
    m1 = np.asarray(marginal(process, beta, grid, Which.FIRST), dtype=float)
    m2 = np.asarray(marginal(process, beta, grid, Which.SECOND), dtype=float)
    i, j, k, l = np.ix_(*(np.arange(grid.size),) * 4)
    return jm[i, j] - jm[i, l] + jm[k, j] + jm[k, l] - m1[k] - m2[j]


def grid_search(process, beta: float, cfg: SearchConfig | None = None) -> SearchResult:
    """Exhaustive search over ``[0, pi)^4``; ties go to the lexicographically smallest quad."""
    cfg = cfg or SearchConfig()
    process = ProcessKind.parse(process)
    beta = check_beta(beta)
    grid = angle_grid(cfg.grid_points_per_angle)
    values = grid_s_values(process, beta, grid)
    # argmin/argmax return the first extremum in C order, i.e. the smallest quad.
    flat = np.argmin(values) if cfg.objective is Objective.MINIMIZE else np.argmax(values)
    idx = np.unravel_index(flat, values.shape)
    quad = AngleQuad(*(float(grid[n]) for n in idx))
    best = s_statistic(process, beta, quad).s
    return SearchResult(quad, best, beta, process, cfg.objective, ((0, best),))


def _wrap(quad) -> AngleQuad:
    return AngleQuad(*(float(a % math.pi) for a in quad))


def refine(process, beta: float, start: AngleQuad, cfg: SearchConfig | None = None) -> SearchResult:
    """Compass search from ``start``; never returns anything worse than ``start``."""
    cfg = cfg or SearchConfig()
    process = ProcessKind.parse(process)
    beta = check_beta(beta)
    sign = cfg.objective.sign
    x = [float(a) for a in start]
    if not all(math.isfinite(a) for a in x):
        raise InputValidationError("start angles must be finite")

    def f(v):
        return sign * float(s_value(process, beta, *v))

    best = f(x)
    trace = [(0, sign * best)]
    step = cfg.refine_initial_step
    for it in range(1, cfg.refine_iterations + 1):
        if step < MIN_STEP:
            break
        moved = False
        for axis in range(4):
            for delta in (step, -step):
                trial = list(x)
                trial[axis] += delta
                val = f(trial)
                if val < best:
                    x, best, moved = trial, val, True
                    break
        if moved:
            trace.append((it, sign * best))
        else:
            step *= 0.5
    quad = _wrap(x)
    s = s_statistic(process, beta, quad).s
    return SearchResult(quad, s, beta, process, cfg.objective, tuple(trace))


def search(process, beta: float, cfg: SearchConfig | None = None) -> SearchResult:
    """Grid search followed by refinement from the best grid point."""
    cfg = cfg or SearchConfig()
    coarse = grid_search(process, beta, cfg)
    fine = refine(process, beta, coarse.best_quad, cfg)
    better = fine if cfg.objective.sign * fine.best_s <= cfg.objective.sign * coarse.best_s else coarse
    trace = coarse.trace + tuple((it, s) for it, s in fine.trace[1:])
    return SearchResult(better.best_quad, better.best_s, better.beta, better.process, cfg.objective, trace)


def violation_frontier(process, q: AngleQuad, direction, *, tol: float = 1e-6, scan_points: int = 201):
    """Largest beta at which ``q`` still violates the bound in ``direction``.

    A uniform scan brackets the last violating beta, then bisection narrows it
    to ``tol``.  Returns ``None`` when ``beta = 0`` already satisfies the bound
    and ``1.0`` when the violation persists up to ``beta = 1``.
    """
    process = ProcessKind.parse(process)
    direction = Direction.parse(direction)
    if scan_points < 2:
        raise InputValidationError("scan_points must be >= 2")

    def violates(b):
        return classify(s_statistic(process, b, q).s) is direction.verdict

    if not violates(0.0):
        return None
    betas = np.linspace(0.0, 1.0, scan_points)
    flags = [violates(float(b)) for b in betas]
    if flags[-1]:
        return 1.0
    last = max(i for i, v in enumerate(flags) if v)
    lo, hi = float(betas[last]), float(betas[last + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if violates(mid):
            lo = mid
        else:
            hi = mid
    return lo
