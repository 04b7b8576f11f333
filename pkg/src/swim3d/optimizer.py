"""Derivative-free gait optimization (Nelder-Mead over Fourier coefficients).

The objective is a displacement metric of the one-cycle holonomy, minus a
quadratic penalty on coordinate amplitude-bound violations. Singular shapes
hit during integration map to a large finite penalty so the simplex can
retreat instead of crashing.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import SingularConfiguration
from .gaitlab import Gait, CoordinateSeries, Harmonic, COORD_NAMES
from .reconstruct import cycle_displacement

SINGULAR_PENALTY = 1e6

TARGETS = ("x_displacement", "displacement_norm", "z_rotation")


@dataclass(frozen=True)
class Objective:
    target: str = "x_displacement"
    penalty_weight: float = 10.0
    amplitude_bound: float = np.pi / 2

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")
        if self.penalty_weight < 0 or not self.amplitude_bound > 0:
            raise ValueError("penalty_weight must be >= 0 and amplitude_bound > 0")


@dataclass(frozen=True)
class OptimizerConfig:
    max_evaluations: int = 500
    simplex_scale: float = 0.1
    tolerance: float = 1e-10
    seed: int = 0


@dataclass(frozen=True)
class OptimizeResult:
    gait: Gait
    value: float
    evaluations: int
    trace: list  # (eval index, objective, incumbent)


def _pose_metric(pose, target):
    if target == "x_displacement":
        return float(pose.position[0])
    if target == "displacement_norm":
        return float(np.linalg.norm(pose.position))
    R = pose.rotation
    return float(np.arctan2(R[1, 0] - R[0, 1], R[0, 0] + R[1, 1]))


def _amplitude_reach(series):
    return abs(series.offset) + sum(abs(h.amplitude) for h in series.harmonics)


def evaluate_objective(gait, obj, params, cfg):
    """Target metric of the one-cycle displacement minus bound penalties."""
    penalty = 0.0
    for name in COORD_NAMES:
        excess = _amplitude_reach(getattr(gait, name)) - obj.amplitude_bound
        if excess > 0:
            penalty += excess**2
    try:
        pose = cycle_displacement(gait, params, cfg)
    except SingularConfiguration:
        return -SINGULAR_PENALTY - obj.penalty_weight * penalty
    return _pose_metric(pose, obj.target) - obj.penalty_weight * penalty


def flatten_gait(gait, free_coordinates):
    """Parameter vector (offset, then amplitude/phase per harmonic, per free
    coordinate) and a rebuild function."""
    x0 = []
    layout = []
    for name in free_coordinates:
        series = getattr(gait, name)
        x0.append(series.offset)
        layout.append((name, len(series.harmonics)))
        for hm in series.harmonics:
            x0.extend([hm.amplitude, hm.phase])

    def rebuild(x):
        fields = {}
        i = 0
        for name, nh in layout:
            base = getattr(gait, name)
            offset = float(x[i])
            i += 1
            harmonics = []
            for hm in base.harmonics:
                harmonics.append(Harmonic(hm.n, float(x[i]), float(x[i + 1])))
                i += 2
            fields[name] = CoordinateSeries(offset, tuple(harmonics))
        return replace(gait, **fields)

    return np.array(x0), rebuild


def nelder_mead(f, x0, scale, max_evals, tol, seed=0):
    """Maximize f with the standard simplex moves (reflection 1, expansion 2,
    contraction 0.5, shrink 0.5). Returns (best x, best f, evals, trace)."""
    rng = np.random.default_rng(seed)
    dim = len(x0)
    trace = []
    evals = 0
    best = [None, -np.inf]

    def g(x):
        nonlocal evals
        value = f(x)
        evals += 1
        if value > best[1]:
            best[0], best[1] = np.array(x), value
        trace.append((evals, value, best[1]))
        return value

    simplex = [np.array(x0, dtype=float)]
    for i in range(dim):
        v = np.array(x0, dtype=float)
        v[i] += scale * (1.0 + 0.05 * rng.standard_normal())
        simplex.append(v)
    values = [g(v) for v in simplex]

    while evals < max_evals:
        order = np.argsort(values)[::-1]  # descending: best first
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[0] - values[-1] < tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = g(xr)
        if fr > values[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = g(xe)
            if fe > fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr > values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = g(xc)
            if fc > values[-1]:
                simplex[-1], values[-1] = xc, fc
            else:
                for i in range(1, dim + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = g(simplex[i])
        if evals >= max_evals:
            break
    return best[0], best[1], evals, trace


def optimize_gait(initial, obj, ocfg, params, scfg, free_coordinates=None):
    """Nelder-Mead search over the Fourier coefficients of the free
    coordinates (all four by default)."""
    if free_coordinates is None:
        free_coordinates = list(COORD_NAMES)
    x0, rebuild = flatten_gait(initial, free_coordinates)
    if len(x0) == 0:
        raise ValueError("no free parameters to optimize")
    if ocfg.max_evaluations < len(x0) + 2:
        raise ValueError("max_evaluations must be at least dimension + 2")

    def f(x):
        return evaluate_objective(rebuild(x), obj, params, scfg)

    initial_value = f(x0)
    xb, fb, evals, trace = nelder_mead(
        f, x0, ocfg.simplex_scale, ocfg.max_evaluations, ocfg.tolerance, ocfg.seed
    )
    evals += 1  # the initial-gait evaluation above
    if fb >= initial_value:
        return OptimizeResult(rebuild(xb), fb, evals, trace)
    return OptimizeResult(initial, initial_value, evals, trace)
