"""Gait parametrization and shape-space field tools.

Gaits are truncated Fourier series per joint coordinate. Field sampling
evaluates the local connection on a 2D slice of shape space; curvature maps
take the discrete exterior derivative (curl) of one connection row on that
slice. The Lie-bracket part of the full curvature is intentionally omitted:
the maps here are the abelian first-order approximation used for gait
sketching.
"""

from dataclasses import dataclass, field

import numpy as np

from .model import Shape, ShapeVelocity, connection_batch, SINGULARITY_THRESHOLD

COORD_NAMES = ("theta1", "phi1", "theta2", "phi2")


@dataclass(frozen=True)
class Harmonic:
    n: int
    amplitude: float
    phase: float = 0.0


@dataclass(frozen=True)
class CoordinateSeries:
    """offset + sum_j amplitude_j * cos(2 pi n_j t / T + phase_j)"""

    offset: float = 0.0
    harmonics: tuple = ()

    def value(self, tau, period):
        tau = np.asarray(tau, dtype=float)
        out = np.full(tau.shape, self.offset)
        for hm in self.harmonics:
            out = out + hm.amplitude * np.cos(2.0 * np.pi * hm.n * tau / period + hm.phase)
        return out

    def rate(self, tau, period):
        tau = np.asarray(tau, dtype=float)
        out = np.zeros(tau.shape)
        for hm in self.harmonics:
            w = 2.0 * np.pi * hm.n / period
            out = out - hm.amplitude * w * np.sin(w * tau + hm.phase)
        return out


@dataclass(frozen=True)
class Gait:
    """Periodic shape trajectory; usable directly as the integrator's shape_fn."""

    period: float
    theta1: CoordinateSeries = field(default_factory=CoordinateSeries)
    phi1: CoordinateSeries = field(default_factory=CoordinateSeries)
    theta2: CoordinateSeries = field(default_factory=CoordinateSeries)
    phi2: CoordinateSeries = field(default_factory=CoordinateSeries)

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("gait period must be positive")

    @property
    def coordinates(self):
        return {name: getattr(self, name) for name in COORD_NAMES}

    def eval_array(self, times):
        """(n,4) shapes and shape velocities; exactly periodic via mod-T."""
        tau = np.asarray(times, dtype=float) % self.period
        shapes = np.stack(
            [self.coordinates[c].value(tau, self.period) for c in COORD_NAMES], axis=-1
        )
        sdots = np.stack(
            [self.coordinates[c].rate(tau, self.period) for c in COORD_NAMES], axis=-1
        )
        return shapes, sdots

    def __call__(self, t):
        shapes, sdots = self.eval_array(np.array([t]))
        return Shape.from_array(shapes[0]), ShapeVelocity.from_array(sdots[0])


def eval_gait(gait, t):
    """Shape and its exact analytic time derivative at time t."""
    return gait(t)


@dataclass(frozen=True)
class RetracedPath:
    """Traverse a base path forward on [0, T/2] and exactly backward on
    [T/2, T]; by the scallop theorem its holonomy is trivial.

    The traversal clock is u(t) = T sin^2(pi t / T), so the shape velocity is
    smooth and vanishes at the turning points (a triangular clock would leave
    velocity kinks that degrade the integrator's order)."""

    base: Gait

    @property
    def period(self):
        return self.base.period

    def eval_array(self, times):
        T = self.period
        tau = np.asarray(times, dtype=float) % T
        u = T * np.sin(np.pi * tau / T) ** 2
        udot = np.pi * np.sin(2.0 * np.pi * tau / T)
        shapes, sdots = self.base.eval_array(u)
        return shapes, sdots * udot[..., None]

    def __call__(self, t):
        shapes, sdots = self.eval_array(np.array([t]))
        return Shape.from_array(shapes[0]), ShapeVelocity.from_array(sdots[0])


@dataclass(frozen=True)
class SliceSpec:
    """2D slice of shape space: two active coordinates on a grid, the other
    two held fixed."""

    coords: tuple
    ranges: tuple
    counts: tuple
    fixed: dict

    def __post_init__(self):
        if len(self.coords) != 2 or any(c not in COORD_NAMES for c in self.coords):
            raise ValueError(f"slice coords must be two of {COORD_NAMES}")
        if self.coords[0] == self.coords[1]:
            raise ValueError("slice coordinates must differ")
        if any(n < 2 for n in self.counts):
            raise ValueError("grid counts must be >= 2")
        missing = [c for c in COORD_NAMES if c not in self.coords and c not in self.fixed]
        if missing:
            raise ValueError(f"fixed values missing for {missing}")

    def axes(self):
        return tuple(
            np.linspace(lo, hi, n) for (lo, hi), n in zip(self.ranges, self.counts)
        )

    def grid_shapes(self):
        """(n1*n2, 4) shape array in row-major (coord0-major) node order."""
        a0, a1 = self.axes()
        g0, g1 = np.meshgrid(a0, a1, indexing="ij")
        cols = {}
        for c in COORD_NAMES:
            if c == self.coords[0]:
                cols[c] = g0.ravel()
            elif c == self.coords[1]:
                cols[c] = g1.ravel()
            else:
                cols[c] = np.full(g0.size, float(self.fixed[c]))
        return np.stack([cols[c] for c in COORD_NAMES], axis=-1)


@dataclass(frozen=True)
class FieldSlice:
    """Connection entries sampled on a slice grid.

    connection has shape (n1, n2, 6, 4); singular nodes carry NaN entries and
    are marked in `singular`.
    """

    spec: SliceSpec
    connection: np.ndarray
    condition: np.ndarray
    singular: np.ndarray


def sample_field(spec, params, connection_fn=connection_batch):
    """Evaluate the local connection at every node of the slice grid.

    `connection_fn` is replaceable so synthetic fields can be injected in
    tests and diagnostics.
    """
    shapes = spec.grid_shapes()
    conn, cond = connection_fn(shapes, params)
    n1, n2 = spec.counts
    return FieldSlice(
        spec=spec,
        connection=conn.reshape(n1, n2, 6, 4),
        condition=cond.reshape(n1, n2),
        singular=(cond > SINGULARITY_THRESHOLD).reshape(n1, n2),
    )


def curvature_of_field(fs, row):
    """Discrete curl of one connection row over the slice.

    Returns d A_{row,b} / d r_a - d A_{row,a} / d r_b on the grid (a, b the
    active coordinates, in slice order). NaN entries at singular nodes spread
    to their difference-stencil neighbours, leaving curvature undefined there.
    """
    if not 1 <= row <= 6:
        raise ValueError("row must be in 1..6")
    ia = COORD_NAMES.index(fs.spec.coords[0])
    ib = COORD_NAMES.index(fs.spec.coords[1])
    Aa = fs.connection[:, :, row - 1, ia]
    Ab = fs.connection[:, :, row - 1, ib]
    axis_a, axis_b = fs.spec.axes()
    return np.gradient(Ab, axis_a, axis=0) - np.gradient(Aa, axis_b, axis=1)


def curvature_slice(spec, params, row, connection_fn=connection_batch):
    """Sample the slice and return the curvature grid for one twist row."""
    if any(n < 3 for n in spec.counts):
        raise ValueError("curvature needs grid counts >= 3")
    return curvature_of_field(sample_field(spec, params, connection_fn), row)
