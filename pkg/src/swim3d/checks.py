"""Self-diagnostic invariant suite backing `swim3d check`.

Each check returns (name, passed, measured residual, tolerance). The suite is
seeded and deterministic.
"""

import numpy as np

from . import liegroup as lg
from .model import (
    DragParams,
    Shape,
    ShapeVelocity,
    body_velocity,
    link_jacobian,
    link_pose,
    local_connection,
    omega_matrices,
)
from .gaitlab import Gait, CoordinateSeries, Harmonic, RetracedPath
from .reconstruct import SimConfig, cycle_displacement


def _random_nonsingular_shapes(rng, n):
    theta = rng.uniform(-np.pi, np.pi, (n, 2))
    phi = rng.uniform(0.1, 1.4, (n, 2)) * rng.choice([-1.0, 1.0], (n, 2))
    return np.stack([theta[:, 0], phi[:, 0], theta[:, 1], phi[:, 1]], axis=-1)


def check_force_balance(params=DragParams(), n=1000, seed=0, flip_omega2_sign=False):
    """Net wrench at the connection-determined twist vanishes."""
    rng = np.random.default_rng(seed)
    shapes = _random_nonsingular_shapes(rng, n)
    worst = 0.0
    scale = params.k * params.L**2
    for r in shapes:
        shape = Shape.from_array(r)
        rdot = rng.normal(size=4)
        rdot /= np.linalg.norm(rdot)
        sdot = ShapeVelocity.from_array(rdot)
        xi0 = body_velocity(shape, sdot, params).as_array()
        o1, o2 = omega_matrices(shape, params)
        if flip_omega2_sign:
            o2 = -o2
        residual = np.linalg.norm(o1 @ xi0 - o2 @ rdot) / scale
        worst = max(worst, residual)
    return ("force_balance", worst <= 1e-9, worst, 1e-9)


def fd_link_twist(shape, sdot, xi0, link_index, params, eps=1e-6):
    """Finite-difference oracle for the link twist: differentiate the world
    pose of the link along the motion, independent of link_jacobian."""
    r = shape.as_array()
    rd = sdot.as_array()

    def world(s):
        g = lg.exp_se3(xi0, s) if s != 0.0 else lg.identity_pose()
        return lg.compose(g, link_pose(Shape.from_array(r + s * rd), link_index, params))

    gp, gm, gc = world(eps), world(-eps), world(0.0)
    Rdot = (gp.rotation - gm.rotation) / (2.0 * eps)
    pdot = (gp.position - gm.position) / (2.0 * eps)
    return np.concatenate([gc.rotation.T @ pdot, lg.vee3(gc.rotation.T @ Rdot)])


def check_jacobian_oracle(params=DragParams(), n=200, seed=1):
    """B1/B2 agree with finite differences of link poses."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        shape = Shape.from_array(rng.uniform(-1.3, 1.3, 4))
        sdot = ShapeVelocity.from_array(rng.normal(size=4))
        xi0 = lg.BodyTwist(rng.normal(size=3), rng.normal(size=3))
        for link in (1, 2):
            B = link_jacobian(shape, link, params)
            rates = (
                [sdot.dtheta1, sdot.dphi1] if link == 1 else [sdot.dtheta2, sdot.dphi2]
            )
            pred = B @ np.concatenate([xi0.as_array(), rates])
            ref = fd_link_twist(shape, sdot, xi0, link, params)
            err = np.max(np.abs(pred - ref)) / max(1.0, np.max(np.abs(ref)))
            worst = max(worst, err)
    return ("jacobian_fd_oracle", worst <= 1e-5, worst, 1e-5)


def random_safe_gait(rng, period=1.0, harmonics=2):
    """Random Fourier gait kept away from the collinear singular shapes by
    phi offsets that dominate the phi amplitudes."""
    def series(lo, hi, amp):
        return CoordinateSeries(
            offset=rng.uniform(lo, hi),
            harmonics=tuple(
                Harmonic(n + 1, amp * rng.uniform(0.3, 1.0), rng.uniform(0, 2 * np.pi))
                for n in range(harmonics)
            ),
        )

    return Gait(
        period=period,
        theta1=series(-0.5, 0.5, 0.3),
        phi1=series(0.4, 0.8, 0.1),
        theta2=series(-0.5, 0.5, 0.3),
        phi2=series(0.4, 0.8, 0.1),
    )


def check_scallop(params=DragParams(), n_paths=5, seed=2, dt_fraction=2000):
    """Retraced shape paths give identity holonomy."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_paths):
        path = RetracedPath(random_safe_gait(rng))
        cfg = SimConfig(dt=path.period / dt_fraction)
        pose = cycle_displacement(path, params, cfg)
        worst = max(worst, lg.pose_distance(lg.identity_pose(), pose))
    return ("scallop_theorem", worst <= 1e-8, worst, 1e-8)


def check_planar_closure(params=DragParams(), n=200, seed=3):
    """phi = 0 shapes with planar rates keep (v_z, w_x, w_y) at zero."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        th = rng.uniform(-1.2, 1.2, 2)
        if max(abs(th)) < 0.05:
            th[0] += 0.3
        shape = Shape(th[0], 0.0, th[1], 0.0)
        sdot = ShapeVelocity(rng.normal(), 0.0, rng.normal(), 0.0)
        xi = body_velocity(shape, sdot, params)
        worst = max(
            worst,
            abs(xi.linear[2]),
            abs(xi.angular[0]),
            abs(xi.angular[1]),
        )
    return ("planar_closure", worst <= 1e-10, worst, 1e-10)


def check_k_invariance(n=100, seed=4):
    """The connection does not depend on the drag constant k."""
    rng = np.random.default_rng(seed)
    shapes = _random_nonsingular_shapes(rng, n)
    worst = 0.0
    for r in shapes:
        shape = Shape.from_array(r)
        c1 = local_connection(shape, DragParams(k=1.0)).matrix
        c2 = local_connection(shape, DragParams(k=7.3)).matrix
        worst = max(worst, np.max(np.abs(c1 - c2)))
    return ("k_invariance", worst <= 1e-12, worst, 1e-12)


def run_all(flip_omega2_sign=False):
    return [
        check_force_balance(flip_omega2_sign=flip_omega2_sign),
        check_jacobian_oracle(),
        check_scallop(),
        check_planar_closure(),
        check_k_invariance(),
    ]
