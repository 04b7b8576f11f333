"""Swimmer physics: drag matrix, link Jacobians, force transforms, and the
local connection obtained from the zero-net-wrench balance.

Geometry convention: base-link frame at its center of mass, x-axis along the
link, half length L (each link has length 2L). Ball joints sit at (+L, 0, 0)
and (-L, 0, 0). Outer link i carries the composite rotation
rot_z(theta_i) @ rot_y(phi_i) relative to the base frame; link 1 extends
outward along the rotated +x direction, link 2 along the rotated -x direction.

The drag balance reads  omega1 xi0 = omega2 rdot,  where

    omega1 = A + [T1 A B1]_{6x6} + [T2 A B2]_{6x6}
    omega2 = -[[T1 A B1]_{6x2}  [T2 A B2]_{6x2}]

The minus sign in omega2 is required for the net wrench to vanish at
xi0 = omega1^{-1} omega2 rdot; ``net_wrench`` is the arbiter.

Everything here is a pure function of its inputs. The ``*_batch`` helpers
evaluate over a leading batch axis and are the fast path used by the
integrator and the field sampler.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SingularConfiguration
from .liegroup import GroupPose, BodyTwist, link_rotation, hat3

SINGULARITY_THRESHOLD = 1e12


@dataclass(frozen=True)
class DragParams:
    """Differential viscous drag constant k and half link length L."""

    k: float = 1.0
    L: float = 1.0

    def __post_init__(self):
        if not (self.k > 0 and self.L > 0):
            raise ValueError("drag parameters k and L must be positive")


@dataclass(frozen=True)
class Shape:
    """Joint angles (theta1, phi1, theta2, phi2), radians."""

    theta1: float
    phi1: float
    theta2: float
    phi2: float

    def as_array(self):
        return np.array([self.theta1, self.phi1, self.theta2, self.phi2])

    @staticmethod
    def from_array(r):
        return Shape(*(float(x) for x in r))


@dataclass(frozen=True)
class ShapeVelocity:
    """Joint angle rates (dtheta1, dphi1, dtheta2, dphi2), rad/time."""

    dtheta1: float
    dphi1: float
    dtheta2: float
    dphi2: float

    def as_array(self):
        return np.array([self.dtheta1, self.dphi1, self.dtheta2, self.dphi2])

    @staticmethod
    def from_array(rdot):
        return ShapeVelocity(*(float(x) for x in rdot))


@dataclass(frozen=True)
class LocalConnection:
    """6x4 map from shape velocity to base body twist at a given shape."""

    matrix: np.ndarray
    shape: Shape
    condition: float


@dataclass(frozen=True)
class Wrench:
    """Force and moment in the base-link frame."""

    force: np.ndarray
    moment: np.ndarray

    def as_array(self):
        return np.concatenate([self.force, self.moment])


def drag_matrix(params):
    """Per-link drag matrix diag(kL, 2kL, 2kL, 0, 2/3 kL^3, 2/3 kL^3).

    Row 4 (roll about the link axis) is exactly zero: an infinitesimally thin
    member has no roll drag.
    """
    k, L = params.k, params.L
    return np.diag([k * L, 2 * k * L, 2 * k * L, 0.0, 2.0 / 3.0 * k * L**3, 2.0 / 3.0 * k * L**3])


def _outward_sign(link_index):
    if link_index not in (1, 2):
        raise ValueError("link_index must be 1 or 2")
    return 1.0 if link_index == 1 else -1.0


def link_pose(shape, link_index, params=DragParams()):
    """Pose of outer link `link_index`'s COM frame relative to the base frame."""
    L = params.L
    s = _outward_sign(link_index)
    if link_index == 1:
        R = link_rotation(shape.theta1, shape.phi1)
    else:
        R = link_rotation(shape.theta2, shape.phi2)
    p = np.array([s * L, 0.0, 0.0]) + s * L * R[:, 0]
    return GroupPose(R, p)


def _joint_rate_map(phi):
    """Columns mapping (thetadot, phidot) to the relative angular velocity
    expressed in the outer link's frame: vee(R^T Rdot)."""
    return np.array([[np.sin(phi), 0.0], [0.0, -1.0], [np.cos(phi), 0.0]])


def link_jacobian(shape, link_index, params=DragParams()):
    """6x8 matrix B_i taking (xi0; thetadot_i, phidot_i) to the link-i twist
    in link i's own frame."""
    L = params.L
    s = _outward_sign(link_index)
    pose = link_pose(shape, link_index, params)
    R, p = pose.rotation, pose.position
    phi = shape.phi1 if link_index == 1 else shape.phi2

    B = np.zeros((6, 8))
    Rt = R.T
    B[:3, :3] = Rt
    B[:3, 3:6] = -Rt @ hat3(p)
    B[3:, 3:6] = Rt
    J = _joint_rate_map(phi)
    B[3:, 6:8] = J
    # COM velocity from joint rotation: s*L * (omega_rel x e_x) in link frame
    ex = np.array([1.0, 0.0, 0.0])
    B[:3, 6] = s * L * np.cross(J[:, 0], ex)
    B[:3, 7] = s * L * np.cross(J[:, 1], ex)
    return B


def force_transform(shape, link_index, params=DragParams()):
    """6x6 matrix T_i taking a link-frame wrench to the base frame."""
    pose = link_pose(shape, link_index, params)
    R, p = pose.rotation, pose.position
    T = np.zeros((6, 6))
    T[:3, :3] = R
    T[3:, 3:] = R
    T[3:, :3] = hat3(p) @ R
    return T


# -- batched assembly ---------------------------------------------------------


def _batch_hat(v):
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def _batch_link(theta, phi, sign, L):
    """Rotation, COM position, B and T blocks for one outer link, batched."""
    n = theta.shape[0]
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    R = np.empty((n, 3, 3))
    R[:, 0, 0] = ct * cp
    R[:, 0, 1] = -st
    R[:, 0, 2] = -ct * sp
    R[:, 1, 0] = st * cp
    R[:, 1, 1] = ct
    R[:, 1, 2] = -st * sp
    R[:, 2, 0] = sp
    R[:, 2, 1] = 0.0
    R[:, 2, 2] = cp

    p = np.empty((n, 3))
    p[:, 0] = sign * L * (1.0 + ct * cp)
    p[:, 1] = sign * L * st * cp
    p[:, 2] = sign * L * sp

    Rt = np.swapaxes(R, 1, 2)
    phat = _batch_hat(p)

    B = np.zeros((n, 6, 8))
    B[:, :3, :3] = Rt
    B[:, :3, 3:6] = -Rt @ phat
    B[:, 3:, 3:6] = Rt
    # joint-rate map J = vee(R^T Rdot) columns for (thetadot, phidot)
    B[:, 3, 6] = sp
    B[:, 5, 6] = cp
    B[:, 4, 7] = -1.0
    # cross(J_col, e_x): (a,b,c) x e_x = (0, c, -b)
    B[:, 1, 6] = sign * L * cp
    B[:, 2, 7] = sign * L

    T = np.zeros((n, 6, 6))
    T[:, :3, :3] = R
    T[:, 3:, 3:] = R
    T[:, 3:, :3] = phat @ R
    return B, T


def omega_matrices_batch(shapes, params):
    """omega1 (n,6,6) and omega2 (n,6,4) for an (n,4) array of shapes."""
    shapes = np.atleast_2d(np.asarray(shapes, dtype=float))
    n = shapes.shape[0]
    adiag = np.diag(drag_matrix(params))

    omega1 = np.zeros((n, 6, 6))
    omega1[:] = np.diag(adiag)
    omega2 = np.zeros((n, 6, 4))
    for i, sign in ((1, 1.0), (2, -1.0)):
        th = shapes[:, 0] if i == 1 else shapes[:, 2]
        ph = shapes[:, 1] if i == 1 else shapes[:, 3]
        B, T = _batch_link(th, ph, sign, params.L)
        TAB = T @ (adiag[None, :, None] * B)
        omega1 += TAB[:, :, :6]
        omega2[:, :, 2 * (i - 1) : 2 * i] = -TAB[:, :, 6:8]
    return omega1, omega2


def omega_matrices(shape, params):
    """omega1 (6x6) and omega2 (6x4) of the drag balance at one shape."""
    o1, o2 = omega_matrices_batch(shape.as_array()[None, :], params)
    return o1[0], o2[0]


def connection_batch(shapes, params):
    """Batched local connection.

    Returns (conn (n,6,4), cond (n,)); singular nodes (cond above the
    threshold) carry NaN connection entries instead of raising.
    """
    shapes = np.atleast_2d(np.asarray(shapes, dtype=float))
    omega1, omega2 = omega_matrices_batch(shapes, params)
    sv = np.linalg.svd(omega1, compute_uv=False)
    with np.errstate(divide="ignore"):
        cond = np.where(sv[:, -1] > 0.0, sv[:, 0] / sv[:, -1], np.inf)
    conn = np.full(omega2.shape, np.nan)
    ok = cond <= SINGULARITY_THRESHOLD
    if np.any(ok):
        conn[ok] = np.linalg.solve(omega1[ok], omega2[ok])
    return conn, cond


def local_connection(shape, params):
    """Local connection at one shape; raises on singular configurations."""
    conn, cond = connection_batch(shape.as_array()[None, :], params)
    c = float(cond[0])
    if c > SINGULARITY_THRESHOLD:
        raise SingularConfiguration(
            f"drag balance singular at shape {shape} (condition {c:.3g})",
            shape=shape,
            condition=c,
        )
    return LocalConnection(conn[0], shape, c)


def body_velocity(shape, sdot, params):
    """Base-link twist xi0 determined by the shape motion."""
    conn = local_connection(shape, params)
    return BodyTwist.from_array(conn.matrix @ sdot.as_array())


def net_wrench(shape, sdot, xi0, params):
    """Total drag wrench on the system, base frame, for the given motion.

    Vanishes exactly when xi0 is the force-equilibrium twist; used as the
    test oracle for the connection assembly.
    """
    omega1, omega2 = omega_matrices(shape, params)
    F = omega1 @ xi0.as_array() - omega2 @ sdot.as_array()
    return Wrench(F[:3], F[3:])
