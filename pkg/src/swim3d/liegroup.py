"""SO(3)/SE(3) primitives: elementary rotations, hat/vee maps, exponentials,
pose composition and the adjoint.

All rotations are plain 3x3 numpy arrays; poses are ``GroupPose`` (rotation +
position of the base-link center of mass). Twists are ordered
(v_x, v_y, v_z, w_x, w_y, w_z), linear part first.

Note on ``rot_y``: the convention used here has rot_y(a) @ e_x = (cos a, 0,
sin a), i.e. the transpose of the right-handed rotation about +y. It is kept
because the outer-link lever arm (L + L cos(phi) cos(theta), L cos(phi)
sin(theta), L sin(phi)) follows from rot_z(theta) @ rot_y(phi) with exactly
this form. ``exp_so3`` is the standard Rodrigues map, so
exp_so3((0, -a, 0)) == rot_y(a).
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GroupPose:
    """Rigid-body pose: rotation matrix and position vector."""

    rotation: np.ndarray
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=float))
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))


@dataclass(frozen=True)
class BodyTwist:
    """Velocity of a rigid body in its own frame: (linear; angular)."""

    linear: np.ndarray
    angular: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear", np.asarray(self.linear, dtype=float))
        object.__setattr__(self, "angular", np.asarray(self.angular, dtype=float))

    def as_array(self):
        return np.concatenate([self.linear, self.angular])

    @staticmethod
    def from_array(xi):
        xi = np.asarray(xi, dtype=float)
        return BodyTwist(xi[:3], xi[3:6])


def identity_pose():
    return GroupPose(np.eye(3), np.zeros(3))


def rot_y(angle):
    """Elementary y-rotation, rot_y(a) @ e_x = (cos a, 0, sin a)."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot_z(angle):
    """Right-handed rotation about +z."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def link_rotation(theta, phi):
    """Composite outer-link orientation: z-rotation by theta, then y by phi.

    Maps the base-link x-axis to the outer link's longitudinal axis
    (cos(theta) cos(phi), sin(theta) cos(phi), sin(phi)).
    """
    return rot_z(theta) @ rot_y(phi)


def hat3(v):
    """so(3) hat map: hat3(v) @ w == cross(v, w)."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee3(m):
    """Inverse of hat3 for a skew matrix."""
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_so3(omega):
    """Rodrigues formula for the SO(3) exponential."""
    omega = np.asarray(omega, dtype=float)
    angle = np.linalg.norm(omega)
    K = hat3(omega)
    if angle < 1e-12:
        # second-order series; error O(angle^3) below roundoff
        return np.eye(3) + K + 0.5 * (K @ K)
    return np.eye(3) + (np.sin(angle) / angle) * K + ((1.0 - np.cos(angle)) / angle**2) * (K @ K)


def log_so3(R):
    """Rotation vector of R (inverse of exp_so3, angle in [0, pi])."""
    cos_angle = np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)
    angle = np.arccos(cos_angle)
    if angle < 1e-8:
        return vee3(R - R.T) / 2.0
    if np.pi - angle < 1e-6:
        # near pi: extract axis from the symmetric part
        S = (R + np.eye(3)) / 2.0
        axis = np.sqrt(np.clip(np.diag(S), 0.0, None))
        # fix signs from off-diagonal entries
        k = int(np.argmax(axis))
        axis = S[:, k] / axis[k]
        axis = axis / np.linalg.norm(axis)
        return angle * axis
    return angle * vee3(R - R.T) / (2.0 * np.sin(angle))


def _se3_V(omega):
    """Left Jacobian V with exp([hat(w) v; 0 0]) = [R, V v; 0 1]."""
    angle = np.linalg.norm(omega)
    K = hat3(omega)
    if angle < 1e-8:
        return np.eye(3) + 0.5 * K + (K @ K) / 6.0
    return (
        np.eye(3)
        + ((1.0 - np.cos(angle)) / angle**2) * K
        + ((angle - np.sin(angle)) / angle**3) * (K @ K)
    )


def exp_se3(xi, dt):
    """Closed-form SE(3) exponential of the scaled twist dt * xi."""
    v = dt * np.asarray(xi.linear, dtype=float)
    w = dt * np.asarray(xi.angular, dtype=float)
    return GroupPose(exp_so3(w), _se3_V(w) @ v)


def compose(g1, g2):
    """Group product: (R1 R2, R1 p2 + p1)."""
    return GroupPose(g1.rotation @ g2.rotation, g1.rotation @ g2.position + g1.position)


def inverse(g):
    Rt = g.rotation.T
    return GroupPose(Rt, -Rt @ g.position)


def adjoint(g):
    """6x6 adjoint acting on (linear; angular) twist coordinates."""
    ad = np.zeros((6, 6))
    ad[:3, :3] = g.rotation
    ad[3:, 3:] = g.rotation
    ad[:3, 3:] = hat3(g.position) @ g.rotation
    return ad


def quaternion_from_rotation(R):
    """Unit quaternion (w, x, y, z), Hamilton convention, scalar first."""
    t = np.trace(R)
    if t > 0.0:
        s = np.sqrt(t + 1.0) * 2.0
        return np.array(
            [0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
        )
    i = int(np.argmax(np.diag(R)))
    if i == 0:
        s = np.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        q = [(R[2, 1] - R[1, 2]) / s, 0.25 * s, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s]
    elif i == 1:
        s = np.sqrt(1.0 - R[0, 0] + R[1, 1] - R[2, 2]) * 2.0
        q = [(R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, 0.25 * s, (R[1, 2] + R[2, 1]) / s]
    else:
        s = np.sqrt(1.0 - R[0, 0] - R[1, 1] + R[2, 2]) * 2.0
        q = [(R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, 0.25 * s]
    q = np.asarray(q)
    return q / np.linalg.norm(q)


def pose_distance(g1, g2):
    """Crude metric: position distance + rotation angle between poses."""
    rel = compose(inverse(g1), g2)
    return np.linalg.norm(rel.position) + np.linalg.norm(log_so3(rel.rotation))
