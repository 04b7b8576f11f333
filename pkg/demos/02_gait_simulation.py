"""Simulate gaits and look at the resulting base-link trajectories.

Two gaits side by side:
  * a phased planar gait (the classic non-reciprocal loop in (theta1, theta2))
    that translates the swimmer along x while staying in the plane;
  * an out-of-plane gait that also bends the phi joints and produces fully
    three-dimensional motion.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from swim3d import DragParams, Gait, CoordinateSeries, Harmonic, SimConfig, integrate
from swim3d.liegroup import identity_pose

params = DragParams()
cfg = SimConfig(dt=1e-3, cycles=5, record_stride=10)

planar = Gait(
    period=1.0,
    theta1=CoordinateSeries(0.0, (Harmonic(1, 0.5, 0.0),)),
    theta2=CoordinateSeries(0.0, (Harmonic(1, 0.5, -np.pi / 2),)),
)

threed = Gait(
    period=1.0,
    theta1=CoordinateSeries(0.3, (Harmonic(1, 0.4, 0.0),)),
    phi1=CoordinateSeries(0.5, (Harmonic(1, 0.2, 1.0),)),
    theta2=CoordinateSeries(-0.2, (Harmonic(1, 0.4, -np.pi / 2),)),
    phi2=CoordinateSeries(0.6, (Harmonic(1, 0.2, 2.0),)),
)

fig = plt.figure(figsize=(11, 5))

ax = fig.add_subplot(1, 2, 1)
samples = integrate(planar, identity_pose(), params, cfg)
xy = np.array([s.pose.position[:2] for s in samples])
ax.plot(xy[:, 0], xy[:, 1])
ax.set_title(f"planar phased gait, {cfg.cycles} cycles\n"
             f"displacement per cycle = {xy[-1, 0] / cfg.cycles:.4f} L")
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.axis("equal")

ax = fig.add_subplot(1, 2, 2, projection="3d")
samples = integrate(threed, identity_pose(), params, cfg)
xyz = np.array([s.pose.position for s in samples])
ax.plot(xyz[:, 0], xyz[:, 1], xyz[:, 2])
ax.set_title("out-of-plane gait")
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.set_zlabel("z")

fig.tight_layout()
fig.savefig("gait_trajectories.png", dpi=130)
print("wrote gait_trajectories.png")
print("planar net displacement:", xy[-1])
print("3d net displacement:", xyz[-1])
