"""Two structural sanity experiments.

1. Scallop theorem: a shape path traversed forward and then exactly backward
   produces no net motion, however contorted the path. The holonomy of a
   retraced loop collapses to identity because the body twist is linear in
   the shape rate.

2. Integrator order: the Lie-group RK4 update converges at fourth order in
   the step size, measured on a smooth out-of-plane gait against a fine-step
   reference.
"""

import numpy as np

from swim3d import DragParams, Gait, CoordinateSeries, Harmonic, RetracedPath, SimConfig
from swim3d.liegroup import identity_pose, pose_distance
from swim3d.reconstruct import cycle_displacement
from swim3d.checks import random_safe_gait

params = DragParams()

print("-- scallop theorem --")
rng = np.random.default_rng(42)
for i in range(5):
    path = RetracedPath(random_safe_gait(rng))
    pose = cycle_displacement(path, params, SimConfig(dt=path.period / 2000))
    print(f"random retraced path {i}: residual displacement "
          f"{pose_distance(identity_pose(), pose):.2e}")

print()
print("-- integrator convergence order --")
gait = Gait(
    period=1.0,
    theta1=CoordinateSeries(0.3, (Harmonic(1, 0.4, 0.0),)),
    phi1=CoordinateSeries(0.5, (Harmonic(1, 0.2, 1.0),)),
    theta2=CoordinateSeries(-0.2, (Harmonic(1, 0.4, -np.pi / 2),)),
    phi2=CoordinateSeries(0.6, (Harmonic(1, 0.2, 2.0),)),
)
reference = cycle_displacement(gait, params, SimConfig(dt=1 / 8000))
previous = None
for n in (50, 100, 200, 400):
    err = pose_distance(reference, cycle_displacement(gait, params, SimConfig(dt=1 / n)))
    order = f"  order {np.log2(previous / err):.2f}" if previous else ""
    print(f"dt = T/{n:<4d} error {err:.3e}{order}")
    previous = err
