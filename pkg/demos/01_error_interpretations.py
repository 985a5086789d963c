"""
One error, several readings
===========================

The normalized epipolar error of a ray pair can be read as a volume, as a
distance between rays, as a product of sines of angles, or as the cost of the
cheapest angular correction. This script builds one observation and prints
each reading next to the error itself.
"""

import numpy as np

from epigeom import ObservationPair, RelativePose, full_breakdown, normalized_epipolar_error

# a camera pair a unit apart along x, camera 1 turned 10 degrees about y
a = np.deg2rad(10.0)
R = np.array([[np.cos(a), 0, np.sin(a)], [0, 1, 0], [-np.sin(a), 0, np.cos(a)]])
pose = RelativePose(R, [1.0, 0.0, 0.0])

# two rays that nearly, but not exactly, meet
obs = ObservationPair([0.05, 0.02, 1.0], [-0.1, 0.03, 1.0])

e_hat = normalized_epipolar_error(pose, obs)
print(f"e_hat = {e_hat:.6e}")

# every interpretation, with the value of e_hat it implies
b = full_breakdown(pose, obs)
for name, value in b.estimates().items():
    print(f"  from {name:<18s} {value:.6e}   diff {abs(value - e_hat):.1e}")

# the raw quantities behind them
print(f"volume         {b.volume:.6e}")
print(f"ray distance   {b.ray_distance:.6e}")
print(f"parallax (deg) {np.rad2deg(b.parallax):.4f}")
print(f"L1 angle (deg) {np.rad2deg(b.theta_l1):.6f}")
