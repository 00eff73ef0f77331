"""Widened interference nulls against angle estimation error.

A point null is razor thin: a one-degree estimation error walks the true
interferer off it entirely.  The robust design spends reflection gain to
cap a whole elevation interval instead.
"""

import math

import numpy as np

from risswpcn import (
    AngleTriple,
    SourceGeometry,
    UpaGeometry,
    UplinkScenario,
    build_eli,
    build_robust,
    spatial_frequencies,
    steer_upa,
)
from risswpcn.uplink import device_steering

sc = UplinkScenario(
    geometry=UpaGeometry(16, 16),
    hap_antennas=4,
    angles_g=AngleTriple(math.pi / 2, math.radians(17.2), math.radians(22.9)),
    target=SourceGeometry(AngleTriple(math.pi / 2, math.radians(12.1)), 10.0, 15.5e-3),
    interferers=[SourceGeometry(AngleTriple(math.pi / 2, math.radians(21.3)), 10.0, 15.5e-3)],
    noise_power=1e-11,
    suppression_caps=[0.01],
)

point = build_eli(sc, sc.true_estimates(), max_iterations=1500)
wide = build_robust(sc, sc.true_estimates(), delta=math.radians(1.0), grid_l=11,
                    max_iterations=1500)

fg = spatial_frequencies(sc.angles_g)
alpha_g = steer_upa(sc.geometry, fg.vartheta, fg.phi)
print("reflected gain toward elevations around the interferer (dB, 4*|a^T theta|^2):")
print(f"{'elevation':>10} {'point null':>12} {'widened null':>13}")
for ele in np.arange(20.3, 22.31, 0.25):
    a = device_steering(sc.geometry, AngleTriple(math.pi / 2, math.radians(ele)))
    row = []
    for cfg in (point, wide):
        theta_h = cfg.theta / alpha_g.conj()
        row.append(10 * math.log10(max(4 * abs(a @ theta_h) ** 2, 1e-12)))
    print(f"{ele:10.2f} {row[0]:12.1f} {row[1]:13.1f}")
print("\nthe point null only holds at 21.30 deg; the widened null covers the band")
