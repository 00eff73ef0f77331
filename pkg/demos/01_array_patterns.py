"""Steering vectors, aligned reflection and null directions of the surface.

The passive surface behaves like an angular filter: with its phases matched
to one incidence direction, the reflected power toward other directions
follows the product of two array factors, with exact nulls on a grid of
"orthogonal" angles.
"""

import math

import numpy as np

from risswpcn import (
    AngleTriple,
    UpaGeometry,
    interference_power_closed,
    orthogonality_check,
    spatial_frequencies,
    steer_upa,
)

geom = UpaGeometry(16, 16)
target = AngleTriple(azimuth=math.pi / 2, elevation=math.radians(12.1))

freqs = spatial_frequencies(target)
vec = steer_upa(geom, freqs.vartheta, freqs.phi)
print(f"surface response toward the target: {geom.n} entries, all unit modulus")
print(f"  |entries| in [{np.abs(vec).min():.6f}, {np.abs(vec).max():.6f}]")
print(f"  squared norm = {np.linalg.norm(vec) ** 2:.1f} (= element count)\n")

print("aligned-pattern power toward other elevations (relative to the maximum):")
peak = interference_power_closed(target, target, geom, hap_antennas=4)
for ele_deg in [12.1, 14.0, 19.3, 26.6, 35.0]:
    other = AngleTriple(math.pi / 2, math.radians(ele_deg))
    power = interference_power_closed(target, other, geom, 4)
    flag = "null" if orthogonality_check(target, other, geom, tol=1e-3) else "    "
    print(f"  {ele_deg:6.1f} deg   {10 * math.log10(max(power / peak, 1e-30)):8.1f} dB  {flag}")

print("\nexact null grid around broadside (elevations with sin = 2n/16):")
broadside = AngleTriple(math.pi / 2, 0.0)
for n in range(1, 5):
    ele = math.degrees(math.asin(2 * n / 16))
    other = AngleTriple(math.pi / 2, math.radians(ele))
    print(
        f"  n={n}: {ele:6.2f} deg  orthogonal={orthogonality_check(broadside, other, geom)}"
    )
