"""Array geometry, steering vectors, LoS/Rician channels and path loss.

Conventions used throughout the package:

* The reflecting surface is a uniform planar array (UPA) with ``n_x * n_y``
  elements at half-wavelength spacing.  Element ``n`` sits at grid position
  ``(n // n_y, n % n_y)``, i.e. the x index runs slow and the y index fast,
  so the UPA response is the Kronecker product ``alpha_x (x) alpha_y`` with
  zero-based phase exponents.
* Spatial frequencies (phase increments per element) are derived from the
  physical azimuth/elevation/departure angles via
  ``phi = pi*cos(azi)``, ``vartheta = pi*sin(azi)*sin(ele)`` and
  ``varpi = pi*sin(dep)``.
* Path loss values are linear power gains; dB/dBm conversions happen at the
  configuration boundary, never inside the numerics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# A Rician factor at or above this value is treated as a pure LoS channel.
KAPPA_LOS = 1e12


@dataclass(frozen=True)
class AngleTriple:
    """Physical incidence angles in radians.

    azimuth in [0, pi], elevation in [-pi/2, pi/2], departure in [-pi/2, pi/2].
    """

    azimuth: float
    elevation: float
    departure: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.azimuth <= np.pi:
            raise ValueError(f"azimuth {self.azimuth} outside [0, pi]")
        if not -np.pi / 2 <= self.elevation <= np.pi / 2:
            raise ValueError(f"elevation {self.elevation} outside [-pi/2, pi/2]")
        if not -np.pi / 2 <= self.departure <= np.pi / 2:
            raise ValueError(f"departure {self.departure} outside [-pi/2, pi/2]")


@dataclass(frozen=True)
class SpatialFrequencies:
    """Per-element phase increments (radians) for the two UPA axes and the ULA."""

    phi: float
    vartheta: float
    varpi: float


@dataclass(frozen=True)
class UpaGeometry:
    """Passive-element layout: ``n_x * n_y`` elements at d/lambda = 1/2."""

    n_x: int
    n_y: int
    spacing_over_lambda: float = 0.5

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("n_x and n_y must be positive")
        if self.spacing_over_lambda != 0.5:
            raise ValueError("only half-wavelength spacing is supported")

    @property
    def n(self) -> int:
        return self.n_x * self.n_y


@dataclass
class ChannelSet:
    """Channels of one uplink snapshot.

    g is the surface-to-access-point matrix (N x M); h[k] the surface-to-source
    vector of source k, with index 0 the target and the rest interferers.
    Path losses are linear power gains for the two hops.
    """

    g: np.ndarray
    h: list[np.ndarray]
    pathloss_h2r: float = 1.0
    pathloss_r2u: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.pathloss_r2u:
            self.pathloss_r2u = [1.0] * len(self.h)
        if len(self.pathloss_r2u) != len(self.h):
            raise ValueError("pathloss_r2u must have one entry per source")
        n = self.g.shape[0]
        for hk in self.h:
            if hk.shape != (n,):
                raise ValueError("channel vector length inconsistent with g")


@dataclass(frozen=True)
class PathLossModel:
    """Power-law path loss: ``gain(d) = 10**(-ref_loss_db/10) * d**-exponent``."""

    ref_loss_db_at_1m: float = 30.0
    exponent: float = 2.2


def spatial_frequencies(angles: AngleTriple) -> SpatialFrequencies:
    """Map physical angles to array-domain phase increments."""
    return SpatialFrequencies(
        phi=np.pi * np.cos(angles.azimuth),
        vartheta=np.pi * np.sin(angles.azimuth) * np.sin(angles.elevation),
        varpi=np.pi * np.sin(angles.departure),
    )


def steer_ula(m: int, varpi: float) -> np.ndarray:
    """Uniform linear array response: entry p is ``exp(i*p*varpi)``, p = 0..m-1."""
    if m < 1:
        raise ValueError("array size must be >= 1")
    return np.exp(1j * varpi * np.arange(m))


def steer_upa(geom: UpaGeometry, vartheta: float, phi: float) -> np.ndarray:
    """UPA response ``alpha_x(phi) (x) alpha_y(vartheta)``, length ``geom.n``.

    Every entry has unit modulus; the squared norm equals the element count.
    """
    alpha_x = np.exp(1j * phi * np.arange(geom.n_x))
    alpha_y = np.exp(1j * vartheta * np.arange(geom.n_y))
    return np.kron(alpha_x, alpha_y)


def los_channels(
    geom: UpaGeometry,
    hap_antennas: int,
    angles_g: AngleTriple,
    angles_h: list[AngleTriple],
) -> ChannelSet:
    """Pure line-of-sight channels from geometry.

    The surface-to-access-point matrix is the rank-one outer product of the
    UPA response toward the access point and the ULA response at departure.
    Path loss gains default to 1 and are filled in by the caller.
    """
    if not angles_h:
        raise ValueError("need at least the target channel")
    fg = spatial_frequencies(angles_g)
    g = np.outer(steer_upa(geom, fg.vartheta, fg.phi), steer_ula(hap_antennas, fg.varpi))
    h = []
    for ang in angles_h:
        fk = spatial_frequencies(ang)
        h.append(steer_upa(geom, fk.vartheta, fk.phi))
    return ChannelSet(g=g, h=h)


def rician_mix(channel: np.ndarray, kappa: float, rng: np.random.Generator) -> np.ndarray:
    """Blend a deterministic channel with i.i.d. unit-variance scatter.

    Returns ``sqrt(kappa/(1+kappa))*channel + sqrt(1/(1+kappa))*H`` with H
    circularly-symmetric complex Gaussian, CN(0, 1) per entry.  Factors at or
    above KAPPA_LOS short-circuit to the deterministic channel.
    """
    if kappa < 0:
        raise ValueError("Rician factor must be >= 0")
    if kappa >= KAPPA_LOS:
        return np.array(channel, copy=True)
    scatter = (
        rng.standard_normal(channel.shape) + 1j * rng.standard_normal(channel.shape)
    ) / np.sqrt(2.0)
    return np.sqrt(kappa / (1.0 + kappa)) * channel + np.sqrt(1.0 / (1.0 + kappa)) * scatter


def path_loss(model: PathLossModel, distance) -> float | np.ndarray:
    """Linear power gain at ``distance`` meters (must be at or beyond 1 m)."""
    d = np.asarray(distance, dtype=float)
    if np.any(d < 1.0):
        raise ValueError("distance below the 1 m reference")
    gain = 10.0 ** (-model.ref_loss_db_at_1m / 10.0) * d ** (-model.exponent)
    return float(gain) if np.isscalar(distance) else gain
