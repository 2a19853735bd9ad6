"""Pair connectedness functions H(r) and their full-space connection masses.

Three link families are provided:

* ``mimo_mrc_2x2`` -- 2x2 MIMO with transmit beamforming and MRC reception
  over i.i.d. Rayleigh channels, path-loss exponent fixed at 2:
  H(r) = exp(-b r^2) (b^2 r^4 + 2 - exp(-b r^2)).
* ``rayleigh`` -- single-antenna Rayleigh outage link, H(r) = exp(-b r^eta).
* ``hard_disk`` -- on/off connection at range r0 (the eta -> infinity limit).

``beta`` absorbs transmit power, noise power, and rate threshold; the
effective communication range is r0 = beta^(-1/eta).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

MIMO_MRC_2X2 = "mimo_mrc_2x2"
RAYLEIGH = "rayleigh"
HARD_DISK = "hard_disk"


class ModelError(ValueError):
    """Invalid connectivity-model specification."""


@dataclass(frozen=True)
class ConnectivityModel:
    family: str
    beta: float
    eta: float

    def __post_init__(self):
        if self.family not in (MIMO_MRC_2X2, RAYLEIGH, HARD_DISK):
            raise ModelError(f"unknown family {self.family!r}")
        if self.beta <= 0:
            raise ModelError("beta must be positive")
        if self.family == MIMO_MRC_2X2 and self.eta != 2.0:
            raise ModelError("the 2x2 MIMO MRC closed form requires eta = 2")
        if self.family == RAYLEIGH and self.eta < 2.0:
            raise ModelError("path-loss exponent must be >= 2")

    @property
    def r0(self) -> float:
        """Effective communication range beta^(-1/eta)."""
        if self.family == HARD_DISK:
            return self.beta ** (-0.5)  # beta stored as r0^-2, see hard_disk()
        return self.beta ** (-1.0 / self.eta)

    @property
    def smooth(self) -> bool:
        """True when H is differentiable (needed by the quadrature oracle)."""
        return self.family != HARD_DISK


def mimo_mrc_2x2(beta: float) -> ConnectivityModel:
    return ConnectivityModel(MIMO_MRC_2X2, float(beta), 2.0)


def rayleigh(beta: float, eta: float = 2.0) -> ConnectivityModel:
    return ConnectivityModel(RAYLEIGH, float(beta), float(eta))


def hard_disk(r0: float) -> ConnectivityModel:
    # Stored with eta = 2 so that beta = r0^-2 keeps r0 = beta^(-1/eta).
    if r0 <= 0:
        raise ModelError("hard-disk range must be positive")
    return ConnectivityModel(HARD_DISK, float(r0) ** -2, 2.0)


def h(model: ConnectivityModel, r) -> np.ndarray | float:
    """Direct-link probability at distance r (vectorized)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ModelError("distance must be non-negative")
    out = h_of_d2(model, r * r)
    return float(out) if out.ndim == 0 else out


def h_of_d2(model: ConnectivityModel, d2) -> np.ndarray:
    """Same as h() but from squared distance; the form the simulator uses."""
    d2 = np.asarray(d2, dtype=float)
    if model.family == MIMO_MRC_2X2:
        x = model.beta * d2
        e = np.exp(-x)
        return e * (x * x + 2.0 - e)
    if model.family == RAYLEIGH:
        return np.exp(-model.beta * d2 ** (0.5 * model.eta))
    return (d2 <= model.r0**2).astype(float)


def h_prime(model: ConnectivityModel, r) -> np.ndarray | float:
    """dH/dr, used by the quadrature oracle.  Smooth families only."""
    if not model.smooth:
        raise ModelError("hard-disk H has no derivative")
    r = np.asarray(r, dtype=float)
    b = model.beta
    if model.family == MIMO_MRC_2X2:
        x = b * r * r
        e = np.exp(-x)
        dh_dx = e * (2.0 * x - x * x - 2.0 + 2.0 * e)
        out = dh_dx * 2.0 * b * r
    else:
        out = -b * model.eta * r ** (model.eta - 1.0) * np.exp(-b * r**model.eta)
    return float(out) if out.ndim == 0 else out


def bulk_mass(model: ConnectivityModel) -> float:
    """Full-space connection mass M = 4 pi * int_0^inf r^2 H(r) dr."""
    b = model.beta
    if model.family == MIMO_MRC_2X2:
        return (23.0 - math.sqrt(2.0)) / 4.0 * (np.pi / b) ** 1.5
    if model.family == RAYLEIGH:
        # 4 pi / eta * Gamma(3/eta) * beta^(-3/eta); finite for all eta > 0.
        if model.eta <= 0:
            raise ModelError("divergent connection mass")
        return 4.0 * np.pi / model.eta * gamma(3.0 / model.eta) * b ** (-3.0 / model.eta)
    return 4.0 / 3.0 * np.pi * model.r0**3


def sample_link(model: ConnectivityModel, r: float, rng: np.random.Generator) -> bool:
    """Draw one independent link at distance r."""
    return bool(rng.random() < h(model, r))


def model_from_spec(spec: dict | str) -> ConnectivityModel:
    """Build a model from its JSON specification.

    Accepted forms::

        {"family": "mimo_mrc_2x2", "beta": 1.0}
        {"family": "rayleigh", "beta": 1.0, "eta": 2.0}
        {"family": "hard_disk", "r0": 1.0}
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "family" not in spec:
        raise ModelError("model spec must be an object with a 'family' field")
    family = spec["family"]
    try:
        if family == MIMO_MRC_2X2:
            if float(spec.get("eta", 2.0)) != 2.0:
                raise ModelError("the 2x2 MIMO MRC closed form requires eta = 2")
            return mimo_mrc_2x2(float(spec["beta"]))
        if family == RAYLEIGH:
            return rayleigh(float(spec["beta"]), float(spec.get("eta", 2.0)))
        if family == HARD_DISK:
            return hard_disk(float(spec["r0"]))
    except KeyError as exc:
        raise ModelError(f"model spec missing field {exc}") from exc
    raise ModelError(f"unknown model family {family!r}")
