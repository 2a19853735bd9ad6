"""Numeric oracle for the first-order boundary-layer integrals.

Every closed-form boundary term rests on two steps: a first-order expansion
of the link mass integral near a boundary feature (the "inner" integral),
and an outer integral of exp(-rho * inner) over the feature's local
coordinate patch.  This module evaluates both steps by adaptive quadrature
so the closed forms can be validated independently, and so models without
registered closed forms can still be evaluated.

The angular coordinate of each inner integral is pre-integrated
analytically (the integrands are plain sine/cosine polynomials in it); the
radial coordinates are integrated numerically with truncation at the radius
where H drops below ~1e-18.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .channel import ConnectivityModel, ModelError, bulk_mass, h, h_prime
from .geometry import BoundaryFeature

# Beyond beta * r^eta = 50 the link probability is below 1e-18 for every
# family (the MIMO form carries a polynomial factor: e^-50 * (50^2 + 2) < 5e-19).
_EXP_CUTOFF = 50.0

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-11, limit=200)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class IntegralSpec:
    """Description of one oracle integral, mostly for reporting."""

    kind: str
    model: ConnectivityModel
    params: dict = field(default_factory=dict)
    rel_tol: float = 1e-6

    def __post_init__(self):
        if not 1e-12 <= self.rel_tol <= 1e-3:
            raise ValueError("tolerance must lie in [1e-12, 1e-3]")


def r_max(model: ConnectivityModel) -> float:
    """Truncation radius: smallest r with beta * r^eta >= 45 (r0 for hard disk)."""
    if not model.smooth:
        return model.r0
    return (_EXP_CUTOFF / model.beta) ** (1.0 / model.eta)


def _quad(func, a, b, **overrides):
    opts = {**_QUAD_OPTS, **overrides}
    val, err = integrate.quad(func, a, b, **opts)
    budget = max(opts["epsabs"], abs(val) * opts["epsrel"]) * 100.0
    if err > budget and err > 1e-10:
        raise QuadratureError(f"quadrature error {err:.2e} exceeds budget for value {val:.6e}")
    return val


def _dblquad(func, ax, bx, ay, by):
    val, err = integrate.dblquad(func, ax, bx, ay, by, epsabs=1e-11, epsrel=1e-9)
    if err > max(1e-9, abs(val) * 1e-6):
        raise QuadratureError(f"2D quadrature error {err:.2e} too large for value {val:.6e}")
    return val


def _wedge_j_integrals(model: ConnectivityModel, half_z: bool = True):
    """The three radial integrals of the wedge expansion.

    J1 = iint r H(s),  J2 = iint (r z / s) H'(s),  J3 = iint (r^2 / s) H'(s)
    with s = sqrt(r^2 + z^2), over r in [0, inf) and z in [0, inf)
    (``half_z``, corners) or z in (-inf, inf) (edges, which doubles J1 and
    J3 and kills J2 by symmetry).
    """
    rm = r_max(model)

    def j1(z, r):
        return r * h(model, math.hypot(r, z))

    def j2(z, r):
        s = math.hypot(r, z)
        return 0.0 if s == 0.0 else r * z / s * h_prime(model, s)

    def j3(z, r):
        s = math.hypot(r, z)
        return 0.0 if s == 0.0 else r * r / s * h_prime(model, s)

    J1 = _dblquad(j1, 0.0, rm, 0.0, rm)
    J2 = _dblquad(j2, 0.0, rm, 0.0, rm)
    J3 = _dblquad(j3, 0.0, rm, 0.0, rm)
    if not half_z:
        return 2.0 * J1, 0.0, 2.0 * J3
    return J1, J2, J3


def inner_corner(
    theta: float,
    model: ConnectivityModel,
    r2: float = 0.0,
    theta2: float = 0.0,
    z2: float = 0.0,
) -> float:
    """First-order link mass near a wedge corner, by numeric quadrature.

    The wedge occupies r in [0, inf), theta1 in [0, theta), z in [0, inf)
    in cylindrical coordinates; (r2, theta2, z2) is the probe node.
    """
    if not 0.0 < theta < np.pi:
        raise ValueError("corner angle must lie in (0, pi)")
    if not 0.0 <= theta2 <= theta or r2 < 0 or z2 < 0:
        raise ValueError("probe point outside the wedge patch")
    if not model.smooth and (r2 or z2):
        raise ModelError("first-order terms need a differentiable H")
    J1, J2, J3 = _wedge_j_integrals(model, half_z=True)
    ang = math.sin(theta2) + math.sin(theta - theta2)
    return theta * J1 - theta * z2 * J2 - r2 * ang * J3


def inner_corner_closed_form(
    theta: float, beta: float, r2: float = 0.0, theta2: float = 0.0, z2: float = 0.0
) -> float:
    """Closed-form wedge link mass for the 2x2 MIMO MRC family (eta = 2)."""
    return (
        14.0 * z2 * theta
        + 0.5 * (23.0 - math.sqrt(2.0)) * math.sqrt(np.pi / beta) * theta
        + 7.0 * np.pi * r2 * (math.sin(theta2) - math.sin(theta2 - theta))
    ) / (8.0 * beta)


def inner_edge(
    theta: float, model: ConnectivityModel, r2: float = 0.0, theta2: float = 0.0
) -> float:
    """First-order link mass near an edge interior (z-range doubled, no z2 term)."""
    if not 0.0 < theta < np.pi:
        raise ValueError("edge angle must lie in (0, pi)")
    J1, _, J3 = _wedge_j_integrals(model, half_z=False)
    ang = math.sin(theta2) + math.sin(theta - theta2)
    return theta * J1 - r2 * ang * J3


def inner_edge_closed_form(theta: float, beta: float, r2: float = 0.0, theta2: float = 0.0) -> float:
    return (
        0.5 * (23.0 - math.sqrt(2.0)) * math.sqrt(np.pi / beta) * theta
        + 7.0 * np.pi * r2 * (math.sin(theta2) - math.sin(theta2 - theta))
    ) / (4.0 * beta)


def _face_zeroth(R: float, model: ConnectivityModel) -> float:
    """Link mass over the ball of radius R from a probe on its surface.

    Spherical-coordinate integral of r1^2 sin(theta) H(dist) with phi
    pre-integrated; the polar angle is substituted by the chord length u,
    turning the polar integral into int u H(u) du on [R - r1, R + r1].
    """
    rm = r_max(model)

    def chord_mass(r1):
        a = R - r1
        b = min(R + r1, rm)
        if a >= b:
            return 0.0
        return _quad(lambda u: u * h(model, u), a, b)

    lo = max(0.0, R - rm)
    return 2.0 * np.pi / R * _quad(lambda r1: r1 * chord_mass(r1), lo, R, limit=300)


def _face_slope(R: float, model: ConnectivityModel) -> float:
    """d(inner mass)/d(r2) at r2 = R, from the first-order integrand."""
    rm = r_max(model)

    def chord(r1):
        a = R - r1
        b = min(R + r1, rm)
        if a >= b:
            return 0.0
        gap = (R - r1) * (R + r1)  # R^2 - r1^2 without cancellation
        return _quad(lambda u: (gap + u * u) * h_prime(model, u), a, b)

    lo = max(0.0, R - rm)
    return np.pi / R**2 * _quad(lambda r1: r1 * chord(r1), lo, R, limit=300)


def inner_face(R: float, model: ConnectivityModel, r2: float | None = None) -> float:
    """First-order link mass near the surface of the equal-area sphere.

    Note the numeric value carries a genuine curvature deficit of relative
    size ~0.8 / (sqrt(beta) R) against the flat-face closed form; take R
    large to compare against it.
    """
    if R <= 0:
        raise ValueError("sphere radius must be positive")
    if r2 is None:
        r2 = R
    if not 0.0 <= r2 <= R:
        raise ValueError("probe radius must lie in [0, R]")
    if not model.smooth and r2 != R:
        raise ModelError("first-order terms need a differentiable H")
    zeroth = _face_zeroth(R, model)
    if r2 == R:
        return zeroth
    return zeroth + (r2 - R) * _face_slope(R, model)


def inner_face_closed_form(R: float, beta: float, r2: float | None = None) -> float:
    if r2 is None:
        r2 = R
    return (
        np.pi
        / (4.0 * beta)
        * (0.5 * (23.0 - math.sqrt(2.0)) * math.sqrt(np.pi / beta) + 14.0 * (R - r2))
    )


def inner_bulk(model: ConnectivityModel) -> tuple[float, float]:
    """(zeroth term, first-order term) of the bulk expansion.

    The zeroth term is the full-space connection mass; the first-order term
    vanishes by symmetry of cos(theta) sin(theta) over [0, pi] and is
    returned so that cancellation can be asserted.
    """
    rm = r_max(model)
    zeroth = 4.0 * np.pi * _quad(lambda r: r * r * h(model, r), 0.0, rm)
    angular = _quad(lambda t: math.cos(t) * math.sin(t), 0.0, np.pi, epsabs=1e-14)
    if model.smooth:
        radial = _quad(lambda r: r * r * h_prime(model, r), 0.0, rm)
    else:
        radial = 0.0
    first = 2.0 * np.pi * angular * radial
    return zeroth, first


def outer_integral(feature: BoundaryFeature, model: ConnectivityModel, rho: float) -> float:
    """Outer integral of exp(-rho * inner mass) over one feature patch.

    This is the generic-model route to a boundary term: no closed-form
    algebra enters, only the numeric inner coefficients.  The result is the
    per-feature outer integral (multiply by rho and the multiplicity for
    the outage contribution).
    """
    if rho <= 0:
        raise ValueError("density must be positive")
    if feature.codim == 0:
        zeroth, _ = inner_bulk(model)
        return feature.measure * math.exp(-rho * zeroth)
    if feature.codim == 1:
        R = math.sqrt(feature.measure / (4.0 * np.pi))
        A = _face_zeroth(R, model)
        B = -_face_slope(R, model)  # inner = A + B (R - r2)
        # The integrand lives in a layer of width ~1/(rho B) below r2 = R;
        # integrate the depth t = R - r2 over that layer only.
        depth = min(R, _EXP_CUTOFF / (rho * B))
        val = _quad(
            lambda t: 4.0 * np.pi * (R - t) ** 2 * math.exp(-rho * (A + B * t)), 0.0, depth
        )
        return val
    theta = feature.dihedral
    if feature.codim == 2:
        J1, _, J3 = _wedge_j_integrals(model, half_z=False)
        A = theta * J1
        ang_int = _quad(
            lambda t2: (rho * (-J3) * (math.sin(t2) + math.sin(theta - t2))) ** -2, 0.0, theta
        )
        return feature.measure * math.exp(-rho * A) * ang_int
    if feature.codim == 3:
        J1, J2, J3 = _wedge_j_integrals(model, half_z=True)
        A = theta * J1
        b = -theta * J2
        ang_int = _quad(
            lambda t2: (rho * (-J3) * (math.sin(t2) + math.sin(theta - t2))) ** -2, 0.0, theta
        )
        return math.exp(-rho * A) / (rho * b) * ang_int
    raise ValueError(f"unsupported codimension {feature.codim}")


@dataclass(frozen=True)
class ValidationRow:
    kind: str
    params: dict
    closed_form: float
    quadrature: float
    rel_tol: float

    @property
    def rel_error(self) -> float:
        return abs(self.quadrature - self.closed_form) / abs(self.closed_form)

    @property
    def passed(self) -> bool:
        return self.rel_error <= self.rel_tol


def validation_suite(
    betas=(0.5, 1.0, 2.0),
    thetas=(np.pi / 3, np.pi / 2, 3 * np.pi / 4),
    rho: float = 1.0,
) -> list[ValidationRow]:
    """Closed form vs quadrature for every inner and outer integral kind.

    Inner comparisons run across the full (beta, theta) grid; outer
    comparisons run at beta = 1 against the analytic terms.
    """
    from . import analytic

    rows: list[ValidationRow] = []
    for beta in betas:
        model = ConnectivityModel("mimo_mrc_2x2", beta, 2.0)
        r2 = 0.05 * model.r0
        z2 = 0.05 * model.r0
        for theta in thetas:
            t2 = 0.3 * theta
            rows.append(
                ValidationRow(
                    "inner_corner",
                    {"beta": beta, "theta": theta, "r2": r2, "theta2": t2, "z2": z2},
                    inner_corner_closed_form(theta, beta, r2, t2, z2),
                    inner_corner(theta, model, r2, t2, z2),
                    1e-4,
                )
            )
        for theta in thetas:
            t2 = 0.3 * theta
            rows.append(
                ValidationRow(
                    "inner_edge",
                    {"beta": beta, "theta": theta, "r2": r2, "theta2": t2},
                    inner_edge_closed_form(theta, beta, r2, t2),
                    inner_edge(theta, model, r2, t2),
                    1e-4,
                )
            )
        Rbig = 1e6 / math.sqrt(beta)
        rows.append(
            ValidationRow(
                "inner_face",
                {"beta": beta, "R": Rbig, "r2": Rbig - 0.05 * model.r0},
                inner_face_closed_form(Rbig, beta, Rbig - 0.05 * model.r0),
                inner_face(Rbig, model, Rbig - 0.05 * model.r0),
                1e-4,
            )
        )
        zeroth, _ = inner_bulk(model)
        rows.append(
            ValidationRow("inner_bulk", {"beta": beta}, bulk_mass(model), zeroth, 1e-8)
        )

    beta = 1.0
    model = ConnectivityModel("mimo_mrc_2x2", beta, 2.0)
    theta = np.pi / 2
    corner = BoundaryFeature(codim=3, measure=1.0, solid_angle=theta, dihedral=theta)
    rows.append(
        ValidationRow(
            "outer_corner",
            {"beta": beta, "theta": theta, "rho": rho},
            analytic.corner_term(theta, beta).outer_integral(rho),
            outer_integral(corner, model, rho),
            1e-3,
        )
    )
    edge = BoundaryFeature(codim=2, measure=5.0, solid_angle=2 * theta, dihedral=theta)
    rows.append(
        ValidationRow(
            "outer_edge",
            {"beta": beta, "theta": theta, "L": 5.0, "rho": rho},
            analytic.edge_term(theta, 5.0, beta).outer_integral(rho),
            outer_integral(edge, model, rho),
            1e-2,
        )
    )
    # Face: compare at a sphere large enough that the curvature deficit of
    # the spherical patch is far below the tolerance.
    Rface = 1e5
    face = BoundaryFeature(codim=1, measure=4.0 * np.pi * Rface**2, solid_angle=2 * np.pi)
    rows.append(
        ValidationRow(
            "outer_face",
            {"beta": beta, "R": Rface, "rho": rho},
            analytic.face_term(4.0 * np.pi * Rface**2, beta).outer_integral(rho),
            outer_integral(face, model, rho),
            1e-3,
        )
    )
    V = 156.25  # house(5) volume
    bulk = BoundaryFeature(codim=0, measure=V, solid_angle=4 * np.pi)
    rows.append(
        ValidationRow(
            "outer_bulk",
            {"beta": beta, "V": V, "rho": rho},
            analytic.bulk_term(V, beta).outer_integral(rho),
            outer_integral(bulk, model, rho),
            1e-6,
        )
    )
    return rows
