"""Scattering-side observables of the coupled dissipative system.

The modified amplitude of a component is the Fourier transform of the
back-propagated solution,

    alpha_j(t, xi) = FT[ U(-t) u_j(t, .) ](xi),

which is constant in t for free motion and converges, as t grows, to the
Fourier transform of the component's scattering state.  The central object
is the per-frequency sign profile

    m(xi) = |alpha_1(2, xi)|^2 - |alpha_2(2, xi)|^2 + integral_2^T rho dt,

whose sign decides which component survives at that frequency.  Two
independent routes compute it:

* the anchored route (`m_integral`): time-2 anchor plus a trapezoid of the
  integrand rho over the snapshot ladder;
* the endpoint route (`m_endpoint`): because d alpha_j/dt = -FT U(-t) N_j(u)
  makes rho exactly the time derivative of |alpha_1|^2 - |alpha_2|^2 (the
  1/t model terms cancel in the real-part combination), the integral
  telescopes and m is just the endpoint difference |alpha_1(T)|^2 -
  |alpha_2(T)|^2.

Their disagreement is pure quadrature error and is used as the realized
error scale when thresholding the sign classification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import (
    FREQUENCY,
    SPACE,
    ComplexField,
    Grid,
    forward_ft,
    free_propagate,
)
from .dynamics import SystemState

__all__ = [
    "SpectralSnapshot",
    "MProfile",
    "modified_amplitudes",
    "rho",
    "m_integral",
    "m_endpoint",
    "scattering_state",
    "orthogonality_defect",
    "classify",
    "integrate_rho_window",
    "FIRST_SURVIVES",
    "SECOND_SURVIVES",
    "BOTH_VANISH",
    "TAG_NAMES",
]

T_ANCHOR = 2.0
_ANCHOR_TOL = 1e-9

FIRST_SURVIVES = 1
BOTH_VANISH = 0
SECOND_SURVIVES = -1
TAG_NAMES = {
    FIRST_SURVIVES: "first-survives",
    BOTH_VANISH: "both-vanish",
    SECOND_SURVIVES: "second-survives",
}


@dataclass(frozen=True)
class SpectralSnapshot:
    """Time t plus the pair of modified amplitudes on the frequency grid."""

    t: float
    alpha1: ComplexField
    alpha2: ComplexField

    def __post_init__(self) -> None:
        if self.t < 0 or not np.isfinite(self.t):
            raise ValueError(f"snapshot time must be finite and >= 0, got {self.t}")
        if self.alpha1.grid != self.alpha2.grid:
            raise ValueError("amplitudes must share a grid")
        if self.alpha1.side != FREQUENCY or self.alpha2.side != FREQUENCY:
            raise ValueError("spectral snapshots hold frequency-side fields")

    @property
    def grid(self) -> Grid:
        return self.alpha1.grid


@dataclass(frozen=True)
class MProfile:
    """Sign profile m sampled on the frequency grid.

    method is 'endpoint' or 'integral'; profiles from both routes on the
    same grid are elementwise comparable.  The integral route attaches a
    per-frequency estimate of the neglected tail beyond t_final.
    """

    grid: Grid
    m_values: np.ndarray
    method: str
    t_anchor: float
    t_final: float
    tail_estimate: np.ndarray | None = None

    def __post_init__(self) -> None:
        vals = np.asarray(self.m_values, dtype=np.float64)
        if vals.shape != (self.grid.n,):
            raise ValueError("profile length must match the grid")
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite values in sign profile")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "m_values", vals)
        if self.tail_estimate is not None:
            tail = np.asarray(self.tail_estimate, dtype=np.float64).copy()
            tail.flags.writeable = False
            object.__setattr__(self, "tail_estimate", tail)


def modified_amplitudes(state: SystemState) -> SpectralSnapshot:
    """Back-propagate each component to time 0 and Fourier transform it."""
    a1 = forward_ft(free_propagate(state.u1, -state.t))
    a2 = forward_ft(free_propagate(state.u2, -state.t))
    return SpectralSnapshot(state.t, a1, a2)


def _abs2(values: np.ndarray) -> np.ndarray:
    return values.real**2 + values.imag**2


def rho(state: SystemState) -> ComplexField:
    """Integrand of the sign profile's tail, evaluated from one state.

    rho = 2 Re[ conj(alpha_1) R_1 - conj(alpha_2) R_2 ] where R_j compares
    the back-propagated true nonlinearity with its resonant 1/t model:

        R_1 = (1/t) |alpha_2|^2 alpha_1 - FT U(-t)[ |u2|^2 u1 ],

    and symmetrically for R_2.  The 1/t terms cancel in the combination, so
    rho equals the instantaneous rate of change of |alpha_1|^2 - |alpha_2|^2;
    the samples are exactly real by construction.
    """
    t = state.t
    if t <= 0:
        raise ValueError("rho requires t > 0 (the resonant model carries a 1/t factor)")
    g = state.grid
    snap = modified_amplitudes(state)
    a1 = snap.alpha1.values
    a2 = snap.alpha2.values

    v1 = state.u1.values
    v2 = state.u2.values
    n1 = ComplexField(g, _abs2(v2) * v1, SPACE)
    n2 = ComplexField(g, _abs2(v1) * v2, SPACE)
    g1 = forward_ft(free_propagate(n1, -t)).values
    g2 = forward_ft(free_propagate(n2, -t)).values

    r1 = _abs2(a2) * a1 / t - g1
    r2 = _abs2(a1) * a2 / t - g2
    vals = 2.0 * np.real(np.conj(a1) * r1 - np.conj(a2) * r2)
    return ComplexField(g, vals.astype(np.complex128), FREQUENCY)


def _endpoint_difference(snap: SpectralSnapshot) -> np.ndarray:
    return _abs2(snap.alpha1.values) - _abs2(snap.alpha2.values)


def _fit_tail_exponent(times: np.ndarray, amplitudes: np.ndarray) -> float:
    """Least-squares decay exponent p of amplitude ~ t^-p over the samples."""
    good = amplitudes > 0
    if np.count_nonzero(good) < 2:
        return 1.05
    logt = np.log(times[good])
    loga = np.log(amplitudes[good])
    slope = np.polyfit(logt, loga, 1)[0]
    # a non-decaying fit would make the extrapolated tail meaningless;
    # clamp to a slowly-decaying, conservative exponent
    return max(-slope, 1.05)


def m_integral(states: list[SystemState]) -> MProfile:
    """Anchored route: time-2 endpoint difference plus a trapezoid of rho.

    Expects system snapshots whose first time is the anchor t = 2 and whose
    last is the truncation time T.  The neglected tail beyond T is estimated
    per frequency by extrapolating |rho| ~ t^-p, with p fitted on the last
    decade of snapshot times, and attached to the returned profile.
    """
    if len(states) < 3:
        raise ValueError("integral route needs at least 3 snapshots")
    times = np.array([s.t for s in states], dtype=np.float64)
    if abs(times[0] - T_ANCHOR) > max(_ANCHOR_TOL, 1e-12 * T_ANCHOR):
        raise ValueError(f"first snapshot must sit at the t = 2 anchor, got {times[0]}")
    if np.any(np.diff(times) <= 0):
        raise ValueError("snapshot times must be strictly ascending")
    grid = states[0].grid

    anchor = _endpoint_difference(modified_amplitudes(states[0]))
    rho_vals = np.empty((len(states), grid.n), dtype=np.float64)
    for i, s in enumerate(states):
        rho_vals[i] = rho(s).values.real
    m_vals = anchor + np.trapezoid(rho_vals, times, axis=0)

    t_final = times[-1]
    decade = times >= t_final / 10.0
    p = _fit_tail_exponent(times[decade], np.max(np.abs(rho_vals[decade]), axis=1))
    tail = np.abs(rho_vals[-1]) * t_final / (p - 1.0)
    return MProfile(grid, m_vals, "integral", T_ANCHOR, t_final, tail)


def m_endpoint(final_snapshot: SpectralSnapshot) -> MProfile:
    """Telescoped route: endpoint difference |alpha_1(T)|^2 - |alpha_2(T)|^2."""
    if final_snapshot.t < T_ANCHOR - _ANCHOR_TOL:
        raise ValueError("endpoint route needs T >= 2")
    return MProfile(
        final_snapshot.grid,
        _endpoint_difference(final_snapshot),
        "endpoint",
        T_ANCHOR,
        final_snapshot.t,
    )


def integrate_rho_window(states: list[SystemState], t_lo: float, t_hi: float) -> np.ndarray:
    """Trapezoid of rho over the snapshots with t in [t_lo, t_hi], per frequency."""
    window = [s for s in states if t_lo - 1e-9 <= s.t <= t_hi + 1e-9]
    if len(window) < 2:
        raise ValueError(f"need at least 2 snapshots in [{t_lo}, {t_hi}]")
    times = np.array([s.t for s in window])
    vals = np.stack([rho(s).values.real for s in window])
    return np.trapezoid(vals, times, axis=0)


def scattering_state(final_snapshot: SpectralSnapshot) -> tuple[ComplexField, ComplexField]:
    """Finite-T stand-in for the limiting scattering pair, frequency side.

    The amplitudes at the final time approximate the transforms of the
    large-time free profiles; their quality improves with T but carries no
    rate guarantee, so downstream consumers should treat the attached tail
    estimates as error bars.
    """
    if final_snapshot.t < T_ANCHOR - _ANCHOR_TOL:
        raise ValueError("scattering state extraction needs T >= 2")
    return final_snapshot.alpha1, final_snapshot.alpha2


def orthogonality_defect(snapshot: SpectralSnapshot) -> float:
    """Finite-time size of the pointwise product relation: max |alpha1*alpha2|."""
    return float(np.max(np.abs(snapshot.alpha1.values * snapshot.alpha2.values)))


def classify(profile: MProfile, threshold: float) -> np.ndarray:
    """Per-frequency trichotomy: +1 / -1 / 0 for m > tau, m < -tau, |m| <= tau."""
    if not (np.isfinite(threshold) and threshold > 0):
        raise ValueError(f"classification threshold must be positive, got {threshold}")
    tags = np.zeros(profile.grid.n, dtype=np.int8)
    tags[profile.m_values > threshold] = FIRST_SURVIVES
    tags[profile.m_values < -threshold] = SECOND_SURVIVES
    return tags
