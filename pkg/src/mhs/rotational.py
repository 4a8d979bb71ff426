"""Rotationally invariant minimal tori in S^3 via rotation-number shooting.

S^1-invariant minimal surfaces in S^3 reduce to geodesics of the orbit
metric sin^2(a) (da^2 + cos^2(a) dv^2) on the quotient strip.  The
conserved Clairaut constant c = sin^2(a) cos^2(a) v' parametrizes the
radial oscillations and plays the role of the energy; c -> 1/2 is the
circular (Clifford) solution.  A profile closes up into a torus when the
angular advance over one radial period is 2*pi*p/q.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (ConvergenceError, GenerationFailedError,
                     IntegrationFailureError, InvalidParameterError,
                     NoSolutionError, OutOfWindowError)
from .geometry import GeometryFamily, ParamDomain

CIRCULAR_ENERGY = 0.5          # Clairaut constant of the Clifford torus
_ENERGY_FLOOR = 1e-4
_LEAD_TIME = 1e-3              # event-free lead-in past the turning point
_ODE_TOL = 1e-12
_T_MAX = 100.0
_N_SAMPLES = 2001


def _accel(a, da, dv):
    """Geodesic accelerations of the orbit metric."""
    s2 = np.sin(2.0 * a)
    s4 = np.sin(4.0 * a)
    sa2 = np.sin(a) ** 2
    ca2 = np.cos(a) ** 2
    dda = -(s2 / (2.0 * sa2)) * da * da + (s4 / (4.0 * sa2)) * dv * dv
    ddv = -(s4 / (2.0 * sa2 * ca2)) * da * dv
    return dda, ddv


def _rhs(t, y):
    a, v, da, dv = y
    dda, ddv = _accel(a, da, dv)
    return [da, dv, dda, ddv]


def _integrate_period(energy):
    """Integrate one radial oscillation starting at the inner turning point.

    Returns (T, dense evaluator over [0, T]).
    """
    c = float(energy)
    if not (_ENERGY_FLOOR <= c < CIRCULAR_ENERGY):
        raise OutOfWindowError(
            f"energy {c} outside the oscillatory window "
            f"[{_ENERGY_FLOOR}, {CIRCULAR_ENERGY})")
    a_min = 0.5 * np.arcsin(2.0 * c)
    y0 = [a_min, 0.0, 0.0, 1.0 / c]
    lead = solve_ivp(_rhs, (0.0, _LEAD_TIME), y0, method="DOP853",
                     rtol=_ODE_TOL, atol=_ODE_TOL, dense_output=True)
    if not lead.success:
        raise IntegrationFailureError(lead.message)

    def turning(t, y):
        return y[2]

    turning.direction = 1.0
    turning.terminal = True
    sol = solve_ivp(_rhs, (_LEAD_TIME, _T_MAX), lead.y[:, -1], method="DOP853",
                    rtol=_ODE_TOL, atol=_ODE_TOL, events=turning,
                    dense_output=True)
    if not sol.success:
        raise IntegrationFailureError(sol.message)
    if len(sol.t_events[0]) == 0:
        raise OutOfWindowError(
            f"no radial oscillation detected for energy {c}")
    T = float(sol.t_events[0][0])

    def evaluate(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty((4, ts.size))
        early = ts <= _LEAD_TIME
        if early.any():
            out[:, early] = lead.sol(ts[early])
        if (~early).any():
            out[:, ~early] = sol.sol(ts[~early])
        return out

    return T, evaluate


def rotation_number(energy):
    """Angular advance over one radial oscillation, divided by 2*pi.

    Monotone increasing on the window, with limits 1/2 (energy -> 0) and
    sqrt(2)/2 (energy -> the circular value 1/2).
    """
    T, evaluate = _integrate_period(energy)
    return float(evaluate(T)[1, 0] / (2.0 * np.pi))


@lru_cache(maxsize=None)
def rotation_window(num=41):
    """Scan the energy window; returns (energies, rotation numbers).

    The usable window is determined at runtime from this scan, never
    hardcoded.  Raises if the scan is not strictly monotone.
    """
    energies = np.linspace(0.02, CIRCULAR_ENERGY - 2e-6, num)
    rots = np.array([rotation_number(c) for c in energies])
    if not np.all(np.diff(rots) > 0):
        raise IntegrationFailureError("rotation number scan is not monotone")
    return energies, rots


@dataclass(frozen=True)
class ProfileCurve:
    """One radial period of a closed (p, q) profile."""

    period: float
    t: np.ndarray
    alpha: np.ndarray
    v: np.ndarray
    dalpha: np.ndarray
    dv: np.ndarray
    clairaut: float
    p: int
    q: int

    def to_dict(self):
        return {
            "period": self.period,
            "clairaut": self.clairaut,
            "p": self.p,
            "q": self.q,
            "samples": np.stack(
                [self.t, self.alpha, self.v, self.dalpha, self.dv], axis=1
            ).tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        s = np.asarray(d["samples"], dtype=float)
        return cls(period=float(d["period"]), t=s[:, 0], alpha=s[:, 1],
                   v=s[:, 2], dalpha=s[:, 3], dv=s[:, 4],
                   clairaut=float(d["clairaut"]), p=int(d["p"]), q=int(d["q"]))

    @property
    def closure_residual(self):
        return abs(self.v[-1] - self.v[0] - 2.0 * np.pi * self.p / self.q)

    @property
    def clairaut_drift(self):
        c = np.sin(self.alpha) ** 2 * np.cos(self.alpha) ** 2 * self.dv
        return float((c.max() - c.min()) / abs(self.clairaut))


def find_otsuki(p, q, tol=1e-10):
    """Root-find the energy whose rotation number is p/q and sample it."""
    p, q = int(p), int(q)
    if p < 1 or q < 1:
        raise InvalidParameterError("p and q must be positive integers")
    if math.gcd(p, q) != 1:
        raise InvalidParameterError(f"(p, q) = ({p}, {q}) is not coprime")
    target = p / q
    energies, rots = rotation_window()
    if not (rots[0] < target < rots[-1]):
        raise NoSolutionError(
            f"rotation number {p}/{q} = {target:.6f} outside the scanned "
            f"window ({rots[0]:.6f}, {rots[-1]:.6f})")
    i = int(np.searchsorted(rots, target))
    lo, hi = energies[i - 1], energies[i]
    energy = brentq(lambda c: rotation_number(c) - target, lo, hi,
                    xtol=1e-14, rtol=8.9e-16)
    if abs(rotation_number(energy) - target) > max(tol, 1e-12):
        raise ConvergenceError(
            f"root finder stagnated for rotation number {p}/{q}")
    T, evaluate = _integrate_period(energy)
    ts = np.linspace(0.0, T, _N_SAMPLES)
    a, v, da, dv = evaluate(ts)
    profile = ProfileCurve(period=T, t=ts, alpha=a, v=v, dalpha=da, dv=dv,
                           clairaut=float(energy), p=p, q=q)
    if profile.closure_residual > max(10.0 * tol, 1e-8):
        raise ConvergenceError(
            f"profile closure residual {profile.closure_residual:.3e} "
            f"exceeds tolerance")
    if profile.clairaut_drift > 1e-9:
        raise IntegrationFailureError(
            f"Clairaut drift {profile.clairaut_drift:.3e} over one period")
    return profile


def _cross4(a, b, c):
    """Generalized cross product of three row-stacked R^4 vector arrays."""
    M = np.stack([a, b, c], axis=-2)
    out = np.empty(a.shape)
    cols = np.arange(4)
    for i in range(4):
        out[..., i] = ((-1.0) ** i) * np.linalg.det(M[..., cols != i])
    return out


def build_surface(profile, nt=256, nphi=64):
    """Immersed torus X(t, phi) in S^3 from a closed profile.

    t runs over the full closed curve [0, q*T) (arc length of the orbit
    metric), phi over the rotation circle [0, 2*pi).  Fails loudly if the
    assembled surface is not minimal to 1e-6.
    """
    if nt < 16 or nphi < 16:
        raise InvalidParameterError("resolutions below 16 are not supported")
    q = profile.q
    T = profile.period
    L = q * T
    ts, a, v, da, dv = profile.t, profile.alpha, profile.v, profile.dalpha, profile.dv
    dv_period = v[-1] - v[0]
    tf = np.concatenate([ts[:-1] + j * T for j in range(q)] + [[L]])
    af = np.concatenate([a[:-1]] * q + [[a[0]]])
    daf = np.concatenate([da[:-1]] * q + [[da[0]]])
    dvf = np.concatenate([dv[:-1]] * q + [[dv[0]]])
    vf = np.concatenate([v[:-1] + j * dv_period for j in range(q)]
                        + [[q * dv_period]])
    omega = vf[-1] / L
    dev = vf - omega * tf
    dev[-1] = dev[0]
    spl_a = CubicSpline(tf, af, bc_type="periodic")
    spl_da = CubicSpline(tf, daf, bc_type="periodic")
    spl_dv = CubicSpline(tf, dvf, bc_type="periodic")
    spl_dev = CubicSpline(tf, dev, bc_type="periodic")

    def profile_state(t):
        tm = np.mod(t, L)
        al = spl_a(tm)
        vv = omega * t + spl_dev(tm)
        d_a = spl_da(tm)
        d_v = spl_dv(tm)
        # second derivatives from the splines, independent of the ODE,
        # so the minimality self-check is a genuine consistency test
        dda = spl_da(tm, 1)
        ddv = spl_dv(tm, 1)
        return al, vv, d_a, d_v, dda, ddv

    def geom(u, need_shape=True):
        u = np.asarray(u, dtype=float)
        t, phi = u[..., 0], u[..., 1]
        al, vv, d_a, d_v, dda, ddv = profile_state(t)
        ca, sa = np.cos(al), np.sin(al)
        cv, sv = np.cos(vv), np.sin(vv)
        cp, sp = np.cos(phi), np.sin(phi)
        zero = np.zeros_like(ca)
        X = np.stack([ca * cv, ca * sv, sa * cp, sa * sp], axis=-1)
        Xt = np.stack([-sa * d_a * cv - ca * d_v * sv,
                       -sa * d_a * sv + ca * d_v * cv,
                       ca * d_a * cp, ca * d_a * sp], axis=-1)
        Xp = np.stack([zero, zero, -sa * sp, sa * cp], axis=-1)
        nu = _cross4(X, Xt, Xp)
        nu = nu / np.linalg.norm(nu, axis=-1, keepdims=True)
        if not need_shape:
            return X, Xt, Xp, nu, None, None
        rad = -sa * d_a ** 2 + ca * dda
        Xtt = np.stack([
            -ca * d_a ** 2 * cv - sa * dda * cv + 2 * sa * d_a * d_v * sv
            - ca * ddv * sv - ca * d_v ** 2 * cv,
            -ca * d_a ** 2 * sv - sa * dda * sv - 2 * sa * d_a * d_v * cv
            + ca * ddv * cv - ca * d_v ** 2 * sv,
            rad * cp, rad * sp], axis=-1)
        Xtp = np.stack([zero, zero, -ca * d_a * sp, ca * d_a * cp], axis=-1)
        Xpp = np.stack([zero, zero, -sa * cp, -sa * sp], axis=-1)
        return X, Xt, Xp, nu, (Xtt, Xtp, Xpp), None

    def shape_data(u):
        X, Xt, Xp, nu, second, _ = geom(u, need_shape=True)
        Xtt, Xtp, Xpp = second
        g11 = np.einsum("...i,...i", Xt, Xt)
        g22 = np.einsum("...i,...i", Xp, Xp)
        h11 = np.einsum("...i,...i", nu, Xtt)
        h12 = np.einsum("...i,...i", nu, Xtp)
        h22 = np.einsum("...i,...i", nu, Xpp)
        root = np.sqrt(g11 * g22)
        A11, A12, A22 = h11 / g11, h12 / root, h22 / g22
        return A11, A12, A22, g11, g22

    def position(u):
        return geom(u, need_shape=False)[0]

    def tangents(u):
        X, Xt, Xp, nu, _, _ = geom(u, need_shape=False)
        return np.stack([Xt, Xp], axis=-2)

    def normal(u):
        return geom(u, need_shape=False)[3]

    def shape_frame(u):
        A11, A12, A22, _, _ = shape_data(u)
        A = np.empty(A11.shape + (2, 2))
        A[..., 0, 0] = A11
        A[..., 0, 1] = A[..., 1, 0] = A12
        A[..., 1, 1] = A22
        return A

    def asq(u):
        A11, A12, A22, _, _ = shape_data(u)
        return A11 ** 2 + 2.0 * A12 ** 2 + A22 ** 2

    def sqrt_det_g(u):
        _, _, _, g11, g22 = shape_data(u)
        return np.sqrt(g11 * g22)  # cross term vanishes for this chart

    family = GeometryFamily(
        name=f"otsuki({profile.p},{profile.q})",
        ambient_dim=4,
        surface_dim=2,
        param_domain=ParamDomain((0.0, 0.0), (L, 2.0 * np.pi), (True, True)),
        position=position,
        tangents=tangents,
        normal=normal,
        shape_frame=shape_frame,
        asq=asq,
        sqrt_det_g=sqrt_det_g,
        extra={"profile": profile, "length": L},
    )
    # self-check on the requested mesh resolution, never skipped
    grid_t = np.linspace(0.0, L, nt, endpoint=False)
    grid_p = np.linspace(0.0, 2.0 * np.pi, nphi, endpoint=False)
    tt, pp = np.meshgrid(grid_t, grid_p, indexing="ij")
    u = np.stack([tt.ravel(), pp.ravel()], axis=-1)
    A11, A12, A22, _, _ = shape_data(u)
    trace = float(np.abs(A11 + A22).max())
    if trace > 1e-6:
        raise GenerationFailedError(
            f"minimality self-check failed: max |trace A| = {trace:.3e}")
    return family
