"""Adaptive embedded Runge-Kutta transport for complex linear systems along
paths in the punctured plane.

A single Dormand-Prince 5(4) core drives everything: straight segments,
piecewise-linear paths, and circular arcs (for monodromy loops).  The
integrator works natively on complex state vectors; tolerances are the
contract (relative 1e-11, absolute 1e-14 by default).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

# Dormand-Prince 5(4) tableau
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


class StepUnderflowError(RuntimeError):
    """The adaptive controller pushed the step below the representable floor,
    typically because the path runs too close to a singular point."""


def integrate(
    f: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t0: float,
    t1: float,
    rtol: float = 1e-11,
    atol: float = 1e-14,
    max_steps: int = 2_000_000,
) -> np.ndarray:
    """Integrate dy/dt = f(t, y) from t0 to t1 (t real, y complex)."""
    y = np.asarray(y0, dtype=np.complex128).copy()
    t = t0
    span = t1 - t0
    if span == 0:
        return y
    direction = 1.0 if span > 0 else -1.0
    h = direction * min(abs(span), 1e-2 * abs(span) + 1e-6)
    floor = 1e-14 * abs(span)
    for _ in range(max_steps):
        if direction * (t + h - t1) > 0:
            h = t1 - t
        k = [f(t, y)]
        for row in _A[1:]:
            ti = t + h * sum(row)
            yi = y + h * sum(c * ki for c, ki in zip(row, k))
            k.append(f(ti, yi))
        y5 = y + h * sum(b * ki for b, ki in zip(_B5, k))
        y4 = y + h * sum(b * ki for b, ki in zip(_B4, k))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = math.sqrt(float(np.mean((np.abs(y5 - y4) / scale) ** 2)))
        if err <= 1.0:
            t += h
            y = y5
            if direction * (t - t1) >= 0 or abs(t - t1) < floor:
                return y
        factor = 0.9 * (1.0 / err) ** 0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        if abs(h) < floor:
            raise StepUnderflowError(
                f"step size underflow at t={t:.6g} (err={err:.3g})"
            )
    raise RuntimeError("integrator exceeded max_steps")


def transport_segments(
    rhs_z: Callable[[complex, np.ndarray], np.ndarray],
    y0: np.ndarray,
    points: Sequence[complex],
    rtol: float = 1e-11,
    atol: float = 1e-14,
) -> np.ndarray:
    """Transport y along the piecewise-linear path through ``points``.

    ``rhs_z(z, y)`` is dy/dz; each segment is pulled back to t in [0, 1].
    """
    y = np.asarray(y0, dtype=np.complex128).copy()
    for z_a, z_b in zip(points[:-1], points[1:]):
        dz = z_b - z_a

        def f(t: float, yy: np.ndarray) -> np.ndarray:
            return dz * rhs_z(z_a + t * dz, yy)

        y = integrate(f, y, 0.0, 1.0, rtol=rtol, atol=atol)
    return y


def transport_arc(
    rhs_z: Callable[[complex, np.ndarray], np.ndarray],
    y0: np.ndarray,
    center: complex,
    radius: float,
    theta0: float,
    theta1: float,
    rtol: float = 1e-11,
    atol: float = 1e-14,
) -> np.ndarray:
    """Transport along the arc z = center + radius e^{i theta}."""

    def f(theta: float, yy: np.ndarray) -> np.ndarray:
        z = center + radius * complex(math.cos(theta), math.sin(theta))
        dz = 1j * radius * complex(math.cos(theta), math.sin(theta))
        return dz * rhs_z(z, yy)

    return integrate(f, np.asarray(y0, dtype=np.complex128), theta0, theta1,
                     rtol=rtol, atol=atol)


def transport_collect(
    rhs_z: Callable[[complex, np.ndarray], np.ndarray],
    y0: np.ndarray,
    z_points: Sequence[complex],
    rtol: float = 1e-11,
    atol: float = 1e-14,
) -> np.ndarray:
    """Transport along the polyline through ``z_points`` recording the state
    at every listed point (first entry is y0 itself)."""
    y = np.asarray(y0, dtype=np.complex128).copy()
    out = np.empty((len(z_points), y.size), dtype=np.complex128)
    out[0] = y
    for idx in range(1, len(z_points)):
        y = transport_segments(rhs_z, y, [z_points[idx - 1], z_points[idx]],
                               rtol=rtol, atol=atol)
        out[idx] = y
    return out


def monodromy_matrix(
    rhs_z: Callable[[complex, np.ndarray], np.ndarray],
    base: complex,
    center: complex,
    dim: int,
    rtol: float = 1e-11,
    atol: float = 1e-14,
) -> np.ndarray:
    """Monodromy of the system around ``center``: transport the identity frame
    from ``base`` to the circle |z - center| = |base' - center| along a radial
    segment, once counterclockwise around, and back.

    Columns are the transported basis vectors.
    """
    radius = abs(base - center)
    theta_b = math.atan2((base - center).imag, (base - center).real)
    cols = []
    for i in range(dim):
        e = np.zeros(dim, dtype=np.complex128)
        e[i] = 1.0
        y = transport_arc(rhs_z, e, center, radius, theta_b, theta_b + 2 * math.pi,
                          rtol=rtol, atol=atol)
        cols.append(y)
    return np.stack(cols, axis=1)
