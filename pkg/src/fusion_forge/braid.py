"""Braiding eigenvalues, conformal weights, abelian phases and the explicit
3x3 braid/Jones representation on three fusion strands.

Parameters: q = e^{-i pi/kappa}, r = q^{2n-1}, kappa = level + 2(n-1).  The
braiding operator on the square of the vector module has eigenvalues
(q, -q^{-1}, r^{-1}) on the (sym, alt, vacuum) channels; the Jones projection
is the spectral projection for r^{-1}.  All matrices are kept in the
non-orthonormal module basis (c2, g1 c2, c1 c2); nothing here is unitarised.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from fusion_forge.fusion import kappa_of
from fusion_forge.weights import AdmissibilityError, Weight, casimir


class DecompositionUnavailableError(ValueError):
    """Raised for level < 2, where the three-channel decomposition of the
    squared vector module is truncated away."""


class BraidInvariantError(ArithmeticError):
    """A defining algebraic relation failed its numerical residual bound."""


@dataclass(frozen=True)
class BraidParams:
    n: int
    level: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("rank must be at least 3")
        if self.level < 1:
            raise ValueError("level must be at least 1")

    @property
    def kappa(self) -> int:
        return kappa_of(self.n, self.level)

    @property
    def q(self) -> complex:
        return cmath.exp(-1j * math.pi / self.kappa)

    @property
    def r(self) -> complex:
        return self.q ** (2 * self.n - 1)


def conformal_weight(lam: Weight, n: int, level: int) -> Fraction:
    """Delta = C_lam / (2 kappa) as an exact rational."""
    return casimir(lam) / (2 * kappa_of(n, level))


def braiding_eigenvalues(params: BraidParams) -> tuple[complex, complex, complex]:
    """(beta_sym, beta_alt, beta_0) = (q, -q^{-1}, r^{-1}); needs level >= 2."""
    if params.level < 2:
        raise DecompositionUnavailableError(
            "decomposition unavailable: sym/alt channels need level >= 2"
        )
    q, r = params.q, params.r
    return q, -1 / q, 1 / r


def abelian_phase(
    c2: Fraction | float,
    c3: Fraction | float,
    c4: Fraction | float,
    symmetric: int,
    kappa: float,
) -> complex:
    """Phase of an abelian braiding: sign * e^{-i pi beta} with
    beta = (C4 - C2 - C3)/(2 kappa); sign is +-1 for a symmetric or
    antisymmetric channel."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if symmetric not in (1, -1):
        raise ValueError("symmetric must be +1 or -1")
    beta = (float(c4) - float(c2) - float(c3)) / (2.0 * kappa)
    return symmetric * cmath.exp(-1j * math.pi * beta)


SIGMA_CHANNEL = {"sym": 1, "alt": -1, "vac": 1}


@dataclass(frozen=True)
class WenzlRep:
    """The explicit 3x3 representation of the 3-strand braid/Jones relations
    in the basis (c2, g1 c2, c1 c2), together with its defining scalars
    z = 1 + (r - r^{-1})/(q - q^{-1}) and tau = z^{-2}."""

    params: BraidParams
    g1: np.ndarray
    g2: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    z: complex
    tau: complex

    @property
    def e1(self) -> np.ndarray:
        return self.c1 / self.z

    @property
    def e2(self) -> np.ndarray:
        return self.c2 / self.z

    def braid_residual(self) -> float:
        return _maxabs(self.g1 @ self.g2 @ self.g1 - self.g2 @ self.g1 @ self.g2)

    def cubic_residual(self) -> float:
        q, r = self.params.q, self.params.r
        eye = np.eye(3)
        out = 0.0
        for g in (self.g1, self.g2):
            rel = (g - eye / r) @ (g + eye / q) @ (g - eye * q)
            out = max(out, _maxabs(rel))
        return out

    def jones_residual(self) -> float:
        """max of || e1 e2 e1 - tau e1 || and || c1 c2 c1 - c1 ||."""
        a = _maxabs(self.c1 @ self.c2 @ self.c1 - self.c1)
        e1 = self.e1
        b = _maxabs(e1 @ self.e2 @ e1 - self.tau * e1)
        return max(a, b)

    def spectral_residual(self) -> float:
        """e_i reconstructed as the spectral projection
        (g - q)(g + q^{-1})/((r^{-1} - q)(r^{-1} + q^{-1}))."""
        q, r = self.params.q, self.params.r
        eye = np.eye(3)
        denom = (1 / r - q) * (1 / r + 1 / q)
        out = 0.0
        for g, e in ((self.g1, self.e1), (self.g2, self.e2)):
            proj = (g - q * eye) @ (g + eye / q) / denom
            out = max(out, _maxabs(proj - e))
        return out

    def square_relation_residual(self) -> float:
        """g^2 = 1 + (q - q^{-1}) g - z r^{-1} (q - q^{-1}) e, both positions."""
        q, r = self.params.q, self.params.r
        dq = q - 1 / q
        eye = np.eye(3)
        out = 0.0
        for g, e in ((self.g1, self.e1), (self.g2, self.e2)):
            rel = g @ g - (eye + dq * g - self.z / r * dq * e)
            out = max(out, _maxabs(rel))
        return out

    def to_json(self) -> dict:
        return {
            "q": [self.params.q.real, self.params.q.imag],
            "r": [self.params.r.real, self.params.r.imag],
            "tau": [self.tau.real, self.tau.imag],
            "braid_residual": self.braid_residual(),
            "jones_residual": self.jones_residual(),
        }


def _maxabs(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat)))


def wenzl_rep(params: BraidParams, check_tol: float = 1e-12) -> WenzlRep:
    """Build the explicit matrices and verify every defining relation.

    Raises :class:`BraidInvariantError` naming the first relation whose
    residual exceeds ``check_tol``.
    """
    if params.level < 2:
        raise DecompositionUnavailableError(
            "decomposition unavailable: Jones data needs level >= 2"
        )
    q, r = params.q, params.r
    dq = q - 1 / q
    if abs(dq) < 1e-14:
        raise ValueError("q - q^{-1} vanishes; representation degenerates")
    z = 1 + (r - 1 / r) / dq
    g1 = np.array(
        [[0, 1, 0], [1, dq, 0], [0, -dq / r, 1 / r]], dtype=np.complex128
    )
    g2 = np.array(
        [[1 / r, 0, -dq], [0, 0, 1], [0, 1, dq]], dtype=np.complex128
    )
    c1 = np.array([[0, 0, 0], [0, 0, 0], [1, 1 / r, z]], dtype=np.complex128)
    c2 = np.array([[z, r, 1], [0, 0, 0], [0, 0, 0]], dtype=np.complex128)
    rep = WenzlRep(params=params, g1=g1, g2=g2, c1=c1, c2=c2, z=z, tau=1 / z**2)
    checks = [
        ("braid relation g1 g2 g1 = g2 g1 g2", rep.braid_residual()),
        ("cubic relation (g - 1/r)(g + 1/q)(g - q) = 0", rep.cubic_residual()),
        ("Jones relation e1 e2 e1 = tau e1", rep.jones_residual()),
        ("spectral projection identity", rep.spectral_residual()),
        ("square relation for g", rep.square_relation_residual()),
        ("tau z^2 = 1", abs(rep.tau * z * z - 1)),
    ]
    for name, resid in checks:
        if resid > check_tol:
            raise BraidInvariantError(f"{name} failed: residual {resid:.3e}")
    return rep


def qdim_from_jones(params: BraidParams) -> float:
    """The quantum dimension of the vector module from the Jones relation:
    d = z = 1 + (r - r^{-1})/(q - q^{-1}), a real number."""
    if params.level < 2:
        raise DecompositionUnavailableError("needs level >= 2")
    q, r = params.q, params.r
    z = 1 + (r - 1 / r) / (q - 1 / q)
    if abs(z.imag) > 1e-12:
        raise BraidInvariantError(f"z has spurious imaginary part {z.imag:.3e}")
    return z.real


def conjugate_spectra_residual(rep: WenzlRep) -> float:
    """g1 and g2 are conjugate: their eigenvalue multisets must coincide."""
    e1 = np.sort_complex(np.linalg.eigvals(rep.g1))
    e2 = np.sort_complex(np.linalg.eigvals(rep.g2))
    return float(np.max(np.abs(e1 - e2)))
