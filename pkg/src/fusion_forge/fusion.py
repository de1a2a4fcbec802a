"""Truncated tensor rules, fusion matrices, characters and quantum dimensions.

The rule set: for a *minimal* generator lambda the level-l fusion matrix is
the tensor decomposition ``V_mu (x) V_lambda = (+)_nu V_{mu+nu}`` (nu running
over the Weyl orbit of lambda with mu + nu dominant) with non-admissible
channels dropped.  General products are derived by simultaneous
diagonalisation on the character eigenbasis and hard-fail on non-integral
entries rather than rounding silently.

Characters are evaluated at the special points S_mu = exp(2 pi i (mu+rho)/kappa)
with kappa = level + 2(n-1); exactness lives only in the integer matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from fusion_forge.weights import (
    AdmissibilityError,
    Alcove,
    CenterElement,
    Weight,
    alcove,
    apply_weyl,
    coset_label,
    inner,
    is_minimal,
    minimal_weight_of,
    perm_sign,
    positive_roots,
    rho,
    weyl_group,
    weyl_orbit,
    zero,
)


class NonIntegralFusionError(ArithmeticError):
    """Diagonalisation produced an entry too far from a non-negative integer."""


def kappa_of(n: int, level: int) -> int:
    """Shifted level l + 2(n-1); 2(n-1) is the dual Coxeter number."""
    return level + 2 * (n - 1)


def tensor_with_minimal(mu: Weight, lam_min: Weight) -> list[Weight]:
    """Summands of V_mu (x) V_lam for minimal lam: {mu + nu dominant}, each
    with multiplicity one, sorted lexicographically."""
    if not is_minimal(lam_min) or not lam_min.is_dominant():
        raise ValueError(f"{lam_min} is not a minimal dominant weight")
    if not mu.is_dominant():
        raise AdmissibilityError(f"{mu} is not dominant")
    out = [mu + nu for nu in weyl_orbit(lam_min) if (mu + nu).is_dominant()]
    return sorted(out, key=lambda w: w.coords2)


@dataclass(frozen=True)
class FusionMatrix:
    """Integer fusion matrix of a generator acting on a level-l alcove.

    ``matrix[i][j]`` is the multiplicity of channel ``weights[j]`` in the
    product of the generator with ``weights[i]`` (row = input, column =
    output channel).  With this orientation every character vector phi_mu is
    an eigenvector: ``matrix @ phi_mu = phi_mu(H_gen) phi_mu``.
    """

    alcove: Alcove
    generator: Weight
    matrix: np.ndarray  # shape (|alcove|, |alcove|), dtype int64

    def to_json(self) -> dict:
        return {
            "n": self.alcove.n,
            "level": self.alcove.level,
            "alcove": self.alcove.to_json(),
            "generator": self.generator.to_json(),
            "matrix": self.matrix.tolist(),
        }


def fusion_matrix(lam_min: Weight, alc: Alcove) -> FusionMatrix:
    """Level-truncated tensor rule for a minimal admissible generator."""
    if lam_min not in alc:
        raise AdmissibilityError(
            f"{lam_min} is not admissible at level {alc.level}"
        )
    if not is_minimal(lam_min):
        raise ValueError(f"{lam_min} is not minimal; use verlinde_product")
    size = len(alc)
    mat = np.zeros((size, size), dtype=np.int64)
    for i, mu in enumerate(alc.weights):
        for nu in tensor_with_minimal(mu, lam_min):
            if nu in alc:
                mat[i, alc.index(nu)] += 1
    return FusionMatrix(alcove=alc, generator=lam_min, matrix=mat)


@dataclass(frozen=True)
class CharacterVector:
    """chi_nu(S_mu) for nu over the alcove, S_mu = exp(2 pi i (mu+rho)/kappa)."""

    mu: Weight
    alcove: Alcove
    values: np.ndarray  # complex, indexed like alcove.weights


def character_vector(mu: Weight, alc: Alcove) -> CharacterVector:
    """Evaluate every alcove character at S_mu by the alternating Weyl sum.

    chi_nu = A_{nu+rho}/A_rho with A_beta(exp(2 pi i t/kappa)) =
    sum_w det(w) e^{2 pi i <w beta, t>/kappa}.  Cost is |W| = 2^(n-1) n!
    per character value; fine for the n <= 8 this library targets.
    """
    if mu not in alc:
        raise AdmissibilityError(f"{mu} not in alcove at level {alc.level}")
    n = alc.n
    kappa = kappa_of(n, alc.level)
    r = rho(n)
    t = mu + r
    group = weyl_group(n)
    # <w beta, t> in doubled coordinates is (sum_i signs[perm[i]] beta_i t_{perm[i]})/4,
    # linear in beta with coefficient vector images[g]
    signs_det = np.array([perm_sign(p) for p, _ in group], dtype=np.float64)
    images = np.zeros((len(group), n))
    t_arr = np.array(t.coords2, dtype=np.float64)
    for g_idx, (perm, sgns) in enumerate(group):
        for i in range(n):
            images[g_idx, i] = sgns[perm[i]] * t_arr[perm[i]]
    values = np.zeros(len(alc), dtype=np.complex128)
    beta0 = np.array(r.coords2, dtype=np.float64)
    phase = 2.0 * math.pi / (4.0 * kappa)  # doubled coords on both slots
    denom = np.sum(signs_det * np.exp(1j * phase * (images @ beta0)))
    if abs(denom) < 1e-12:
        raise ZeroDivisionError("Weyl denominator A_rho vanished at S_mu")
    for j, nu in enumerate(alc.weights):
        beta = np.array((nu + r).coords2, dtype=np.float64)
        numer = np.sum(signs_det * np.exp(1j * phase * (images @ beta)))
        values[j] = numer / denom
    return CharacterVector(mu=mu, alcove=alc, values=values)


def quantum_dim(lam: Weight, n: int, level: int) -> float:
    """Positive statistical dimension by the sine product over positive roots:
    prod_{alpha>0} sin(pi <lam+rho, alpha>/kappa) / sin(pi <rho, alpha>/kappa)."""
    alc = alcove(n, level)
    if lam not in alc:
        raise AdmissibilityError(f"{lam} not admissible at level {level}")
    kappa = kappa_of(n, level)
    r = rho(n)
    top = lam + r
    out = 1.0
    for alpha in positive_roots(n):
        num = math.sin(math.pi * float(inner(top, alpha)) / kappa)
        den = math.sin(math.pi * float(inner(r, alpha)) / kappa)
        out *= num / den
    return out


def vector_qdim_closed(n: int, level: int) -> float:
    """1 + sin((2n-1) pi/kappa) / sin(pi/kappa), the vector-module dimension."""
    kappa = kappa_of(n, level)
    return 1.0 + math.sin((2 * n - 1) * math.pi / kappa) / math.sin(math.pi / kappa)


def vector_character_at_q0(n: int, level: int) -> float:
    """chi of the vector module at exp(2 pi i rho / kappa): the weights are
    +-theta_j, so the character is an explicit cosine sum."""
    kappa = kappa_of(n, level)
    return 2.0 * sum(math.cos(2.0 * math.pi * j / kappa) for j in range(n))


def level1_ring(n: int) -> dict[tuple[CenterElement, CenterElement], CenterElement]:
    """Multiplication table of the level-1 fusion ring on {0, v, s+, s-}.

    The product of two level-1 representations is the unique minimal dominant
    weight in the root-lattice coset of the sum of their highest weights; the
    table is the group algebra of Z2 x Z2 (n even) or Z4 (n odd).
    """
    if n < 3:
        raise ValueError("rank must be at least 3")
    labels = (
        CenterElement.IDENTITY,
        CenterElement.Z_V,
        CenterElement.Z_SPLUS,
        CenterElement.Z_SMINUS,
    )
    table = {}
    for a in labels:
        for b in labels:
            table[(a, b)] = coset_label(
                minimal_weight_of(a, n) + minimal_weight_of(b, n)
            )
    return table


def verlinde_product(
    lam: Weight, mu: Weight, alc: Alcove, tol: float = 1e-6
) -> np.ndarray:
    """Integer decomposition vector of the product H_lam x H_mu over the alcove.

    Assembled by simultaneous diagonalisation: with P the matrix of character
    vectors, N_lam = P diag(chi_lam(S_delta)) P^{-1}; entry [nu] is the
    multiplicity of H_nu.  Raises if any entry is farther than ``tol`` from a
    non-negative integer (the construction is only trusted when it lands on
    integers) or if P is numerically singular.
    """
    for w in (lam, mu):
        if w not in alc:
            raise AdmissibilityError(f"{w} not admissible at level {alc.level}")
    nmat = _diagonalized_fusion(lam, alc)
    row = nmat[alc.index(mu)]
    rounded = np.rint(row.real)
    if np.max(np.abs(row - rounded)) > tol or np.min(rounded) < -0.5:
        raise NonIntegralFusionError(
            "diagonalization inconsistency: entries "
            f"{row.tolist()} are not non-negative integers within {tol}"
        )
    return rounded.astype(np.int64)


_DIAG_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _character_table(alc: Alcove) -> tuple[np.ndarray, np.ndarray]:
    """P[nu_idx, delta_idx] = chi_nu(S_delta) and its inverse."""
    key = (alc.n, alc.level)
    cached = _DIAG_CACHE.get(key)
    if cached is None:
        cols = [character_vector(delta, alc).values for delta in alc.weights]
        p = np.stack(cols, axis=1)
        cond = np.linalg.cond(p)
        if not np.isfinite(cond) or cond > 1e10:
            raise np.linalg.LinAlgError(
                f"character matrix numerically singular (cond={cond:.3g})"
            )
        p_inv = np.linalg.inv(p)
        _DIAG_CACHE[key] = (p, p_inv, cond)
        cached = _DIAG_CACHE[key]
    return cached[0], cached[1]


def _diagonalized_fusion(lam: Weight, alc: Alcove) -> np.ndarray:
    p, p_inv = _character_table(alc)
    lam_row = p[alc.index(lam), :]  # chi_lam(S_delta) over delta
    return (p * lam_row[np.newaxis, :]) @ p_inv


@dataclass(frozen=True)
class PerronFrobeniusReport:
    n: int
    level: int
    strongly_connected: bool
    eigenvalue: float
    eigenvector_residual: float
    power_iteration_eigenvalue: float
    power_iteration_residual: float
    all_entries_positive: bool

    @property
    def passed(self) -> bool:
        return (
            self.strongly_connected
            and self.all_entries_positive
            and self.eigenvector_residual < 1e-9
            and self.power_iteration_residual < 1e-6
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "level": self.level,
            "strongly_connected": self.strongly_connected,
            "eigenvalue": self.eigenvalue,
            "eigenvector_residual": self.eigenvector_residual,
            "power_iteration_eigenvalue": self.power_iteration_eigenvalue,
            "power_iteration_residual": self.power_iteration_residual,
            "all_entries_positive": self.all_entries_positive,
        }


def perron_frobenius_check(n: int, level: int) -> PerronFrobeniusReport:
    """Verify the Perron-Frobenius structure of the vector-module fusion matrix
    restricted to single-valued (integral) weights: irreducibility, the
    quantum-dimension eigenvector, and power-iteration convergence."""
    alc = alcove(n, level)
    from fusion_forge.weights import vector_weight

    box = vector_weight(n)
    full = fusion_matrix(box, alc).matrix
    single = [i for i, w in enumerate(alc.weights) if not w.is_spinor]
    sub = full[np.ix_(single, single)].astype(np.float64)
    connected = _strongly_connected(sub)
    dims = np.array(
        [quantum_dim(alc.weights[i], n, level) for i in single], dtype=np.float64
    )
    eig = vector_qdim_closed(n, level)
    resid = float(np.max(np.abs(sub @ dims - eig * dims)) / np.max(np.abs(dims)))
    pi_eig, pi_resid = _power_iteration(sub, eig)
    return PerronFrobeniusReport(
        n=n,
        level=level,
        strongly_connected=connected,
        eigenvalue=eig,
        eigenvector_residual=resid,
        power_iteration_eigenvalue=pi_eig,
        power_iteration_residual=abs(pi_eig - eig),
        all_entries_positive=bool(np.all(dims > 0)),
    )


def _strongly_connected(mat: np.ndarray) -> bool:
    size = mat.shape[0]
    if size == 0:
        return False

    def reach(adj: np.ndarray) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in np.nonzero(adj[i])[0]:
                if j not in seen:
                    seen.add(int(j))
                    stack.append(int(j))
        return len(seen) == size

    return reach(mat > 0) and reach(mat.T > 0)


def _power_iteration(
    mat: np.ndarray, hint: float, iters: int = 4000, tol: float = 1e-13
) -> tuple[float, float]:
    vec = np.ones(mat.shape[0])
    last = 0.0
    for _ in range(iters):
        nxt = mat @ vec
        norm = np.linalg.norm(nxt)
        if norm == 0:
            return 0.0, abs(hint)
        nxt = nxt / norm
        est = float(nxt @ (mat @ nxt))
        if abs(est - last) < tol:
            return est, abs(est - hint)
        last = est
        vec = nxt
    return last, abs(last - hint)


def weyl_dimension(lam: Weight) -> int:
    """Classical Weyl dimension of the irreducible module (plumbing oracle
    for dimension bookkeeping in tensor-product tests)."""
    n = lam.n
    r = rho(n)
    top = lam + r
    num = Fraction(1)
    den = Fraction(1)
    for alpha in positive_roots(n):
        num *= inner(top, alpha)
        den *= inner(r, alpha)
    value = num / den
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral Weyl dimension for {lam}")
    return int(value)


def alternating_sum_qdim(lam: Weight, n: int, level: int) -> float:
    """Independent oracle for quantum_dim: brute-force alternating Weyl sums
    chi_lam(exp(2 pi i rho/kappa)) = A_{lam+rho}/A_rho."""
    kappa = kappa_of(n, level)
    r = rho(n)
    group = weyl_group(n)
    phase = 2.0 * math.pi / (4.0 * kappa)

    def a_func(beta: Weight) -> complex:
        total = 0.0 + 0.0j
        b = beta.coords2
        rr = r.coords2
        for perm, sgns in group:
            dot = sum(sgns[perm[i]] * b[i] * rr[perm[i]] for i in range(n))
            total += perm_sign(perm) * cmath.exp(1j * phase * dot)
        return total

    return (a_func(lam + r) / a_func(r)).real
