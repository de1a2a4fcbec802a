"""Exact D_n root/weight lattice machinery.

Weights are stored in *doubled* orthogonal coordinates ``c_i = 2*lambda_i``
so that half-integral (spinor) weights stay in integer arithmetic.  All
operations here are pure functions over immutable values; inner products and
Casimirs are returned as :class:`fractions.Fraction`.

Conventions (rank n >= 3 throughout):

* roots are ``+-theta_i +- theta_j`` (i < j); the highest root is
  ``theta = theta_1 + theta_2``,
* a weight is dominant iff ``c_1 >= c_2 >= ... >= c_{n-1} >= |c_n|``,
* the Weyl group is S_n acting together with an even number of sign changes,
* the level-``l`` alcove consists of the dominant weights with
  ``<lambda, theta> <= l``, i.e. ``c_1 + c_2 <= 2*l``,
* the four minimal dominant weights are ``0``, ``v = theta_1``,
  ``s+ = (theta_1 + ... + theta_n)/2`` and
  ``s- = (theta_1 + ... + theta_{n-1} - theta_n)/2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence


class RankMismatchError(ValueError):
    """Two weights of different rank were combined."""


class AdmissibilityError(ValueError):
    """A weight violated a dominance/admissibility precondition."""


@dataclass(frozen=True, order=True)
class Weight:
    """A D_n weight in doubled orthogonal coordinates (exact integers)."""

    coords2: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords2) < 3:
            raise ValueError("rank must be at least 3")
        parities = {c % 2 for c in self.coords2}
        if len(parities) > 1:
            raise ValueError(
                f"mixed coordinate parity in {self.coords2}: weight is neither "
                "integral nor half-integral"
            )

    @property
    def n(self) -> int:
        return len(self.coords2)

    @property
    def is_spinor(self) -> bool:
        """True iff the weight is half-integral (a two-valued SO(2n) label)."""
        return self.coords2[0] % 2 == 1

    def is_dominant(self) -> bool:
        c = self.coords2
        return all(c[i] >= c[i + 1] for i in range(self.n - 2)) and c[-2] >= abs(c[-1])

    def __add__(self, other: "Weight") -> "Weight":
        _check_rank(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords2, other.coords2)))

    def __sub__(self, other: "Weight") -> "Weight":
        _check_rank(self, other)
        return Weight(tuple(a - b for a, b in zip(self.coords2, other.coords2)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords2))

    def conjugate(self) -> "Weight":
        """-w0 applied to the weight: identity for n even, flips c_n for n odd."""
        if self.n % 2 == 0:
            return self
        return Weight(self.coords2[:-1] + (-self.coords2[-1],))

    def to_json(self) -> list[int]:
        return list(self.coords2)

    def __repr__(self) -> str:
        return f"Weight({list(self.coords2)})"


def _check_rank(a: Weight, b: Weight) -> None:
    if a.n != b.n:
        raise RankMismatchError(f"rank mismatch: {a.n} vs {b.n}")


def zero(n: int) -> Weight:
    return Weight((0,) * n)


def vector_weight(n: int) -> Weight:
    """theta_1, the highest weight of the defining SO(2n) module."""
    return Weight((2,) + (0,) * (n - 1))


def spinor_plus(n: int) -> Weight:
    """(theta_1 + ... + theta_n)/2, doubled coordinates [1, ..., 1]."""
    return Weight((1,) * n)


def spinor_minus(n: int) -> Weight:
    """(theta_1 + ... + theta_{n-1} - theta_n)/2, doubled [1, ..., 1, -1]."""
    return Weight((1,) * (n - 1) + (-1,))


def sym_power_weight(n: int, k: int) -> Weight:
    """k * theta_1, the k-th symmetric traceless power of the vector module."""
    return Weight((2 * k,) + (0,) * (n - 1))


def inner(a: Weight, b: Weight) -> Fraction:
    """Standard inner product <a, b> = sum a_i b_i as an exact rational."""
    _check_rank(a, b)
    return Fraction(sum(x * y for x, y in zip(a.coords2, b.coords2)), 4)


def norm2(a: Weight) -> Fraction:
    return inner(a, a)


def rho(n: int) -> Weight:
    """Half-sum of positive roots: rho = sum_j (n - j) theta_j."""
    return Weight(tuple(2 * (n - j) for j in range(1, n + 1)))


def positive_roots(n: int) -> list[Weight]:
    """theta_i - theta_j and theta_i + theta_j for i < j."""
    out: list[Weight] = []
    for i in range(n):
        for j in range(i + 1, n):
            for sign in (-1, 1):
                c = [0] * n
                c[i] = 2
                c[j] = 2 * sign
                out.append(Weight(tuple(c)))
    return out


def is_minimal(lam: Weight) -> bool:
    """True iff |<lam, alpha>| <= 1 for every root alpha = +-theta_i +- theta_j.

    Minimal weights are exactly those of minimal length in their root-lattice
    coset; their modules have all weights in a single Weyl orbit.
    """
    c = lam.coords2
    n = lam.n
    for i in range(n):
        for j in range(i + 1, n):
            # <lam, theta_i +- theta_j> = (c_i +- c_j)/2
            if abs(c[i] + c[j]) > 2 or abs(c[i] - c[j]) > 2:
                return False
    return True


def weyl_orbit(lam: Weight) -> frozenset[Weight]:
    """The full orbit under permutations and even numbers of sign changes.

    |W| = 2^(n-1) n!; fine for the ranks this library targets (n <= 8).
    """
    n = lam.n
    out: set[Weight] = set()
    for perm in set(itertools.permutations(lam.coords2)):
        nonzero = [i for i, c in enumerate(perm) if c != 0]
        zeros = n - len(nonzero)
        # choose which nonzero entries to flip; with a zero entry present any
        # number of flips is realisable (pair the odd flip with a zero slot)
        for r in range(len(nonzero) + 1):
            if zeros == 0 and r % 2 == 1:
                continue
            for flips in itertools.combinations(nonzero, r):
                c = list(perm)
                for i in flips:
                    c[i] = -c[i]
                out.add(Weight(tuple(c)))
    return frozenset(out)


def weyl_group(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (permutation, signs) pairs with an even number of -1 signs.

    The permutation maps position i to sigma(i); element determinants are
    sgn(sigma) since the sign-change part always has determinant +1.
    """
    elems = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n - 1):
            last = 1
            if signs.count(-1) % 2 == 1:
                last = -1
            elems.append((perm, signs + (last,)))
    return elems


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def apply_weyl(elem: tuple[tuple[int, ...], tuple[int, ...]], lam: Weight) -> Weight:
    perm, signs = elem
    c = [0] * lam.n
    for i, ci in enumerate(lam.coords2):
        c[perm[i]] = signs[perm[i]] * ci
    return Weight(tuple(c))


@dataclass(frozen=True)
class Alcove:
    """The level-l alcove: dominant weights with <lambda, theta> <= l,
    sorted lexicographically on doubled coordinates."""

    n: int
    level: int
    weights: tuple[Weight, ...]

    def index(self, lam: Weight) -> int:
        try:
            return self._position[lam]
        except KeyError:
            raise AdmissibilityError(f"{lam} is not admissible at level {self.level}")

    def __contains__(self, lam: Weight) -> bool:
        return lam in self._position

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def _position(self) -> dict[Weight, int]:
        # computed lazily; the dataclass is frozen so cache on the instance dict
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = {w: i for i, w in enumerate(self.weights)}
            object.__setattr__(self, "_position_cache", cached)
        return cached

    def to_json(self) -> list[list[int]]:
        return [w.to_json() for w in self.weights]


def alcove(n: int, level: int) -> Alcove:
    """Enumerate all admissible dominant weights of both parities."""
    if n < 3:
        raise ValueError("rank must be at least 3")
    if level < 1:
        raise ValueError("level must be at least 1")
    found: list[Weight] = []
    for parity in (0, 1):
        found.extend(_dominant_chains(n, 2 * level, parity))
    found.sort(key=lambda w: w.coords2)
    return Alcove(n=n, level=level, weights=tuple(found))


def _dominant_chains(n: int, two_level: int, parity: int) -> Iterable[Weight]:
    """All c_1 >= ... >= c_{n-1} >= |c_n|, all === parity mod 2,
    c_1 + c_2 <= two_level."""

    def rec(prefix: list[int]) -> Iterable[Weight]:
        depth = len(prefix)
        if depth == n - 1:
            bound = prefix[-1]
            start = -bound if (bound - parity) % 2 == 0 else -bound + 1
            for cn in range(start, bound + 1, 2):
                yield Weight(tuple(prefix) + (cn,))
            return
        if depth == 0:
            hi = two_level - parity
        elif depth == 1:
            hi = min(prefix[0], two_level - prefix[0])
        else:
            hi = prefix[-1]
        for c in range(parity, hi + 1, 2):
            yield from rec(prefix + [c])

    # enumerate with c_1 outermost; recursion keeps the dominance chain
    yield from rec([])


class CenterElement(Enum):
    """Elements of Z(Spin_2n), named by the minimal dominant weight they add
    to the vacuum at level 1: v = theta_1, s+ = all-plus spinor, s- = spinor
    with flipped last coordinate.

    The group is Z2 x Z2 for n even and Z4 for n odd (spin tags of order 4).
    """

    IDENTITY = "1"
    Z_V = "v"
    Z_SPLUS = "s+"
    Z_SMINUS = "s-"


def minimal_weight_of(z: CenterElement, n: int) -> Weight:
    return {
        CenterElement.IDENTITY: zero(n),
        CenterElement.Z_V: vector_weight(n),
        CenterElement.Z_SPLUS: spinor_plus(n),
        CenterElement.Z_SMINUS: spinor_minus(n),
    }[z]


def coset_label(lam: Weight) -> CenterElement:
    """Which of the four root-lattice cosets of the weight lattice lam lies in.

    The root lattice is the even-coordinate-sum integer lattice; cosets are
    labelled by their minimal dominant representative.
    """
    c = lam.coords2
    n = lam.n
    if c[0] % 2 == 0:
        half_sum = sum(ci // 2 for ci in c)
        return CenterElement.IDENTITY if half_sum % 2 == 0 else CenterElement.Z_V
    shifted = (sum(c) - n) // 2
    return CenterElement.Z_SPLUS if shifted % 2 == 0 else CenterElement.Z_SMINUS


def center_mul(a: CenterElement, b: CenterElement, n: int) -> CenterElement:
    """Group law, computed by adding minimal representatives modulo roots."""
    return coset_label(minimal_weight_of(a, n) + minimal_weight_of(b, n))


def center_elements() -> tuple[CenterElement, ...]:
    return (
        CenterElement.IDENTITY,
        CenterElement.Z_V,
        CenterElement.Z_SPLUS,
        CenterElement.Z_SMINUS,
    )


def center_act(z: CenterElement, lam: Weight, level: int) -> Weight:
    """The affine action of the centre on the level-l alcove.

    Realised by the explicit affine maps (doubled coordinates, L = 2*level):

    * ``z_v``:  (L - c_1, c_2, ..., c_{n-1}, -c_n)
    * ``z_s+``: n even  (L/2 - c_n, ..., L/2 - c_1)
                n odd   (L/2 + c_n, L/2 - c_{n-1}, ..., L/2 - c_1)
    * ``z_s-``: n even  (L/2 + c_n, L/2 - c_{n-1}, ..., L/2 - c_2, -L/2 + c_1)
                n odd   (L/2 - c_n, ..., L/2 - c_2, -L/2 + c_1)

    At level 1 the action is left multiplication by the element's minimal
    weight, hence transitive and free on the four alcove points.
    """
    c = lam.coords2
    n = lam.n
    two_l = 2 * level
    if not lam.is_dominant() or c[0] + c[1] > two_l:
        raise AdmissibilityError(f"{lam} is not admissible at level {level}")
    if z is CenterElement.IDENTITY:
        return lam
    if z is CenterElement.Z_V:
        return Weight((two_l - c[0],) + c[1:-1] + (-c[-1],))
    half = level  # L/2 in doubled coordinates
    rev = c[::-1]
    if z is CenterElement.Z_SPLUS:
        if n % 2 == 0:
            return Weight(tuple(half - ci for ci in rev))
        return Weight((half + c[-1],) + tuple(half - ci for ci in rev[1:]))
    if z is CenterElement.Z_SMINUS:
        if n % 2 == 0:
            return Weight(
                (half + c[-1],)
                + tuple(half - ci for ci in rev[1:-1])
                + (-half + c[0],)
            )
        return Weight(tuple(half - ci for ci in rev[:-1]) + (-half + c[0],))
    raise ValueError(f"unknown centre element {z}")


def casimir(lam: Weight) -> Fraction:
    """<lam, lam + 2 rho> as an exact rational; requires lam dominant."""
    if not lam.is_dominant():
        raise AdmissibilityError(f"{lam} is not dominant")
    r = rho(lam.n)
    return inner(lam, lam) + 2 * inner(lam, r)


# ---------------------------------------------------------------------------
# Lattice 2-cocycles


@dataclass(frozen=True)
class LatticeCocycle:
    """A +-1-valued 2-cocycle on the lattice spanned by ``basis`` whose
    commutator map is (-1)^<alpha, beta>, normalised so that
    eps(lam, 0) = eps(0, lam) = eps(lam, -lam) = 1.

    Realised as the upper-triangular bimultiplicative sign rule twisted by
    the coboundary of ``_gauge`` (the twist only affects the normalisations,
    never the commutator map).
    """

    basis: tuple[Weight, ...]
    gram2: tuple[tuple[int, ...], ...]

    def coordinates(self, lam: Weight) -> tuple[int, ...]:
        """Integer coordinates of lam in the basis; error if not in lattice."""
        coeffs = _solve_integer(self.basis, lam)
        if coeffs is None:
            raise ValueError(f"{lam} is not in the lattice span of the basis")
        return coeffs

    def _pair_exponent(self, m: Sequence[int], k: Sequence[int]) -> int:
        # sum_{i>j} m_i k_j <b_i, b_j>, doubled Gram entries halved exactly
        total = 0
        for i in range(len(m)):
            for j in range(i):
                g = self.gram2[i][j]
                if g % 2 != 0:
                    raise ValueError("basis Gram matrix is not integral")
                total += m[i] * k[j] * (g // 2)
        return total

    def _gauge(self, m: Sequence[int]) -> int:
        # a(lam) with a(lam) a(-lam) = eps0(lam, lam), forcing eps(lam,-lam)=1
        total = 0
        for i in range(len(m)):
            for j in range(i):
                u = m[i] * m[j]
                total += (self.gram2[i][j] // 2) * (u * (u + 1) // 2)
        return total

    def sign(self, alpha: Weight, beta: Weight) -> int:
        """eps(alpha, beta) in {+1, -1}."""
        m = self.coordinates(alpha)
        k = self.coordinates(beta)
        mk = tuple(a + b for a, b in zip(m, k))
        expo = (
            self._pair_exponent(m, k)
            + self._gauge(m)
            + self._gauge(k)
            - self._gauge(mk)
        )
        return -1 if expo % 2 else 1

    def commutator(self, alpha: Weight, beta: Weight) -> int:
        return self.sign(alpha, beta) * self.sign(beta, alpha)


def build_cocycle(basis: Sequence[Weight]) -> LatticeCocycle:
    """Construct the sign cocycle on the lattice spanned by ``basis``.

    The basis must be integrally independent and span an even lattice (all
    inner products integral, norms even), as is the case for the D_n root
    lattice basis returned by :func:`root_basis`.
    """
    basis = tuple(basis)
    if not basis:
        raise ValueError("empty basis")
    gram2 = tuple(
        tuple(int(2 * inner(a, b)) for b in basis) for a in basis
    )
    for i, row in enumerate(gram2):
        if any(g % 2 for g in row):
            raise ValueError("pairwise inner products must be integral")
        if (row[i] // 2) % 2 != 0:
            raise ValueError("basis vectors must have even norm")
    if _lattice_rank(basis) != len(basis):
        raise ValueError("basis vectors are not integrally independent")
    return LatticeCocycle(basis=basis, gram2=gram2)


def root_basis(n: int) -> list[Weight]:
    """Simple roots theta_i - theta_{i+1} (i < n) and theta_{n-1} + theta_n."""
    out = []
    for i in range(n - 1):
        c = [0] * n
        c[i] = 2
        c[i + 1] = -2
        out.append(Weight(tuple(c)))
    c = [0] * n
    c[n - 2] = 2
    c[n - 1] = 2
    out.append(Weight(tuple(c)))
    return out


def _lattice_rank(vectors: Sequence[Weight]) -> int:
    rows = [[Fraction(c) for c in v.coords2] for v in vectors]
    rank = 0
    cols = len(rows[0])
    pivot_col = 0
    for row_i in range(len(rows)):
        while pivot_col < cols:
            pivot = next(
                (r for r in range(row_i, len(rows)) if rows[r][pivot_col] != 0), None
            )
            if pivot is None:
                pivot_col += 1
                continue
            rows[row_i], rows[pivot] = rows[pivot], rows[row_i]
            lead = rows[row_i][pivot_col]
            for r in range(len(rows)):
                if r != row_i and rows[r][pivot_col] != 0:
                    factor = rows[r][pivot_col] / lead
                    rows[r] = [a - factor * b for a, b in zip(rows[r], rows[row_i])]
            rank += 1
            pivot_col += 1
            break
    return rank


def _solve_integer(basis: Sequence[Weight], target: Weight) -> tuple[int, ...] | None:
    """Solve sum m_i b_i = target for integers m_i (exact elimination)."""
    r = len(basis)
    cols = basis[0].n
    aug = [
        [Fraction(basis[j].coords2[i]) for j in range(r)]
        + [Fraction(target.coords2[i])]
        for i in range(cols)
    ]
    row = 0
    pivots: list[int] = []
    for col in range(r):
        pivot = next((i for i in range(row, cols) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        lead = aug[row][col]
        aug[row] = [a / lead for a in aug[row]]
        for i in range(cols):
            if i != row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    solution = [Fraction(0)] * r
    for i, col in enumerate(pivots):
        solution[col] = aug[i][r]
    for i in range(row, cols):
        if aug[i][r] != 0:
            return None
    if any(s.denominator != 1 for s in solution):
        return None
    return tuple(int(s) for s in solution)


# ---------------------------------------------------------------------------
# Extension property of intermediate lattices


def extension_property(n: int, generators: Iterable[CenterElement]) -> bool:
    """Whether the preimage lattice of the subgroup generated by ``generators``
    admits a bilinear extension of the root-lattice commutator form.

    Cyclic subgroups: a generator of order k with minimal weight lam extends
    iff k * <lam, lam> is even.  The full Klein group (n even) extends iff
    n is a multiple of 4.
    """
    if n < 3:
        raise ValueError("rank must be at least 3")
    elements = {CenterElement.IDENTITY}
    frontier = [CenterElement.IDENTITY]
    gens = list(generators)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = center_mul(x, g, n)
            if y not in elements:
                elements.add(y)
                frontier.append(y)
    if elements == {CenterElement.IDENTITY}:
        return True
    order = len(elements)
    cyclic = any(_element_order(g, n) == order for g in elements)
    if cyclic:
        gen = next(g for g in elements if _element_order(g, n) == order)
        k_norm = order * norm2(minimal_weight_of(gen, n))
        return k_norm.denominator == 1 and k_norm.numerator % 2 == 0
    # Klein four-group, only possible for n even
    return n % 4 == 0


def _element_order(z: CenterElement, n: int) -> int:
    acc = z
    order = 1
    while acc is not CenterElement.IDENTITY:
        acc = center_mul(acc, z, n)
        order += 1
    return order
