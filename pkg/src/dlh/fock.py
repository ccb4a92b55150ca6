"""Truncated two-ladder Fock space for the effective Landau problem.

States are labeled |n, m> with n the Landau level and m >= 0 the radial
index; the angular momentum quantum number is l = sigma * (m - n). In this
labeling the two commuting ladder algebras decouple completely:

    a+ |n, m> = sqrt(n+1) |n+1, m>      a- |n, m> = sqrt(n)   |n-1, m>
    b+ |n, m> = sqrt(m)   |n, m-1>      b- |n, m> = sqrt(m+1) |n, m+1>

with [a-, a+] = [b+, b-] = 1 and every a commuting with every b, so all four
operators are Kronecker products and no sigma branching enters matrix
construction. sigma only decides how (n, m) reads back as (n, l).

The energy depends on n alone, E_n = hbar |omega| (n + 1/2); the b ladder
walks the degenerate states inside one level. The ground state is annihilated
by a- and b+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .params import DerivedScales

__all__ = [
    "FockBasis",
    "OperatorMatrix",
    "build_basis",
    "ladder_a",
    "ladder_b",
    "hamiltonian_matrix",
    "lz_matrix",
    "number_a",
    "number_b",
    "state_from_ground",
    "commutator",
]


@dataclass(frozen=True)
class FockBasis:
    """Truncated basis with 0 <= n <= n_max, 0 <= m <= m_max.

    Flat index is row-major in (n, m): idx = n * (m_max + 1) + m.
    """

    n_max: int
    m_max: int
    sigma: int = 1

    def __post_init__(self):
        if self.n_max < 0 or self.m_max < 0:
            raise ValidationError(
                f"truncation bounds must be >= 0, got n_max={self.n_max}, m_max={self.m_max}"
            )
        if self.sigma not in (1, -1):
            raise ValidationError(f"sigma must be +1 or -1, got {self.sigma}")

    @property
    def size(self) -> int:
        return (self.n_max + 1) * (self.m_max + 1)

    def index(self, n: int, m: int) -> int:
        if not (0 <= n <= self.n_max and 0 <= m <= self.m_max):
            raise ValidationError(
                f"(n={n}, m={m}) outside truncation n_max={self.n_max}, m_max={self.m_max}"
            )
        return n * (self.m_max + 1) + m

    def labels(self, idx: int) -> tuple[int, int]:
        """Inverse of :meth:`index`."""
        if not 0 <= idx < self.size:
            raise ValidationError(f"index {idx} outside basis of size {self.size}")
        return divmod(idx, self.m_max + 1)

    def ell(self, n: int, m: int) -> int:
        """Angular momentum quantum number l = sigma (m - n)."""
        return self.sigma * (m - n)

    def interior_indices(self, n_margin: int = 1, m_margin: int = 1) -> np.ndarray:
        """Flat indices with n <= n_max - n_margin and m <= m_max - m_margin.

        Truncated ladder identities hold exactly only away from the cut; tests
        and internal consistency checks restrict to this block.
        """
        ns, ms = np.divmod(np.arange(self.size), self.m_max + 1)
        keep = (ns <= self.n_max - n_margin) & (ms <= self.m_max - m_margin)
        return np.nonzero(keep)[0]


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex operator on a :class:`FockBasis`.

    hermitian_hint is validated at construction: setting it on a matrix that
    is not Hermitian to 1e-12 max-norm is an error, so the hint can be trusted
    downstream.
    """

    entries: np.ndarray
    basis: FockBasis
    hermitian_hint: bool = False
    _tol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", e)
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] != self.basis.size:
            raise ValidationError(
                f"entries shape {e.shape} does not match basis size {self.basis.size}"
            )
        if self.hermitian_hint:
            dev = np.max(np.abs(e - e.conj().T)) if e.size else 0.0
            if dev > self._tol:
                raise ValidationError(
                    f"hermitian_hint set but max|A - A^dag| = {dev:.3e} > {self._tol:.0e}"
                )

    @property
    def dims(self) -> tuple[int, int]:
        return self.entries.shape

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.basis)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.basis != other.basis:
            raise ValidationError("operator product across different bases")
        return OperatorMatrix(self.entries @ other.entries, self.basis)


def build_basis(n_max: int, m_max: int, sigma: int = 1) -> FockBasis:
    """Construct the truncated basis."""
    return FockBasis(n_max=n_max, m_max=m_max, sigma=sigma)


def _ladder_1d(dim: int, kind: str) -> np.ndarray:
    # creation: sub-diagonal sqrt(k+1); annihilation: super-diagonal sqrt(k)
    root = np.sqrt(np.arange(1, dim, dtype=float))
    if kind == "create":
        return np.diag(root, -1).astype(complex)
    return np.diag(root, +1).astype(complex)


def ladder_a(basis: FockBasis, direction: str) -> OperatorMatrix:
    """Level ladder: "plus" is a+ (raises n), "minus" is a- (lowers n).

    a+ acting on the top row n = n_max truncates to zero; every identity that
    involves a+ a- therefore only holds on the interior block.
    """
    if direction not in ("plus", "minus"):
        raise ValidationError(f'direction must be "plus" or "minus", got {direction!r}')
    an = _ladder_1d(basis.n_max + 1, "create" if direction == "plus" else "annihilate")
    im = np.eye(basis.m_max + 1, dtype=complex)
    return OperatorMatrix(np.kron(an, im), basis)


def ladder_b(basis: FockBasis, direction: str) -> OperatorMatrix:
    """Intra-level ladder: "plus" is b+ (lowers m), "minus" is b- (raises m).

    b+ annihilates every m = 0 state, which in (n, l) language says that
    m = n + sigma*l cannot go negative. For
    sigma = -1 b+ raises l; for sigma = +1 it lowers l. [b+, b-] = 1 on the
    interior block.
    """
    if direction not in ("plus", "minus"):
        raise ValidationError(f'direction must be "plus" or "minus", got {direction!r}')
    if direction == "plus":
        bm = _ladder_1d(basis.m_max + 1, "annihilate")  # lowers m, amplitude sqrt(m)
    else:
        bm = _ladder_1d(basis.m_max + 1, "create")  # raises m, amplitude sqrt(m+1)
    i_n = np.eye(basis.n_max + 1, dtype=complex)
    return OperatorMatrix(np.kron(i_n, bm), basis)


def number_a(basis: FockBasis) -> OperatorMatrix:
    """a+ a-: diagonal n."""
    ns = np.repeat(np.arange(basis.n_max + 1), basis.m_max + 1).astype(float)
    return OperatorMatrix(np.diag(ns).astype(complex), basis, hermitian_hint=True)


def number_b(basis: FockBasis) -> OperatorMatrix:
    """b- b+: diagonal m."""
    ms = np.tile(np.arange(basis.m_max + 1), basis.n_max + 1).astype(float)
    return OperatorMatrix(np.diag(ms).astype(complex), basis, hermitian_hint=True)


def hamiltonian_matrix(basis: FockBasis, scales: DerivedScales) -> OperatorMatrix:
    """H = hbar |omega| (a+ a- + 1/2): diagonal, m-degenerate."""
    ns = np.repeat(np.arange(basis.n_max + 1), basis.m_max + 1).astype(float)
    diag = scales.energy_quantum * (ns + 0.5)
    return OperatorMatrix(np.diag(diag).astype(complex), basis, hermitian_hint=True)


def lz_matrix(basis: FockBasis, scales: DerivedScales) -> OperatorMatrix:
    """L_z = sigma hbar (b- b+ - a+ a-): diagonal hbar * l with l = sigma (m - n)."""
    ns, ms = np.divmod(np.arange(basis.size), basis.m_max + 1)
    diag = scales.hbar * basis.sigma * (ms - ns).astype(float)
    return OperatorMatrix(np.diag(diag).astype(complex), basis, hermitian_hint=True)


def state_from_ground(basis: FockBasis, n: int, m: int) -> np.ndarray:
    """|n, m> = a+^n b-^m / sqrt(n! m!) |0, 0>, built by explicit ladder action.

    The m-raising operator is b- (amplitude sqrt(m+1)); b+ annihilates the
    ground state, so only (a+, b-) generate the basis from |0, 0>. Within the
    truncation the result is exactly the corresponding unit coordinate vector.
    """
    if not (0 <= n <= basis.n_max and 0 <= m <= basis.m_max):
        raise ValidationError(
            f"(n={n}, m={m}) outside truncation n_max={basis.n_max}, m_max={basis.m_max}"
        )
    vec = np.zeros(basis.size, dtype=complex)
    vec[basis.index(0, 0)] = 1.0
    ap = ladder_a(basis, "plus").entries
    bm = ladder_b(basis, "minus").entries
    for _ in range(m):
        vec = bm @ vec
    for _ in range(n):
        vec = ap @ vec
    vec /= math.sqrt(math.factorial(n) * math.factorial(m))
    return vec


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    """[A, B] = AB - BA on a shared basis."""
    if A.basis != B.basis:
        raise ValidationError("commutator across different bases")
    return OperatorMatrix(A.entries @ B.entries - B.entries @ A.entries, A.basis)
