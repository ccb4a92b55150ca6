"""Displaced Fock states: the uniform in-plane field as a phase-space shift.

Adding a uniform (Ex', Ey') component to the radial field leaves the spectrum
untouched and displaces every eigenstate by the complex amplitude nu carried
in :class:`~dlh.params.DerivedScales`:

    D(nu) = exp(nu a+ - nu* a-),        |n(nu), m> = D(nu) |n, m>,
    H_nu  = hbar |omega| [(a+ - nu*)(a- - nu) + 1/2] = D H D^dag.

D acts on the level ladder only, so it commutes with b+- and the radial
index m rides along unchanged.

Two independent routes build the matrix of D and are checked against each
other on the interior block: a dense matrix exponential of the anti-Hermitian
generator, and the normally ordered product
e^{-|nu|^2/2} e^{nu a+} e^{-nu* a-} whose factors are finite series in the
nilpotent truncated ladders.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linalg import max_abs
from .errors import ConsistencyError, ValidationError
from .fock import FockBasis, OperatorMatrix, ladder_a, state_from_ground
from .params import DerivedScales, PhysicalConfig, derive_scales

__all__ = [
    "DisplacedState",
    "displacement_matrix",
    "dual_route_deviation",
    "displaced_state",
    "displaced_hamiltonian",
    "position_shift",
]

# Truncation guards on the coherent amplitude: the displaced vacuum has mean
# level occupation |nu|^2, so the basis must extend well past it.
_NU_ERROR_FACTOR = 0.5   # |nu|^2 > n_max/2 is refused
_NU_WARN_FACTOR = 0.125  # |nu|^2 > n_max/8 warns

_DUAL_ROUTE_TOL = 1e-8
_HNU_TOL = 1e-7


def _check_truncation(nu: complex, basis: FockBasis) -> None:
    occ = abs(nu) ** 2
    if occ > _NU_ERROR_FACTOR * basis.n_max:
        raise ValidationError(
            f"|nu|^2 = {occ:.3g} exceeds n_max/2 = {basis.n_max / 2:.3g}: "
            "displacement would push most weight past the truncation"
        )
    if occ > _NU_WARN_FACTOR * basis.n_max:
        warnings.warn(
            f"|nu|^2 = {occ:.3g} exceeds n_max/8 = {basis.n_max / 8:.3g}; "
            "displaced-state tails are close to the truncation",
            stacklevel=3,
        )


def _nilpotent_exp(A: np.ndarray, degree: int) -> np.ndarray:
    # exp of a nilpotent matrix: the series terminates after `degree` powers
    out = np.eye(A.shape[0], dtype=complex)
    term = np.eye(A.shape[0], dtype=complex)
    for j in range(1, degree + 1):
        term = term @ A / j
        out += term
    return out


def displacement_matrix(nu: complex, basis: FockBasis, check: bool = True) -> OperatorMatrix:
    """Matrix of D(nu) = exp(nu a+ - nu* a-) on the truncated basis.

    Parameters
    ----------
    nu : complex
        Phase-space displacement amplitude.
    basis : FockBasis
        Truncated basis; n_max must comfortably exceed |nu|^2.
    check : bool
        Also build the normally ordered route
        e^{-|nu|^2/2} e^{nu a+} e^{-nu* a-} and require interior agreement
        to 1e-8 max-norm, raising ConsistencyError otherwise.

    Notes
    -----
    The dense route exponentiates the anti-Hermitian generator with
    scipy.linalg.expm. Truncation makes D slightly non-unitary in the last
    few levels; on the interior block columns are orthonormal to roundoff.
    """
    nu = complex(nu)
    _check_truncation(nu, basis)
    ap = ladder_a(basis, "plus").entries
    am = ladder_a(basis, "minus").entries
    gen = nu * ap - np.conj(nu) * am
    dense = scipy.linalg.expm(gen)
    if check:
        dev = dual_route_deviation(nu, basis, _dense=dense)
        if dev > _DUAL_ROUTE_TOL:
            raise ConsistencyError(
                f"dense-exponential and normally ordered D(nu) disagree by {dev:.3e} "
                f"on the interior block (tol {_DUAL_ROUTE_TOL:.0e})"
            )
    return OperatorMatrix(dense, basis)


def dual_route_deviation(nu: complex, basis: FockBasis, _dense: np.ndarray | None = None) -> float:
    """Interior max deviation between the two routes to D(nu).

    Compares the dense matrix exponential against the normally ordered
    product e^{-|nu|^2/2} e^{nu a+} e^{-nu* a-}; the interior block excludes
    the upper half of the level range, where truncation bends both routes.
    """
    nu = complex(nu)
    _check_truncation(nu, basis)
    ap = ladder_a(basis, "plus").entries
    am = ladder_a(basis, "minus").entries
    if _dense is None:
        _dense = scipy.linalg.expm(nu * ap - np.conj(nu) * am)
    ordered = (
        math.exp(-abs(nu) ** 2 / 2.0)
        * _nilpotent_exp(nu * ap, basis.n_max)
        @ _nilpotent_exp(-np.conj(nu) * am, basis.n_max)
    )
    interior = basis.interior_indices(n_margin=max(1, basis.n_max // 2), m_margin=0)
    return max_abs(_dense[np.ix_(interior, interior)], ordered[np.ix_(interior, interior)])


@dataclass(frozen=True)
class DisplacedState:
    """Coefficient vector of D(nu)|n, m> with its truncation deficit.

    trunc_deficit = |1 - ||c||| measures weight lost past the basis cut.
    """

    n: int
    m: int
    nu: complex
    coefficients: np.ndarray
    trunc_deficit: float


def displaced_state(n: int, m: int, nu: complex, basis: FockBasis) -> DisplacedState:
    """Expand D(nu)|n, m> over the truncated basis."""
    vec = state_from_ground(basis, n, m)
    D = displacement_matrix(nu, basis, check=False)
    coeff = D.entries @ vec
    deficit = abs(1.0 - float(np.linalg.norm(coeff)))
    return DisplacedState(n=n, m=m, nu=complex(nu), coefficients=coeff, trunc_deficit=deficit)


def displaced_hamiltonian(
    nu: complex, basis: FockBasis, scales: DerivedScales, check: bool = True
) -> OperatorMatrix:
    """H_nu = hbar |omega| [(a+ - nu*)(a- - nu) + 1/2].

    With check=True the same operator is built as D H D^dag and the two
    constructions must agree to 1e-7 max-norm on the interior block
    (truncation spoils the conjugation route near the cut).
    """
    nu = complex(nu)
    ap = ladder_a(basis, "plus").entries
    am = ladder_a(basis, "minus").entries
    eye = np.eye(basis.size, dtype=complex)
    hw = scales.energy_quantum
    direct = hw * ((ap - np.conj(nu) * eye) @ (am - nu * eye) + 0.5 * eye)
    if check:
        h0 = hw * (ap @ am + 0.5 * eye)
        D = displacement_matrix(nu, basis, check=False).entries
        conjugated = D @ h0 @ D.conj().T
        interior = basis.interior_indices(n_margin=max(1, basis.n_max // 2), m_margin=0)
        dev = max_abs(direct[np.ix_(interior, interior)], conjugated[np.ix_(interior, interior)])
        if dev > _HNU_TOL * max(1.0, hw):
            raise ConsistencyError(
                f"H_nu direct form and D H D^dag disagree by {dev:.3e} on the interior "
                f"block (tol {_HNU_TOL:.0e} x energy quantum)"
            )
    return OperatorMatrix(direct, basis)


def position_shift(config: PhysicalConfig) -> tuple[float, float]:
    """Shift (dx, dy) = (2 alpha l_m^2 Ex'/hbar, 2 alpha l_m^2 Ey'/hbar).

    This is the argument substitution that turns H into H_nu,
    H_nu = H(x + dx, y + dy), quoted in the conventional branch-independent
    magnitude form. Note it is NOT the centroid displacement of the displaced
    states: D(nu) translates densities by
    (-sqrt(2) l_m nu_y, +sigma sqrt(2) l_m nu_x), half the Hamiltonian shift
    with a sign twist, because the level ladder displaces the cyclotron
    coordinate while the guiding center stays put. The grid oracle pins the
    centroid value; this function reports the Hamiltonian shift.
    """
    scales = derive_scales(config)
    k = 2.0 * config.alpha * scales.l_m**2 / config.hbar
    return (k * config.Ex_prime, k * config.Ey_prime)
