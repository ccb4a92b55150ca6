"""Berry connection of the displaced Landau levels over (Ex', Ey', lambda, B).

Within one Landau level n the degenerate states |n(nu), m> acquire a
Mead-Berry connection A_km(xi) = i <n(nu), k | d/dxi | n(nu), m>. Two routes
are implemented:

* :func:`connection_general` follows the chain rule through nu(xi) and
  l_m(xi): the in-plane field components move nu directly, while lambda and B
  move both nu (through l_m) and the basis scale itself.
* :func:`connection_closed_form` evaluates the resolved closed forms.

Both use the sign convention fixed by the finite-difference oracle
(:mod:`dlh.oracle`); the two possible sign choices for the diagonal pair and
for the off-diagonal band are recorded in :data:`SIGN_CONVENTION`. In this
convention, with c = 1/(4 u sqrt(lambda B)) and m the radial index,

    A(Ex')_mm      = -Ey' / (16 u^2 lambda B)
    A(Ey')_mm      = +Ex' / (16 u^2 lambda B)
    A(lam)_{m+1,m} = +(Ey' - i Ex') sqrt(m+1) / (8 u lambda^{3/2} B^{1/2})
    A(B)_{m+1,m}   = +(Ey' - i Ex') sqrt(m+1) / (8 u lambda^{1/2} B^{3/2})

with Hermitian conjugate entries below the diagonal. The off-diagonal
prefactor 1/(8u) equals u exactly when hbar = alpha (natural units); only
1/(8u) keeps the holonomy angle invariant under a change of units. Matrix
elements do not depend on the level index n, only on m; n is accepted for
interface symmetry with the per-level holonomy and checked for validity.

Everything here assumes lambda > 0 and B > 0. The formulas carry no explicit
sigma: chirality is absorbed in the (n, m) labeling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "CONTROL_PARAMS",
    "ConnectionMatrix",
    "SIGN_CONVENTION",
    "connection_general",
    "connection_closed_form",
    "connection_matrix",
    "chain_rule_consistency",
    "abelian_curvature",
]

CONTROL_PARAMS = ("Ex_prime", "Ey_prime", "lambda_density", "B")

# Resolved vs rejected sign choices, surfaced by `dlh oracle-check`.
SIGN_CONVENTION = {
    "diagonal_relative_sign": "opposite",
    "diagonal_resolved": {
        "Ex_prime": "-Ey'/(16 u^2 lam B)",
        "Ey_prime": "+Ex'/(16 u^2 lam B)",
    },
    "diagonal_rejected": (
        "same-sign variant: makes A dEx' + A dEy' an exact 1-form with zero "
        "curvature, contradicting the measured loop phase"
    ),
    "offdiagonal_sign": "+1",
    "offdiagonal_prefactor": "1/(8u), equal to u when hbar = alpha",
    "curvature_closed_form": "+1/(8 u^2 lam B)",
    "area_law_coefficient": "-1/(16 u^2 lam B)",
    "curvature_over_area_law": -2.0,
}


def _unpack(point) -> tuple[float, float, float, float]:
    try:
        ex, ey, lam, b = (float(v) for v in point)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"point must be 4 numbers (Ex', Ey', lambda, B): {point!r}") from exc
    if lam <= 0 or b <= 0:
        raise ValidationError(f"lambda and B must be positive, got lambda={lam}, B={b}")
    return ex, ey, lam, b


def _check_param(param: str) -> None:
    if param not in CONTROL_PARAMS:
        raise ValidationError(f"unknown control parameter {param!r}, expected one of {CONTROL_PARAMS}")


def _check_u(u: float) -> None:
    if not u > 0:
        raise ValidationError(f"u must be positive, got {u}")


def _check_level_and_m(n: int, m_row: int, m_col: int) -> None:
    if n < 0:
        raise ValidationError(f"Landau level n must be >= 0, got {n}")
    if m_row < 0 or m_col < 0:
        raise ValidationError(f"radial indices must be >= 0, got ({m_row}, {m_col})")


def connection_general(
    param: str, point, u: float, n: int, m_row: int, m_col: int
) -> complex:
    """Connection element by the chain rule through nu(xi) and l_m(xi).

    diag:      -Im(conj(nu) d(nu)/dxi)
    band +-1:  dln(l_m)/dxi * [conj(nu) sqrt(m+1) above, nu sqrt(m) below]

    The within-level piece of the basis-rescaling generator vanishes (pure
    scaling only connects adjacent levels), so these two terms are the whole
    element.
    """
    _check_param(param)
    _check_u(u)
    _check_level_and_m(n, m_row, m_col)
    ex, ey, lam, b = _unpack(point)
    c = 1.0 / (4.0 * u * math.sqrt(lam * b))
    nu = complex(-c * ey, -c * ex)
    if param == "Ex_prime":
        dnu, dlnl = complex(0.0, -c), 0.0
    elif param == "Ey_prime":
        dnu, dlnl = complex(-c, 0.0), 0.0
    elif param == "lambda_density":
        dnu, dlnl = -nu / (2.0 * lam), -1.0 / (2.0 * lam)
    else:
        dnu, dlnl = -nu / (2.0 * b), -1.0 / (2.0 * b)
    if m_row == m_col:
        return complex(-((np.conj(nu) * dnu).imag), 0.0)
    if m_row == m_col + 1:
        return dlnl * np.conj(nu) * math.sqrt(m_col + 1)
    if m_row == m_col - 1:
        return dlnl * nu * math.sqrt(m_col)
    return 0.0 + 0.0j


def connection_closed_form(
    param: str, point, u: float, n: int, m_row: int, m_col: int
) -> complex:
    """Connection element from the resolved closed forms (see module docstring)."""
    _check_param(param)
    _check_u(u)
    _check_level_and_m(n, m_row, m_col)
    ex, ey, lam, b = _unpack(point)
    if param in ("Ex_prime", "Ey_prime"):
        if m_row != m_col:
            return 0.0 + 0.0j
        k = 1.0 / (16.0 * u * u * lam * b)
        return complex(-ey * k, 0.0) if param == "Ex_prime" else complex(ex * k, 0.0)
    if param == "lambda_density":
        pref = 1.0 / (8.0 * u * lam ** 1.5 * math.sqrt(b))
    else:
        pref = 1.0 / (8.0 * u * math.sqrt(lam) * b ** 1.5)
    if m_row == m_col + 1:
        return pref * complex(ey, -ex) * math.sqrt(m_col + 1)
    if m_row == m_col - 1:
        return pref * complex(ey, ex) * math.sqrt(m_col)
    return 0.0 + 0.0j


@dataclass(frozen=True)
class ConnectionMatrix:
    """Connection component on the window m_lo..m_hi of level n.

    entries[i, j] = A_{(m_lo+i),(m_lo+j)}(param) at `point`; Hermitian and
    tridiagonal by construction (the in-plane components are diagonal).
    """

    param: str
    point: tuple[float, float, float, float]
    n: int
    m_lo: int
    m_hi: int
    entries: np.ndarray

    @property
    def window(self) -> range:
        return range(self.m_lo, self.m_hi + 1)


def connection_matrix(
    param: str, point, u: float, n: int, window: tuple[int, int]
) -> ConnectionMatrix:
    """Assemble the window matrix of one connection component.

    The lower window edge m_lo = 0 is physical (the sqrt(m) coupling to
    m = -1 vanishes identically); any other edge is an artificial cut and
    windows should be widened to test sensitivity.
    """
    m_lo, m_hi = window
    if not (0 <= m_lo <= m_hi):
        raise ValidationError(f"window must satisfy 0 <= m_lo <= m_hi, got {window}")
    size = m_hi - m_lo + 1
    A = np.zeros((size, size), dtype=complex)
    for i in range(size):
        A[i, i] = connection_closed_form(param, point, u, n, m_lo + i, m_lo + i)
        if i + 1 < size:
            A[i + 1, i] = connection_closed_form(param, point, u, n, m_lo + i + 1, m_lo + i)
            A[i, i + 1] = connection_closed_form(param, point, u, n, m_lo + i, m_lo + i + 1)
    ex, ey, lam, b = _unpack(point)
    return ConnectionMatrix(param=param, point=(ex, ey, lam, b), n=n, m_lo=m_lo, m_hi=m_hi, entries=A)


def chain_rule_consistency(point, u: float, n: int, window: tuple[int, int]) -> dict[str, float]:
    """Max |general - closed_form| per parameter over the window, plus "max".

    Exercises every band entry (diagonal and both off-diagonals) including
    one row beyond each window edge so edge couplings are covered too.
    """
    m_lo, m_hi = window
    if not (0 <= m_lo <= m_hi):
        raise ValidationError(f"window must satisfy 0 <= m_lo <= m_hi, got {window}")
    out: dict[str, float] = {}
    worst = 0.0
    for param in CONTROL_PARAMS:
        dev = 0.0
        for m in range(m_lo, m_hi + 1):
            for k in (m - 1, m, m + 1):
                if k < 0:
                    continue
                g = connection_general(param, point, u, n, k, m)
                c = connection_closed_form(param, point, u, n, k, m)
                dev = max(dev, abs(g - c))
        out[param] = dev
        worst = max(worst, dev)
    out["max"] = worst
    return out


def abelian_curvature(point, u: float) -> float:
    """Curvature d A(Ey')/dEx' - d A(Ex')/dEy' = +1/(8 u^2 lambda B).

    Constant over the (Ex', Ey') plane; equal to -2 times the area-law
    coefficient -1/(16 u^2 lambda B) used by the gamma_area_law branch.
    """
    _check_u(u)
    _, _, lam, b = _unpack(point)
    return 1.0 / (8.0 * u * u * lam * b)
