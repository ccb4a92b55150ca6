"""Geometric phases and holonomies along loops in (Ex', Ey', lambda, B).

A loop is a piecewise-linear :class:`ParameterPath`. Three computations live
here, in increasing generality:

* :func:`abelian_phase` for loops confined to the in-plane field components
  at fixed lambda and B, where the connection is diagonal and the phase is
  curvature times signed area.
* :func:`commuting_angle` / :func:`commuting_holonomy` for loops at
  Ex' = 0, where every step generator is a real multiple of one fixed
  tridiagonal matrix T (T_{m+1,m} = sqrt(m+1)) and the path-ordered product
  collapses to exp(i S T / (4u)) with S the loop functional
  S = closed-integral of (lambda B)^(-1/2) dEy'.
* :func:`holonomy_path_ordered` for arbitrary loops, a midpoint product
  integrator with step doubling for an a-posteriori convergence estimate.

The step generator at a point has the closed shape

    Theta = phi I + zeta L + conj(zeta) L^T,
    phi  = (Ex' dEy' - Ey' dEx') / (16 u^2 lambda B),
    zeta = (Ey' - i Ex') [dlambda / (8 u lambda^{3/2} B^{1/2})
                          + dB / (8 u lambda^{1/2} B^{3/2})],

with L the lowering pattern L_{m+1,m} = sqrt(m+1) on the m-window. This is
the same data as :mod:`dlh.connection` contracted with the step vector; the
test suite checks the two agree entry by entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import max_abs, unitary_exp_i
from .connection import _check_u, _unpack
from .errors import ConvergenceError, ValidationError

__all__ = [
    "LOOP_KINDS",
    "ParameterPath",
    "rectangle_loop",
    "box_loop",
    "signed_area",
    "AbelianPhases",
    "abelian_phase",
    "loop_area_integral",
    "area_closed_form",
    "line_integral_area_check",
    "commuting_angle",
    "commuting_holonomy",
    "HolonomyResult",
    "holonomy_path_ordered",
    "unordered_holonomy",
    "noncommutativity_defect",
    "convergence_series",
    "partial_unitarity_series",
]

AXES = ("Ex_prime", "Ey_prime", "lambda_density", "B")
LOOP_KINDS = ("C1_rectangle", "ABCHEFA", "ABCHGFA", "ADCHEFA", "custom")

_CLOSURE_ATOL = 1e-12
_STEP_CAP = 2 ** 20

# 16-point Gauss-Legendre on [0, 1], for line integrals with curved weights.
_GAUSS_T, _GAUSS_W = np.polynomial.legendre.leggauss(16)
_GAUSS_T = 0.5 * (_GAUSS_T + 1.0)
_GAUSS_W = 0.5 * _GAUSS_W


def _validate_vertices(vertices) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 4 or v.shape[0] < 2:
        raise ValidationError(
            f"vertices must be (V, 4) with V >= 2 rows of (Ex', Ey', lambda, B), got shape {v.shape}"
        )
    if not np.all(np.isfinite(v)):
        raise ValidationError("vertices contain non-finite entries")
    if np.any(v[:, 2] <= 0) or np.any(v[:, 3] <= 0):
        raise ValidationError("lambda and B must stay positive at every vertex")
    return v


@dataclass(frozen=True)
class ParameterPath:
    """Piecewise-linear path through (Ex', Ey', lambda, B).

    Segments are straight in all four coordinates, so positivity of lambda
    and B at the vertices guarantees positivity along the whole path.
    """

    vertices: np.ndarray
    kind: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", _validate_vertices(self.vertices))
        if self.kind not in LOOP_KINDS:
            raise ValidationError(f"kind must be one of {LOOP_KINDS}, got {self.kind!r}")

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self.vertices, axis=0), axis=1)

    @property
    def is_closed(self) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.vertices))))
        return bool(np.max(np.abs(self.vertices[0] - self.vertices[-1])) <= _CLOSURE_ATOL * scale)

    def reversed(self) -> "ParameterPath":
        return ParameterPath(self.vertices[::-1].copy(), kind=self.kind)

    def discretize(self, steps: int) -> tuple[np.ndarray, np.ndarray]:
        """Midpoints and step vectors, `steps` split across segments by length.

        Every segment of nonzero length receives at least one step. The
        allocation is symmetric under path reversal, so a reversed path
        produces the mirrored midpoint sequence exactly.
        """
        if steps < 1:
            raise ValidationError(f"steps must be >= 1, got {steps}")
        lengths = self.segment_lengths
        total = float(lengths.sum())
        if total == 0.0:
            raise ValidationError("path has zero total length")
        mids, deltas = [], []
        for a, b, ln in zip(self.vertices[:-1], self.vertices[1:], lengths):
            if ln == 0.0:
                continue
            n = max(1, int(round(steps * ln / total)))
            t = (np.arange(n) + 0.5) / n
            mids.append(a + t[:, None] * (b - a))
            deltas.append(np.broadcast_to((b - a) / n, (n, 4)).copy())
        return np.concatenate(mids), np.concatenate(deltas)


def _base4(base_point) -> np.ndarray:
    p = np.asarray(base_point, dtype=float)
    if p.shape != (4,):
        raise ValidationError(f"base_point must have 4 entries, got shape {p.shape}")
    return p


def rectangle_loop(axis_a: str, axis_b: str, range_a, range_b, base_point) -> ParameterPath:
    """Axis-aligned rectangle in the (axis_a, axis_b) plane, other axes fixed.

    Traversal order a-up, b-up, a-down, b-down, so the signed area in the
    (axis_a, axis_b) plane is (a2 - a1)(b2 - b1). A rectangle in the
    in-plane field components is tagged C1_rectangle; anything else is
    custom.
    """
    if axis_a not in AXES or axis_b not in AXES or axis_a == axis_b:
        raise ValidationError(f"axes must be two distinct names from {AXES}")
    ia, ib = AXES.index(axis_a), AXES.index(axis_b)
    a1, a2 = (float(v) for v in range_a)
    b1, b2 = (float(v) for v in range_b)
    p = _base4(base_point)
    verts = np.tile(p, (5, 1))
    verts[:, ia] = (a1, a2, a2, a1, a1)
    verts[:, ib] = (b1, b1, b2, b2, b1)
    kind = "C1_rectangle" if {axis_a, axis_b} == {"Ex_prime", "Ey_prime"} else "custom"
    return ParameterPath(verts, kind=kind)


def box_loop(kind: str, ey_range, lam_range, b_range, ex: float = 0.0) -> ParameterPath:
    """One of three loop itineraries through the corners of an (Ey', lambda, B) box.

    Corners combine Ey' in {Ey1, Ey2}, lambda in {lam1, lam2}, B in {B1, B2};
    Ex' is held fixed (0 keeps all step generators real and mutually
    commuting). The itineraries differ in where the two Ey' legs sit:

        ABCHEFA: Ey' up at (lam2, B2), down at (lam1, B1)
        ABCHGFA: Ey' up at (lam1, B2), down at (lam1, B1)
        ADCHEFA: Ey' up at (lam1, B1), down at (lam1, B2)

    so their loop functionals S = closed-integral of (lam B)^(-1/2) dEy' are
    the closed forms in :func:`area_closed_form`.
    """
    ey1, ey2 = (float(v) for v in ey_range)
    l1, l2 = (float(v) for v in lam_range)
    b1, b2 = (float(v) for v in b_range)
    ex = float(ex)
    if kind == "ABCHEFA":
        rows = [
            (ey1, l1, b1), (ey1, l2, b1), (ey1, l2, b2), (ey2, l2, b2),
            (ey2, l1, b2), (ey2, l1, b1), (ey1, l1, b1),
        ]
    elif kind == "ABCHGFA":
        rows = [
            (ey1, l1, b1), (ey1, l2, b1), (ey1, l2, b2), (ey1, l1, b2),
            (ey2, l1, b2), (ey2, l1, b1), (ey1, l1, b1),
        ]
    elif kind == "ADCHEFA":
        rows = [
            (ey1, l1, b1), (ey2, l1, b1), (ey2, l2, b1), (ey2, l2, b2),
            (ey2, l1, b2), (ey1, l1, b2), (ey1, l1, b1),
        ]
    else:
        raise ValidationError(f"kind must be ABCHEFA, ABCHGFA or ADCHEFA, got {kind!r}")
    verts = np.array([(ex, ey, lam, b) for ey, lam, b in rows])
    return ParameterPath(verts, kind=kind)


def _require_closed(path: ParameterPath) -> None:
    if not path.is_closed:
        raise ValidationError("path must be closed (first vertex == last vertex)")


def signed_area(path: ParameterPath, plane: tuple[str, str] = ("Ex_prime", "Ey_prime")) -> float:
    """Shoelace signed area of a closed path lying in one coordinate plane.

    Counterclockwise in the (plane[0], plane[1]) orientation is positive.
    The two remaining coordinates must be constant along the path.
    """
    _require_closed(path)
    if plane[0] not in AXES or plane[1] not in AXES or plane[0] == plane[1]:
        raise ValidationError(f"plane must be two distinct names from {AXES}")
    ia, ib = AXES.index(plane[0]), AXES.index(plane[1])
    v = path.vertices
    for j in range(4):
        if j not in (ia, ib) and np.ptp(v[:, j]) != 0.0:
            raise ValidationError(f"path is not planar: {AXES[j]} varies along it")
    a, b = v[:, ia], v[:, ib]
    return 0.5 * float(np.sum(a[:-1] * b[1:] - a[1:] * b[:-1]))


@dataclass(frozen=True)
class AbelianPhases:
    """Both phase conventions for an in-plane field loop at fixed lambda, B.

    gamma_line_integral is the closed line integral of the diagonal
    connection, equal to curvature * signed_area; gamma_area_law is the
    area-law branch -signed_area/(16 u^2 lambda B). The two differ by an
    exact factor of -2 (sign and magnitude), which is the content of the
    sign-convention resolution in :data:`dlh.connection.SIGN_CONVENTION`.
    """

    signed_area: float
    curvature: float
    gamma_line_integral: float
    gamma_area_law: float

    @property
    def ratio(self) -> float:
        return self.gamma_line_integral / self.gamma_area_law


def abelian_phase(path: ParameterPath, u: float) -> AbelianPhases:
    """Phases for a closed loop in the (Ex', Ey') plane at fixed lambda, B.

    The diagonal connection is linear in the field components, so the
    per-segment midpoint rule used for the line integral is exact for
    polygonal loops.
    """
    _check_u(u)
    area = signed_area(path, plane=("Ex_prime", "Ey_prime"))
    v = path.vertices
    _, _, lam, b = _unpack(v[0])
    k = 1.0 / (16.0 * u * u * lam * b)
    ex, ey = v[:, 0], v[:, 1]
    dex, dey = np.diff(ex), np.diff(ey)
    mx, my = 0.5 * (ex[:-1] + ex[1:]), 0.5 * (ey[:-1] + ey[1:])
    gamma_line = float(k * np.sum(mx * dey - my * dex))
    return AbelianPhases(
        signed_area=area,
        curvature=1.0 / (8.0 * u * u * lam * b),
        gamma_line_integral=gamma_line,
        gamma_area_law=-area / (16.0 * u * u * lam * b),
    )


def loop_area_integral(path: ParameterPath) -> float:
    """Loop functional S = closed-integral of (lambda B)^(-1/2) dEy'.

    Gauss quadrature per segment; exact for the named box loops, where
    every segment has either dEy' = 0 or lambda, B constant.
    """
    _require_closed(path)
    total = 0.0
    for a, b in zip(path.vertices[:-1], path.vertices[1:]):
        dey = b[1] - a[1]
        if dey == 0.0:
            continue
        lam = a[2] + _GAUSS_T * (b[2] - a[2])
        bb = a[3] + _GAUSS_T * (b[3] - a[3])
        total += dey * float(np.sum(_GAUSS_W / np.sqrt(lam * bb)))
    return total


def area_closed_form(kind: str, ey_range, lam_range, b_range) -> float:
    """Closed form of the loop functional S for the named box itineraries.

    With w_ij = (lam_i B_j)^(-1/2):

        ABCHEFA: (Ey2 - Ey1)(w_22 - w_11)
        ABCHGFA: (Ey2 - Ey1)(w_12 - w_11)
        ADCHEFA: the negative of ABCHGFA

    All three vanish when Ey1 = Ey2; ABCHEFA also vanishes when
    lam1 B1 = lam2 B2.
    """
    ey1, ey2 = (float(v) for v in ey_range)
    l1, l2 = (float(v) for v in lam_range)
    b1, b2 = (float(v) for v in b_range)
    if min(l1, l2, b1, b2) <= 0:
        raise ValidationError("lambda and B ranges must be positive")
    w11 = 1.0 / math.sqrt(l1 * b1)
    w12 = 1.0 / math.sqrt(l1 * b2)
    w22 = 1.0 / math.sqrt(l2 * b2)
    if kind == "ABCHEFA":
        return (ey2 - ey1) * (w22 - w11)
    if kind == "ABCHGFA":
        return (ey2 - ey1) * (w12 - w11)
    if kind == "ADCHEFA":
        return -(ey2 - ey1) * (w12 - w11)
    raise ValidationError(f"kind must be ABCHEFA, ABCHGFA or ADCHEFA, got {kind!r}")


def line_integral_area_check(kind: str, ey_range, lam_range, b_range, ex: float = 0.0) -> dict:
    """Quadrature vs closed form of the loop functional S for one itinerary."""
    path = box_loop(kind, ey_range, lam_range, b_range, ex=ex)
    quad = loop_area_integral(path)
    closed = area_closed_form(kind, ey_range, lam_range, b_range)
    return {
        "kind": kind,
        "quadrature": quad,
        "closed_form": closed,
        "deviation": abs(quad - closed),
    }


def _window_size(window: tuple[int, int]) -> int:
    m_lo, m_hi = window
    if not (0 <= m_lo <= m_hi):
        raise ValidationError(f"window must satisfy 0 <= m_lo <= m_hi, got {window}")
    return m_hi - m_lo + 1


def _lowering_pattern(window: tuple[int, int]) -> np.ndarray:
    m_lo, m_hi = window
    size = m_hi - m_lo + 1
    L = np.zeros((size, size))
    for i in range(size - 1):
        L[i + 1, i] = math.sqrt(m_lo + i + 1)
    return L


def commuting_angle(area: float, u: float, window: tuple[int, int]) -> np.ndarray:
    """Angle matrix (S / 4u) T for an Ex' = 0 loop with functional S.

    T = L + L^T is the symmetric sqrt(m+1) tridiagonal on the window. The
    prefactor 1/(4u) is unit invariant; it equals 2u exactly when
    hbar = alpha.
    """
    _check_u(u)
    _window_size(window)
    L = _lowering_pattern(window)
    return (float(area) / (4.0 * u)) * (L + L.T)


def commuting_holonomy(area: float, u: float, window: tuple[int, int]) -> np.ndarray:
    """exp(i (S / 4u) T), the closed-form holonomy of an Ex' = 0 loop."""
    return unitary_exp_i(commuting_angle(area, u, window))


def _step_exponents(mids: np.ndarray, deltas: np.ndarray, u: float) -> tuple[np.ndarray, np.ndarray]:
    """Scalars (phi, zeta) of each step generator phi I + zeta L + conj(zeta) L^T."""
    ex, ey, lam, b = mids.T
    dex, dey, dlam, db = deltas.T
    phi = (ex * dey - ey * dex) / (16.0 * u * u * lam * b)
    zeta = (ey - 1j * ex) * (
        dlam / (8.0 * u * lam ** 1.5 * np.sqrt(b)) + db / (8.0 * u * np.sqrt(lam) * b ** 1.5)
    )
    return phi, zeta


def _product_at(path: ParameterPath, u: float, window: tuple[int, int], steps: int) -> np.ndarray:
    size = _window_size(window)
    mids, deltas = path.discretize(steps)
    phi, zeta = _step_exponents(mids, deltas, u)
    L = _lowering_pattern(window)
    eye = np.eye(size)
    U = np.eye(size, dtype=complex)
    for p, z in zip(phi, zeta):
        theta = p * eye + z * L + np.conj(z) * L.T
        U = unitary_exp_i(theta) @ U
    return U


def partial_unitarity_series(
    path: ParameterPath,
    u: float,
    window: tuple[int, int] = (0, 3),
    steps: int = 1024,
    samples: int = 256,
) -> list[tuple[int, float]]:
    """Unitarity defect of the partial path-ordered product, sampled along the loop.

    Tracks max |U_k U_k^dag - I| for the product U_k over the first k steps,
    recording at most `samples` evenly spaced k values (always including the
    final one). Each factor is exactly unitary, so the series exposes pure
    rounding accumulation; useful as plot data for step-count studies.
    """
    _check_u(u)
    _require_closed(path)
    size = _window_size(window)
    if float(path.segment_lengths.sum()) == 0.0:
        return [(0, 0.0)]
    mids, deltas = path.discretize(steps)
    phi, zeta = _step_exponents(mids, deltas, u)
    L = _lowering_pattern(window)
    eye = np.eye(size)
    total = len(phi)
    stride = max(1, total // max(1, samples))
    U = np.eye(size, dtype=complex)
    series: list[tuple[int, float]] = []
    for k, (p, z) in enumerate(zip(phi, zeta), start=1):
        theta = p * eye + z * L + np.conj(z) * L.T
        U = unitary_exp_i(theta) @ U
        if k % stride == 0 or k == total:
            series.append((k, max_abs(U @ U.conj().T, eye)))
    return series


@dataclass(frozen=True)
class HolonomyResult:
    """Path-ordered holonomy on an m-window, with its numerical defects.

    convergence_estimate is max |U(steps) - U(2 steps)|, an a-posteriori
    error proxy for the second-order midpoint scheme; unitarity_defect is
    max |U U^dag - I|.
    """

    matrix: np.ndarray
    steps: int
    window: tuple[int, int]
    unitarity_defect: float
    convergence_estimate: float

    @property
    def phase_angle(self) -> float:
        if self.matrix.shape != (1, 1):
            raise ValidationError("phase_angle is defined only for a 1x1 window")
        return float(np.angle(self.matrix[0, 0]))


def holonomy_path_ordered(
    path: ParameterPath,
    u: float,
    window: tuple[int, int] = (0, 3),
    steps: int = 1024,
    target: float | None = 1e-7,
    step_cap: int = _STEP_CAP,
) -> HolonomyResult:
    """Path-ordered product of midpoint step exponentials around a closed loop.

    Later steps multiply from the left. convergence_estimate is
    max |U(steps) - U(2 steps)|, from a shadow run at doubled resolution;
    while it exceeds `target` the step count doubles, up to `step_cap`
    (ConvergenceError beyond; target=None disables refinement). Reversing
    the path returns the adjoint holonomy to rounding accuracy, because the
    discretization mirrors exactly.
    """
    _check_u(u)
    _require_closed(path)
    if steps < 16:
        raise ValidationError(f"steps must be >= 16, got {steps}")
    if float(path.segment_lengths.sum()) == 0.0:
        # constant path: the loop encloses nothing and the product is exact
        eye = np.eye(_window_size(window), dtype=complex)
        return HolonomyResult(
            matrix=eye,
            steps=steps,
            window=tuple(window),
            unitarity_defect=0.0,
            convergence_estimate=0.0,
        )
    current = _product_at(path, u, window, steps)
    doubled = _product_at(path, u, window, 2 * steps)
    estimate = max_abs(current, doubled)
    while target is not None and estimate > target:
        if 4 * steps > step_cap:
            raise ConvergenceError(
                f"holonomy estimate {estimate:.3e} above target {target:.3e} at step cap {step_cap}"
            )
        steps *= 2
        current = doubled
        doubled = _product_at(path, u, window, 2 * steps)
        estimate = max_abs(current, doubled)
    defect = max_abs(current @ current.conj().T, np.eye(current.shape[0]))
    return HolonomyResult(
        matrix=current,
        steps=steps,
        window=tuple(window),
        unitarity_defect=defect,
        convergence_estimate=estimate,
    )


def unordered_holonomy(
    path: ParameterPath, u: float, window: tuple[int, int] = (0, 3), steps: int = 1024
) -> np.ndarray:
    """exp(i sum of step generators), ignoring path ordering.

    Coincides with the ordered product exactly when all step generators
    commute (Ex' = 0 loops); the gap between the two is the
    non-commutativity diagnostic.
    """
    _check_u(u)
    _require_closed(path)
    size = _window_size(window)
    if float(path.segment_lengths.sum()) == 0.0:
        return np.eye(size, dtype=complex)
    mids, deltas = path.discretize(steps)
    phi, zeta = _step_exponents(mids, deltas, u)
    L = _lowering_pattern(window)
    theta = phi.sum() * np.eye(size) + zeta.sum() * L + np.conj(zeta.sum()) * L.T
    return unitary_exp_i(theta)


def noncommutativity_defect(
    path: ParameterPath, u: float, window: tuple[int, int] = (0, 3), steps: int = 1024
) -> dict:
    """Ordered vs unordered holonomy around one loop.

    Returns the two matrices and defect = max |ordered - unordered|. The
    defect is a discretization-stable functional of the loop: well above
    zero when the loop engages non-commuting generator directions, at the
    rounding floor for the commuting Ex' = 0 family.
    """
    ordered = holonomy_path_ordered(path, u, window=window, steps=steps, target=None)
    unordered = unordered_holonomy(path, u, window=window, steps=steps)
    return {
        "ordered": ordered.matrix,
        "unordered": unordered,
        "defect": max_abs(ordered.matrix, unordered),
        "steps": ordered.steps,
        "unitarity_defect": ordered.unitarity_defect,
    }


def convergence_series(
    path: ParameterPath,
    u: float,
    window: tuple[int, int] = (0, 3),
    steps_list: tuple[int, ...] = (64, 128, 256, 512, 1024),
) -> list[dict]:
    """Convergence estimates over a ladder of step counts, for reporting.

    The midpoint scheme is second order, so estimates should fall by about
    4x per doubling; the acceptance suite checks they are monotone.
    """
    rows = []
    for s in steps_list:
        res = holonomy_path_ordered(path, u, window=window, steps=int(s), target=None)
        rows.append(
            {
                "steps": res.steps,
                "convergence_estimate": res.convergence_estimate,
                "unitarity_defect": res.unitarity_defect,
            }
        )
    return rows
