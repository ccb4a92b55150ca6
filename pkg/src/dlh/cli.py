"""Batch front door: subcommand dispatch and deterministic CSV/JSON emission.

Eight subcommands cover the library surface:

    derive        scales (omega, sigma, l_m, u, nu) and regime screening
    spectrum      (n, m, l, E/hw, Lz/hbar) table over a truncated basis
    displace      displaced-state coefficients and truncation deficit
    connection    one connection component on an m-window, entry by entry
    phase         scalar loop functionals (in-plane rectangle or named box loop)
    holonomy      path-ordered window holonomy with convergence diagnostics
    oracle-check  grid cross-validation suite and sign-convention report
    sweep         Cartesian parameter studies of phase/holonomy diagnostics

Outputs are reproducible byte for byte: floats are rendered with repr
(shortest round-trip), JSON keys are sorted, row order is fixed, and files
are written atomically (temp file + rename). Exit codes: 0 success,
2 validation error, 3 convergence or cross-validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import connection as _connection
from . import displaced as _displaced
from . import fock as _fock
from . import holonomy as _holonomy
from . import oracle as _oracle
from .errors import ConsistencyError, ConvergenceError, ValidationError
from .params import PhysicalConfig, derive_scales, validate_regime

__all__ = ["main", "build_parser", "load_config", "DEFAULT_CONFIG"]

# Desk-scale default: u = 0.5 exactly, so the documented phase example
# (`phase --named C1 --area 1.0` -> gamma_area_law = -0.125) works untouched.
DEFAULT_CONFIG = PhysicalConfig(
    mass=1.0, alpha=0.5, hbar=1.0, lambda_density=2.0, B=1.0, Ex_prime=0.0, Ey_prime=0.0
)

# 2019 SI value, used when a config file omits hbar.
HBAR_SI = 1.054571817e-34

# config-file key -> PhysicalConfig field; None marks optional keys
_CONFIG_KEYS = {
    "mass_kg": "mass",
    "alpha_Fm2": "alpha",
    "hbar": "hbar",
    "lambda_Vm2": "lambda_density",
    "B_T": "B",
    "Ex_Vm": "Ex_prime",
    "Ey_Vm": "Ey_prime",
    "sigma_override": "sigma_override",
}
_OPTIONAL_KEYS = {"hbar", "sigma_override"}

_PARAM_ALIASES = {
    "Ex": "Ex_prime",
    "Ey": "Ey_prime",
    "lam": "lambda_density",
    "lambda": "lambda_density",
    "Ex_prime": "Ex_prime",
    "Ey_prime": "Ey_prime",
    "lambda_density": "lambda_density",
    "B": "B",
}

_BOX_KINDS = ("ABCHEFA", "ABCHGFA", "ADCHEFA")
_SWEEP_AXES = ("area", "Ey1", "Ey2", "lam1", "lam2", "B1", "B2", "steps")


# ---------------------------------------------------------------------------
# config handling


def load_config(path: str | None) -> PhysicalConfig:
    """Parse a JSON config file against the strict schema.

    Schema keys: mass_kg, alpha_Fm2, lambda_Vm2, B_T, Ex_Vm, Ey_Vm are
    required; hbar (default: SI value) and sigma_override (default: None)
    are optional. Any unknown key aborts, naming the key.
    """
    if path is None:
        return DEFAULT_CONFIG
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError(f"config file {path} must hold a JSON object")
    for key in raw:
        if key not in _CONFIG_KEYS:
            raise ValidationError(f"unknown config key {key!r}")
    missing = [k for k in _CONFIG_KEYS if k not in raw and k not in _OPTIONAL_KEYS]
    if missing:
        raise ValidationError(f"missing config keys: {', '.join(missing)}")
    kwargs: dict = {}
    for key, value in raw.items():
        field = _CONFIG_KEYS[key]
        if key == "sigma_override":
            if value is not None and value not in (1, -1):
                raise ValidationError(f"config key {key!r} must be 1, -1 or null, got {value!r}")
            kwargs[field] = value
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"config key {key!r} must be a number, got {value!r}")
        kwargs[field] = float(value)
    kwargs.setdefault("hbar", HBAR_SI)
    return PhysicalConfig(**kwargs)


def _config_point(config: PhysicalConfig) -> tuple[float, float, float, float]:
    return (config.Ex_prime, config.Ey_prime, config.lambda_density, config.B)


# ---------------------------------------------------------------------------
# deterministic emission


def _fmt(value) -> str:
    """Fixed scalar rendering: repr for floats (shortest round trip)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _csv_text(header: list[str], rows: list[list], comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in (comments or [])]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    """Row-major [re, im] encoding of a complex matrix."""
    return [[_pair(z) for z in row] for row in np.asarray(matrix)]


def _write_text(out: str | None, text: str) -> None:
    """Atomic write (temp file + rename); stdout when no path is given."""
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    parent = target.parent if str(target.parent) else Path(".")
    if not parent.is_dir():
        raise ValidationError(f"output directory {parent} does not exist")
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# ---------------------------------------------------------------------------
# shared argument plumbing


def _parse_window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValidationError(f"window must look like lo..hi, got {text!r}")
    try:
        bounds = (int(lo), int(hi))
    except ValueError as exc:
        raise ValidationError(f"window bounds must be integers, got {text!r}") from exc
    if not (0 <= bounds[0] <= bounds[1]):
        raise ValidationError(f"window must satisfy 0 <= lo <= hi, got {text!r}")
    return bounds


def _normalize_kind(name: str) -> str:
    if name == "C1":
        return "C1_rectangle"
    if name in ("C1_rectangle",) + _BOX_KINDS:
        return name
    raise ValidationError(
        f"unknown named path {name!r}; expected C1, C1_rectangle, ABCHEFA, ABCHGFA or ADCHEFA"
    )


def _read_vertices(path: str) -> np.ndarray:
    """Vertex list file: one vertex per line, four floats (Ex' Ey' lambda B).

    Commas or whitespace separate the numbers; blank lines and lines starting
    with '#' are skipped.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read vertex file {path}: {exc}") from exc
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        bare = line.split("#", 1)[0].strip()
        if not bare:
            continue
        parts = bare.replace(",", " ").split()
        if len(parts) != 4:
            raise ValidationError(
                f"{path}:{lineno}: expected 4 numbers (Ex' Ey' lambda B), got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    if len(rows) < 2:
        raise ValidationError(f"vertex file {path} needs at least 2 vertices")
    return np.asarray(rows, dtype=float)


def _corners(args) -> dict[str, float]:
    return {
        "Ey1": args.Ey1,
        "Ey2": args.Ey2,
        "lam1": args.lam1,
        "lam2": args.lam2,
        "B1": args.B1,
        "B2": args.B2,
    }


def _build_path(args, config: PhysicalConfig) -> _holonomy.ParameterPath:
    """Loop from --named corners/area or an explicit --vertices file."""
    if getattr(args, "vertices", None):
        if args.named:
            raise ValidationError("--named and --vertices are mutually exclusive")
        return _holonomy.ParameterPath(vertices=_read_vertices(args.vertices), kind="custom")
    if not args.named:
        raise ValidationError("a path is required: pass --named <kind> or --vertices <file>")
    kind = _normalize_kind(args.named)
    if kind == "C1_rectangle":
        area = args.area if args.area is not None else 1.0
        if area <= 0:
            raise ValidationError(f"--area must be positive, got {area}")
        return _holonomy.rectangle_loop(
            "Ex_prime",
            "Ey_prime",
            (0.0, area),
            (0.0, 1.0),
            (0.0, 0.0, config.lambda_density, config.B),
        )
    c = _corners(args)
    return _holonomy.box_loop(
        kind, (c["Ey1"], c["Ey2"]), (c["lam1"], c["lam2"]), (c["B1"], c["B2"])
    )


def _thread_count(jobs: int) -> int:
    raw = os.environ.get("DLH_THREADS")
    if raw is None:
        workers = min(4, os.cpu_count() or 1)
    else:
        try:
            workers = int(raw)
        except ValueError as exc:
            raise ValidationError(f"DLH_THREADS must be an integer, got {raw!r}") from exc
        if workers < 1:
            raise ValidationError(f"DLH_THREADS must be >= 1, got {workers}")
    return max(1, min(workers, jobs))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_derive(args) -> int:
    config = load_config(args.config)
    scales = derive_scales(config)
    regime = validate_regime(config)
    shift = _displaced.position_shift(config)
    if args.format == "json":
        payload = {
            "omega": scales.omega,
            "sigma": scales.sigma,
            "l_m": scales.l_m,
            "u": scales.u,
            "nu": _pair(scales.nu),
            "energy_quantum": scales.energy_quantum,
            "hbar": scales.hbar,
            "position_shift": [shift[0], shift[1]],
            "regime": {
                "mass_correction_ratio": regime.mass_correction_ratio,
                "dipole_energy": regime.dipole_energy,
                "mass_threshold": regime.mass_threshold,
                "energy_threshold": regime.energy_threshold,
                "verdict": regime.verdict,
            },
        }
        _write_text(args.out, _json_text(payload))
    else:
        rows = [
            ["omega", scales.omega],
            ["sigma", scales.sigma],
            ["l_m", scales.l_m],
            ["u", scales.u],
            ["nu_re", scales.nu.real],
            ["nu_im", scales.nu.imag],
            ["energy_quantum", scales.energy_quantum],
            ["hbar", scales.hbar],
            ["shift_x", shift[0]],
            ["shift_y", shift[1]],
            ["regime_mass_correction_ratio", regime.mass_correction_ratio],
            ["regime_dipole_energy", regime.dipole_energy],
            ["regime_verdict", regime.verdict],
        ]
        _write_text(args.out, _csv_text(["quantity", "value"], rows))
    return 0


def _cmd_spectrum(args) -> int:
    config = load_config(args.config)
    scales = derive_scales(config)
    n_max = args.n if args.n is not None else 3
    m_max = args.m if args.m is not None else 3
    if n_max < 0 or m_max < 0:
        raise ValidationError(f"n and m bounds must be >= 0, got {n_max}, {m_max}")
    rows = []
    for n in range(n_max + 1):
        for m in range(m_max + 1):
            ell = scales.sigma * (m - n)
            rows.append([n, m, ell, n + 0.5, ell])
    if args.format == "json":
        payload = {
            "sigma": scales.sigma,
            "rows": [
                {"n": r[0], "m": r[1], "l": r[2], "E_over_hw": r[3], "Lz_over_h": r[4]}
                for r in rows
            ],
        }
        _write_text(args.out, _json_text(payload))
    else:
        _write_text(args.out, _csv_text(["n", "m", "l", "E_over_hw", "Lz_over_h"], rows))
    return 0


def _cmd_displace(args) -> int:
    config = load_config(args.config)
    scales = derive_scales(config)
    n = args.n if args.n is not None else 0
    m = args.m if args.m is not None else 0
    if args.nu_re is not None or args.nu_im is not None:
        nu = complex(args.nu_re or 0.0, args.nu_im or 0.0)
    else:
        nu = scales.nu
    basis = _fock.build_basis(args.n_max, args.m_max, sigma=scales.sigma)
    state = _displaced.displaced_state(n, m, nu, basis)
    if args.format == "json":
        payload = {
            "n": n,
            "m": m,
            "nu": _pair(nu),
            "n_max": basis.n_max,
            "m_max": basis.m_max,
            "trunc_deficit": state.trunc_deficit,
            "coefficients": [_pair(z) for z in state.coefficients],
        }
        _write_text(args.out, _json_text(payload))
    else:
        rows = []
        for idx, z in enumerate(state.coefficients):
            bn, bm = basis.labels(idx)
            rows.append([bn, bm, z.real, z.imag])
        comments = [
            f"displaced state n={n} m={m} nu_re={_fmt(nu.real)} nu_im={_fmt(nu.imag)}",
            f"trunc_deficit = {_fmt(state.trunc_deficit)}",
        ]
        _write_text(args.out, _csv_text(["n", "m", "re", "im"], rows, comments))
    return 0


def _cmd_connection(args) -> int:
    config = load_config(args.config)
    scales = derive_scales(config)
    if args.param not in _PARAM_ALIASES:
        raise ValidationError(
            f"unknown control parameter {args.param!r}; expected one of "
            f"{sorted(set(_PARAM_ALIASES))}"
        )
    param = _PARAM_ALIASES[args.param]
    window = args.window
    n = args.n if args.n is not None else 0
    point = _config_point(config)
    mat = _connection.connection_matrix(param, point, scales.u, n, window)
    if args.format == "json":
        payload = {
            "param": param,
            "point": list(point),
            "n": n,
            "window": [window[0], window[1]],
            "u": scales.u,
            "matrix": _matrix_pairs(mat.entries),
        }
        _write_text(args.out, _json_text(payload))
    else:
        rows = []
        for i, m_row in enumerate(mat.window):
            for j, m_col in enumerate(mat.window):
                z = mat.entries[i, j]
                rows.append([m_row, m_col, z.real, z.imag])
        _write_text(args.out, _csv_text(["row", "col", "re", "im"], rows))
    return 0


def _phase_payload(args, config: PhysicalConfig) -> dict:
    scales = derive_scales(config)
    path = _build_path(args, config)
    payload: dict = {"kind": path.kind, "u": scales.u}
    if path.kind == "C1_rectangle" or (
        path.kind == "custom" and np.ptp(path.vertices[:, 2]) == 0.0 and np.ptp(path.vertices[:, 3]) == 0.0
    ):
        phases = _holonomy.abelian_phase(path, scales.u)
        payload.update(
            {
                "lambda_density": float(path.vertices[0, 2]),
                "B": float(path.vertices[0, 3]),
                "signed_area": phases.signed_area,
                "curvature": phases.curvature,
                "gamma_line_integral": phases.gamma_line_integral,
                "gamma_area_law": phases.gamma_area_law,
                "line_over_area_law": phases.ratio,
            }
        )
    else:
        s_quad = _holonomy.loop_area_integral(path)
        payload["S_quadrature"] = s_quad
        payload["angle_prefactor"] = s_quad / (4.0 * scales.u)
        if path.kind in _BOX_KINDS:
            c = _corners(args)
            s_closed = _holonomy.area_closed_form(
                path.kind, (c["Ey1"], c["Ey2"]), (c["lam1"], c["lam2"]), (c["B1"], c["B2"])
            )
            payload["S_closed_form"] = s_closed
            payload["S_deviation"] = abs(s_quad - s_closed)
    return payload


def _cmd_phase(args) -> int:
    config = load_config(args.config)
    payload = _phase_payload(args, config)
    if args.format == "csv":
        rows = [[k, v] for k, v in sorted(payload.items())]
        _write_text(args.out, _csv_text(["quantity", "value"], rows))
    else:
        _write_text(args.out, _json_text(payload))
    return 0


def _cmd_holonomy(args) -> int:
    config = load_config(args.config)
    scales = derive_scales(config)
    if args.format == "csv":
        raise ValidationError("holonomy output is a matrix; use --format json")
    path = _build_path(args, config)
    window = args.window
    result = _holonomy.holonomy_path_ordered(
        path, scales.u, window=window, steps=args.steps, target=args.target
    )
    size = result.matrix.shape[0]
    identity_distance = float(np.abs(result.matrix - np.eye(size)).max())
    payload = {
        "kind": path.kind,
        "window": [window[0], window[1]],
        "steps": result.steps,
        "u": scales.u,
        "matrix": _matrix_pairs(result.matrix),
        "unitarity_defect": result.unitarity_defect,
        "convergence_estimate": result.convergence_estimate,
        "identity_distance": identity_distance,
        "vertices": [[float(v) for v in row] for row in path.vertices],
    }
    _write_text(args.out, _json_text(payload))
    if args.emit_plot_data:
        series = _holonomy.partial_unitarity_series(
            path, scales.u, window=window, steps=result.steps
        )
        lines = "".join(f"{k} {_fmt(d)}\n" for k, d in series)
        _write_text(args.emit_plot_data, lines)
    return 0


def _cmd_oracle_check(args) -> int:
    config = load_config(args.config) if args.config else None
    grid = _oracle.default_grid(points=args.grid_points)
    report = _oracle.sign_convention_report(config, grid)

    # quick matrix-route cross checks, independent of the grid
    basis = _fock.build_basis(12, 12)
    am = _fock.ladder_a(basis, "minus")
    ap = _fock.ladder_a(basis, "plus")
    comm = _fock.commutator(am, ap)
    interior = basis.interior_indices(1, 1)
    eye = np.eye(basis.size)
    comm_dev = float(
        np.abs(comm.entries[np.ix_(interior, interior)] - eye[np.ix_(interior, interior)]).max()
    )

    op = report["operating_point"]
    cfg = config or PhysicalConfig(
        mass=1.0, alpha=0.5, hbar=1.0, lambda_density=2.0, B=1.0, Ex_prime=0.3, Ey_prime=0.7
    )
    scales = derive_scales(cfg)
    dual_basis = _fock.build_basis(16, 16, sigma=scales.sigma)
    try:
        _displaced.displacement_matrix(scales.nu, dual_basis, check=True)
        _displaced.displaced_hamiltonian(scales.nu, dual_basis, scales, check=True)
        dual_ok = True
    except ConsistencyError:
        dual_ok = False
    chain = _connection.chain_rule_consistency(
        (op["Ex_prime"], op["Ey_prime"], op["lambda_density"], op["B"]), op["u"], 0, (0, 4)
    )

    checks = {
        "ladder_commutator_max_dev": comm_dev,
        "dual_route_displacement_ok": dual_ok,
        "chain_vs_closed_max_dev": chain["max"],
        "fd_diagonal_dev": report["diagonal"]["deviation_resolved"],
        "fd_offdiagonal_dev": report["off_diagonal"]["deviation_resolved"],
        "curvature_dev": report["curvature"]["deviation"],
    }
    tolerances = {
        "ladder_commutator_max_dev": 1e-12,
        "chain_vs_closed_max_dev": 1e-10,
        "fd_diagonal_dev": 1e-4,
        "fd_offdiagonal_dev": 1e-4,
        "curvature_dev": 1e-2,
    }
    passed = dual_ok and all(checks[k] <= tol for k, tol in tolerances.items())
    payload = {
        "sign_report": report,
        "cross_checks": checks,
        "tolerances": tolerances,
        "pass": passed,
    }
    _write_text(args.out, _json_text(payload))
    print(_oracle.render_sign_report(report), file=sys.stderr)
    if not passed:
        raise ConsistencyError(
            "oracle cross-validation failed: "
            + ", ".join(k for k, tol in tolerances.items() if checks[k] > tol)
        )
    return 0


def _parse_sweeps(specs: list[str]) -> list[tuple[str, list[float]]]:
    axes: list[tuple[str, list[float]]] = []
    seen = set()
    for spec in specs:
        name, sep, values = spec.partition("=")
        if not sep:
            raise ValidationError(f"sweep spec must look like axis=v1,v2,... got {spec!r}")
        if name not in _SWEEP_AXES:
            raise ValidationError(f"unknown sweep axis {name!r}; expected one of {_SWEEP_AXES}")
        if name in seen:
            raise ValidationError(f"sweep axis {name!r} given twice")
        seen.add(name)
        try:
            vals = [float(v) for v in values.split(",") if v != ""]
        except ValueError as exc:
            raise ValidationError(f"bad sweep values in {spec!r}: {exc}") from exc
        if len(vals) < 2:
            raise ValidationError(f"sweep axis {name!r} needs at least 2 values")
        axes.append((name, vals))
    if not axes:
        raise ValidationError("sweep needs at least one --sweep axis=v1,v2,...")
    return axes


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    scales = derive_scales(config)
    if not args.named:
        raise ValidationError("sweep needs --named <kind> as the base loop")
    kind = _normalize_kind(args.named)
    axes = _parse_sweeps(args.sweep)
    if kind == "C1_rectangle":
        allowed = {"area"}
    else:
        allowed = set(_SWEEP_AXES) - {"area"}
    for name, _ in axes:
        if name not in allowed:
            raise ValidationError(f"sweep axis {name!r} does not apply to {kind}")

    names = [name for name, _ in axes]
    combos = [()]
    for _, vals in axes:
        combos = [prev + (v,) for prev in combos for v in vals]
    combos.sort()

    def run_combo(combo: tuple[float, ...]) -> list:
        override = dict(zip(names, combo))
        if kind == "C1_rectangle":
            area = override["area"]
            if area <= 0:
                raise ValidationError(f"swept area must be positive, got {area}")
            loop = _holonomy.rectangle_loop(
                "Ex_prime",
                "Ey_prime",
                (0.0, area),
                (0.0, 1.0),
                (0.0, 0.0, config.lambda_density, config.B),
            )
            phases = _holonomy.abelian_phase(loop, scales.u)
            return list(combo) + [
                phases.signed_area,
                phases.curvature,
                phases.gamma_line_integral,
                phases.gamma_area_law,
            ]
        c = _corners(args)
        steps = args.steps
        for key, value in override.items():
            if key == "steps":
                steps = int(value)
                if steps != value:
                    raise ValidationError(f"swept steps must be integers, got {value}")
            else:
                c[key] = value
        loop = _holonomy.box_loop(
            kind, (c["Ey1"], c["Ey2"]), (c["lam1"], c["lam2"]), (c["B1"], c["B2"])
        )
        s_closed = _holonomy.area_closed_form(
            kind, (c["Ey1"], c["Ey2"]), (c["lam1"], c["lam2"]), (c["B1"], c["B2"])
        )
        result = _holonomy.holonomy_path_ordered(
            loop, scales.u, window=args.window, steps=steps, target=None
        )
        size = result.matrix.shape[0]
        identity_distance = float(np.abs(result.matrix - np.eye(size)).max())
        return list(combo) + [
            s_closed,
            identity_distance,
            result.unitarity_defect,
            result.convergence_estimate,
            result.steps,
        ]

    workers = _thread_count(len(combos))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_combo, combos))
    else:
        rows = [run_combo(c) for c in combos]

    if kind == "C1_rectangle":
        header = names + ["signed_area", "curvature", "gamma_line_integral", "gamma_area_law"]
    else:
        header = names + [
            "S_closed_form",
            "identity_distance",
            "unitarity_defect",
            "convergence_estimate",
            "steps_used",
        ]
    if args.format == "json":
        payload = {"kind": kind, "header": header, "rows": rows}
        _write_text(args.out, _json_text(payload))
    else:
        _write_text(args.out, _csv_text(header, rows))
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(sub: argparse.ArgumentParser, default_format: str) -> None:
    sub.add_argument("--config", help="JSON config file (strict schema); default: desk-scale natural units")
    sub.add_argument("--out", help="output file (atomic write); default: stdout")
    sub.add_argument(
        "--format", choices=("csv", "json"), default=default_format, help=f"output format (default {default_format})"
    )


def _add_path_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--named", help="named loop kind: C1, ABCHEFA, ABCHGFA or ADCHEFA")
    sub.add_argument("--vertices", help="file with explicit loop vertices (Ex' Ey' lambda B per line)")
    sub.add_argument("--area", type=float, help="rectangle area for --named C1 (default 1.0)")
    sub.add_argument("--Ey1", type=float, default=0.0, help="box corner Ey' low (default 0)")
    sub.add_argument("--Ey2", type=float, default=1.0, help="box corner Ey' high (default 1)")
    sub.add_argument("--lam1", type=float, default=1.0, help="box corner lambda low (default 1)")
    sub.add_argument("--lam2", type=float, default=4.0, help="box corner lambda high (default 4)")
    sub.add_argument("--B1", type=float, default=1.0, help="box corner B low (default 1)")
    sub.add_argument("--B2", type=float, default=4.0, help="box corner B high (default 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlh",
        description=(
            "Landau levels of an induced electric dipole: displaced Fock states, "
            "Berry connections and non-Abelian holonomies over (Ex', Ey', lambda, B)."
        ),
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("derive", help="derived scales and regime screening")
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_derive)

    p = subs.add_parser("spectrum", help="(n, m, l, E/hw, Lz/hbar) table")
    _add_common(p, "csv")
    p.add_argument("--n", type=int, help="largest level index n (default 3)")
    p.add_argument("--m", type=int, help="largest radial index m (default 3)")
    p.set_defaults(func=_cmd_spectrum)

    p = subs.add_parser("displace", help="displaced-state coefficients")
    _add_common(p, "json")
    p.add_argument("--n", type=int, help="level index n (default 0)")
    p.add_argument("--m", type=int, help="radial index m (default 0)")
    p.add_argument("--nu-re", type=float, dest="nu_re", help="override Re nu (default: from config fields)")
    p.add_argument("--nu-im", type=float, dest="nu_im", help="override Im nu")
    p.add_argument("--n-max", type=int, default=12, dest="n_max", help="basis cut in n (default 12)")
    p.add_argument("--m-max", type=int, default=12, dest="m_max", help="basis cut in m (default 12)")
    p.set_defaults(func=_cmd_displace)

    p = subs.add_parser("connection", help="one connection component on an m-window")
    _add_common(p, "csv")
    p.add_argument("--param", required=True, help="Ex_prime | Ey_prime | lambda_density | B (aliases Ex, Ey, lambda)")
    p.add_argument("--n", type=int, help="level index n (default 0)")
    p.add_argument("--window", type=_parse_window, default=(0, 3), help="m-window lo..hi (default 0..3)")
    p.set_defaults(func=_cmd_connection)

    p = subs.add_parser("phase", help="scalar loop functionals (C1 rectangle or box loops)")
    _add_common(p, "json")
    _add_path_flags(p)
    p.set_defaults(func=_cmd_phase)

    p = subs.add_parser("holonomy", help="path-ordered window holonomy")
    _add_common(p, "json")
    _add_path_flags(p)
    p.add_argument("--window", type=_parse_window, default=(0, 3), help="m-window lo..hi (default 0..3)")
    p.add_argument("--steps", type=int, default=1024, help="initial step count (default 1024)")
    p.add_argument(
        "--target",
        type=float,
        default=1e-7,
        help="convergence target for step doubling (default 1e-7; 0 disables)",
    )
    p.add_argument(
        "--emit-plot-data",
        dest="emit_plot_data",
        metavar="PATH",
        help="also write a (step, unitarity_defect) series to PATH",
    )
    p.set_defaults(func=_cmd_holonomy)

    p = subs.add_parser("oracle-check", help="grid cross-validation and sign-convention report")
    _add_common(p, "json")
    p.add_argument("--grid-points", type=int, default=256, dest="grid_points", help="grid points per axis (default 256)")
    p.set_defaults(func=_cmd_oracle_check)

    p = subs.add_parser("sweep", help="Cartesian parameter studies (CSV rows, sorted)")
    _add_common(p, "csv")
    _add_path_flags(p)
    p.add_argument("--window", type=_parse_window, default=(0, 3), help="m-window lo..hi (default 0..3)")
    p.add_argument("--steps", type=int, default=512, help="base step count (default 512)")
    p.add_argument(
        "--sweep",
        action="append",
        default=[],
        metavar="AXIS=V1,V2,...",
        help="axis to sweep (repeatable); axes: area (C1) or Ey1, Ey2, lam1, lam2, B1, B2, steps",
    )
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "target", None) == 0.0:
        args.target = None
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"dlh: validation error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ConsistencyError) as exc:
        print(f"dlh: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
