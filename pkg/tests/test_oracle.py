import math

import numpy as np
import pytest

from dlh.connection import connection_closed_form
from dlh.errors import ValidationError
from dlh.holonomy import box_loop, holonomy_path_ordered, rectangle_loop
from dlh.oracle import (
    Grid2D,
    WaveField,
    apply_base_hamiltonian,
    apply_angular_momentum,
    apply_level_lower,
    apply_level_raise,
    apply_radial_lower,
    apply_radial_raise,
    apply_uniform_field_hamiltonian,
    berry_connection_fd,
    build_state,
    default_grid,
    fd_connection_matrix,
    ground_state,
    pipeline_state,
    render_sign_report,
    sign_convention_report,
    wilson_loop_oracle,
    window_states,
)
from dlh.params import PhysicalConfig, derive_scales


def test_grid_adequacy_rules():
    grid = default_grid()
    grid.check_adequate(1.0)
    with pytest.raises(ValidationError):
        grid.check_adequate(3.0)  # extent 12 < 6 * 3
    with pytest.raises(ValidationError):
        grid.check_adequate(0.1)  # h ~ 0.094 > 0.1 / 4
    with pytest.raises(ValidationError):
        grid.check_adequate(1.0, shift=7.0)
    with pytest.raises(ValidationError):
        Grid2D(extent=-1.0, points=64)
    with pytest.raises(ValidationError):
        Grid2D(extent=12.0, points=3)


def test_ground_state_shape_and_width(grid12):
    g = ground_state(grid12, 1.0)
    assert abs(grid12.norm(g.values) - 1.0) < 1e-12
    r2 = grid12.X**2 + grid12.Y**2
    mean_r2 = grid12.overlap(g.values, r2 * g.values).real
    assert mean_r2 == pytest.approx(2.0, rel=1e-10)


def test_ladders_annihilate_ground(grid12):
    g = ground_state(grid12, 1.0).values
    assert np.abs(apply_level_lower(grid12, 1.0, 1, g)).max() < 1e-12
    assert np.abs(apply_radial_lower(grid12, 1.0, 1, g)).max() < 1e-12


def test_grid_ladder_commutator(grid12, cfg_natural):
    sc = derive_scales(cfg_natural)
    f = build_state(grid12, sc, 1, 1).values
    raised_then_lowered = apply_level_lower(
        grid12, sc.l_m, sc.sigma, apply_level_raise(grid12, sc.l_m, sc.sigma, f)
    )
    lowered_then_raised = apply_level_raise(
        grid12, sc.l_m, sc.sigma, apply_level_lower(grid12, sc.l_m, sc.sigma, f)
    )
    assert np.abs(raised_then_lowered - lowered_then_raised - f).max() < 1e-11
    rb = apply_radial_lower(
        grid12, sc.l_m, sc.sigma, apply_radial_raise(grid12, sc.l_m, sc.sigma, f)
    )
    br = apply_radial_raise(
        grid12, sc.l_m, sc.sigma, apply_radial_lower(grid12, sc.l_m, sc.sigma, f)
    )
    assert np.abs(rb - br - f).max() < 1e-11


def test_state_family_orthonormal(grid_coarse, cfg_natural):
    sc = derive_scales(cfg_natural)
    states = {}
    for n in range(4):
        for m in range(5):
            states[(n, m)] = build_state(grid_coarse, sc, n, m).values
    for (n1, m1), f in states.items():
        for (n2, m2), g in states.items():
            want = 1.0 if (n1, m1) == (n2, m2) else 0.0
            assert abs(grid_coarse.overlap(f, g) - want) < 1e-6


def test_displacement_centroid_and_coherence(grid12, cfg_natural):
    sc = derive_scales(cfg_natural)
    point = (cfg_natural.Ex_prime, cfg_natural.Ey_prime, cfg_natural.lambda_density, cfg_natural.B)
    psi = pipeline_state(grid12, cfg_natural, point, 0, 0)
    nu = sc.nu
    cx = grid12.overlap(psi.values, grid12.X * psi.values).real
    cy = grid12.overlap(psi.values, grid12.Y * psi.values).real
    assert cx == pytest.approx(-math.sqrt(2.0) * sc.l_m * nu.imag, abs=1e-10)
    assert cy == pytest.approx(math.sqrt(2.0) * sc.sigma * sc.l_m * nu.real, abs=1e-10)
    # displaced ground field is a coherent state of the level ladder
    lowered = apply_level_lower(grid12, sc.l_m, sc.sigma, psi.values)
    amp = grid12.overlap(psi.values, lowered)
    assert abs(amp - nu) < 1e-12
    assert np.abs(lowered - nu * psi.values).max() < 1e-10


def test_energies_on_grid(grid12, cfg_natural):
    sc = derive_scales(cfg_natural)
    hw = sc.energy_quantum
    point = (cfg_natural.Ex_prime, cfg_natural.Ey_prime, cfg_natural.lambda_density, cfg_natural.B)
    for n in (0, 1):
        psi = pipeline_state(grid12, cfg_natural, point, n, 1)
        e = grid12.overlap(psi.values, apply_uniform_field_hamiltonian(grid12, sc, psi.values)).real
        assert e / hw == pytest.approx(n + 0.5, rel=1e-6)
    bare = build_state(grid12, sc, 2, 0)
    e2 = grid12.overlap(bare.values, apply_base_hamiltonian(grid12, sc, bare.values)).real
    assert e2 / hw == pytest.approx(2.5, rel=1e-6)


def test_angular_momentum_both_chiralities(grid12):
    for lam, sigma in ((1.0, 1), (-1.0, -1)):
        cfg = PhysicalConfig(
            mass=1.0, alpha=1.0, hbar=1.0, lambda_density=lam, B=1.0, Ex_prime=0.0, Ey_prime=0.0
        )
        sc = derive_scales(cfg)
        assert sc.sigma == sigma
        f = build_state(grid12, sc, 0, 2).values
        lz = grid12.overlap(f, apply_angular_momentum(grid12, sc.hbar, f)).real
        assert lz == pytest.approx(sigma * 2.0, rel=1e-8)


def test_fd_connection_matches_closed_form(grid12, cfg_desk):
    sc = derive_scales(cfg_desk)
    point = (cfg_desk.Ex_prime, cfg_desk.Ey_prime, cfg_desk.lambda_density, cfg_desk.B)
    for param, row, col in (
        ("Ex_prime", 0, 0),
        ("Ey_prime", 1, 1),
        ("lambda_density", 2, 1),
        ("B", 1, 0),
    ):
        fd = berry_connection_fd(grid12, cfg_desk, param, point, 0, row, col, h_step=1e-3)
        cf = connection_closed_form(param, point, sc.u, 0, row, col)
        assert abs(fd - cf) < 1e-6


def test_fd_richardson_order(grid12, cfg_desk):
    # central differences: truncation error drops ~4x when h halves
    point = (cfg_desk.Ex_prime, cfg_desk.Ey_prime, cfg_desk.lambda_density, cfg_desk.B)
    sc = derive_scales(cfg_desk)
    cf = connection_closed_form("B", point, sc.u, 0, 1, 0)
    err4 = abs(berry_connection_fd(grid12, cfg_desk, "B", point, 0, 1, 0, h_step=4e-3) - cf)
    err2 = abs(berry_connection_fd(grid12, cfg_desk, "B", point, 0, 1, 0, h_step=2e-3) - cf)
    assert 2.5 < err4 / err2 < 6.0


def test_fd_matrix_hermitian(grid12, cfg_desk):
    point = (cfg_desk.Ex_prime, cfg_desk.Ey_prime, cfg_desk.lambda_density, cfg_desk.B)
    A = fd_connection_matrix(grid12, cfg_desk, "lambda_density", point, 0, (0, 3), h_step=1e-3)
    assert np.abs(A - A.conj().T).max() < 1e-5
    assert np.abs(np.diag(A).imag).max() < 1e-6


def test_window_states_match_pipeline(grid12, cfg_desk):
    point = (0.2, -0.1, 2.0, 1.0)
    ws = window_states(grid12, cfg_desk, point, 1, (1, 3))
    assert [w.m for w in ws] == [1, 2, 3]
    for w in ws:
        direct = pipeline_state(grid12, cfg_desk, point, 1, w.m)
        assert np.abs(w.values - direct.values).max() < 1e-12


def test_wilson_loop_identity_for_zero_functional(grid12, cfg_natural):
    # Ey' constant: the loop functional vanishes and the holonomy is trivial
    loop = box_loop("ABCHEFA", (1.0, 1.0), (1.0, 2.0), (1.0, 2.0))
    res = wilson_loop_oracle(grid12, cfg_natural, loop, n=0, window=(0, 1), steps=64)
    assert np.abs(res.matrix - np.eye(2)).max() < 1e-8
    assert res.smallest_overlap_singular > 0.9


def test_wilson_loop_matches_path_ordered(grid12, cfg_natural):
    sc = derive_scales(cfg_natural)
    loop = rectangle_loop("Ex_prime", "Ey_prime", (0.0, 0.3), (0.0, 0.4), (0, 0, 1.0, 1.0))
    wilson = wilson_loop_oracle(grid12, cfg_natural, loop, n=0, window=(0, 1), steps=96)
    ordered = holonomy_path_ordered(loop, sc.u, window=(0, 1), steps=512, target=None)
    assert np.abs(wilson.matrix - ordered.matrix).max() < 1e-6


def test_wilson_validation(grid12, cfg_natural):
    open_path = rectangle_loop("Ex_prime", "Ey_prime", (0, 0.2), (0, 0.2), (0, 0, 1, 1))
    import dlh.holonomy as hol

    trimmed = hol.ParameterPath(open_path.vertices[:-1])
    with pytest.raises(ValidationError):
        wilson_loop_oracle(grid12, cfg_natural, trimmed)
    with pytest.raises(ValidationError):
        wilson_loop_oracle(grid12, cfg_natural, open_path, steps=4)


def test_wavefield_guards(grid12):
    bad = np.ones((grid12.points, grid12.points), dtype=complex)
    with pytest.raises(ValidationError):
        WaveField(grid=grid12, values=bad, n=0, m=0, nu=0j, l_m=1.0)
    # normalized but leaking through the boundary frame
    leak = np.exp(-((grid12.X - 10.0) ** 2 + grid12.Y**2) / 4.0).astype(complex)
    leak /= grid12.norm(leak)
    with pytest.raises(ValidationError):
        WaveField(grid=grid12, values=leak, n=0, m=0, nu=0j, l_m=1.0)
    with pytest.raises(ValidationError):
        WaveField(grid=grid12, values=bad[:10, :10], n=0, m=0, nu=0j, l_m=1.0)


def test_pipeline_rejects_offgrid_displacement(grid12, cfg_natural):
    with pytest.raises(ValidationError):
        pipeline_state(grid12, cfg_natural, (0.0, 20.0, 1.0, 1.0), 0, 0)


def test_fd_parameter_validation(grid12, cfg_desk):
    point = (0.1, 0.1, 1.0, 1.0)
    with pytest.raises(ValidationError):
        berry_connection_fd(grid12, cfg_desk, "Ez", point, 0, 0, 0)
    with pytest.raises(ValidationError):
        berry_connection_fd(grid12, cfg_desk, "B", point, 0, 0, 0, h_step=0.0)
    with pytest.raises(ValidationError):
        fd_connection_matrix(grid12, cfg_desk, "B", point, 0, (2, 1))


def test_sign_convention_report_contents(grid12):
    report = sign_convention_report(grid=grid12)
    assert report["diagonal"]["resolved_relative_sign"] == "opposite"
    assert report["diagonal"]["deviation_resolved"] < 1e-6
    assert report["diagonal"]["deviation_same_sign_variant"] > 1e-3
    assert report["off_diagonal"]["deviation_resolved"] < 1e-4
    assert report["off_diagonal"]["deviation_flipped_sign"] > 1e-2
    assert report["curvature"]["deviation"] < 1e-2
    assert report["curvature"]["measured_over_area_law"] == pytest.approx(-2.0, abs=1e-2)
    text = render_sign_report(report)
    assert "resolved relative sign: opposite" in text
    assert "area-law" in text
