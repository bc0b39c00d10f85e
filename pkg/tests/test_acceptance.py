"""Acceptance gate: the shipping criteria, one test (or group) each.

Tolerances in this file are pinned.  Loosening one is a release decision,
not a test fix — if a check here goes red, the library regressed (or a
pinned reference constant is wrong, which the failure message will say).
"""
import time

import numpy as np
import pytest

import ggwpd.free_particle as fp
from ggwpd.experiment import (
    REGRESSION_SADDLES,
    REGRESSION_SEEDS,
    emit_csv,
    packets_for,
    prepare_scenario,
    preset,
    run_sweep,
)
from ggwpd.floquet import discretize_packet, floquet_matrix
from ggwpd.packets import ComplexPhasePoint, GaussianPacket
from ggwpd.rotor import RotorParams, iterate_map, propagate
from ggwpd.semiclassics import find_saddle


def _by_winding(setup):
    return {s.seed.winding: s for s in setup.saddles}


# ---------------------------------------------------------------------------
# 1. integrable saddle regression
# ---------------------------------------------------------------------------

def test_integrable_saddle_components_match_pinned_values(integrable_bundle):
    sad = _by_winding(integrable_bundle.setup)[(0, 1)]
    tP, tQ = REGRESSION_SADDLES["integrable-fig2"][(0, 1)]
    P0 = sad.trajectory.initial.p1
    Q0 = sad.trajectory.initial.q1
    assert abs(P0.real - tP.real) < 1e-6
    assert abs(P0.imag - tP.imag) < 1e-6
    assert abs(Q0.real - tQ.real) < 1e-6
    assert abs(Q0.imag - tQ.imag) < 1e-6


def test_integrable_newton_budget(integrable_bundle):
    sad = _by_winding(integrable_bundle.setup)[(0, 1)]
    assert sad.iterations <= 8
    assert sad.residual_norm < 1e-12


def test_integrable_seed_matches_pinned_reference(integrable_bundle):
    """Located manifold-intersection seed within 1e-6 of the pinned pair.

    This gate is currently red and is left red on purpose: the located
    intersection momentum is 0.8075682672864... (stable to better than
    1e-12 under scan-grid refinement, and it is the value from which the
    saddle above converges to its own 1e-6 gate), while the pinned
    reference constant is 0.8075799 — a 1.2e-5 gap.  The reference
    constant carries fewer reliable digits than the gate demands, so the
    comparison cannot pass without either more digits in the constant or
    a looser gate, and silently loosening a pinned tolerance is exactly
    what this file exists to prevent.
    """
    sad = _by_winding(integrable_bundle.setup)[(0, 1)]
    ref_p, ref_q = REGRESSION_SEEDS["integrable-fig2"][(0, 1)]
    dev_p = abs(sad.seed.ic[0] - ref_p)
    dev_q = abs(sad.seed.ic[1] - ref_q)
    assert dev_q < 1e-6
    assert dev_p < 1e-6, (
        f"seed momentum {sad.seed.ic[0]:.13f} vs pinned reference {ref_p}: "
        f"deviation {dev_p:.3e} exceeds the 1e-6 gate; the located value is "
        "grid-stable to 1e-12, so the pinned constant lacks the digits this "
        "gate asks for"
    )


def test_integrable_preparation_runtime_under_one_second():
    start = time.perf_counter()
    prepare_scenario(preset("integrable-fig2"))
    assert time.perf_counter() - start < 1.0


# ---------------------------------------------------------------------------
# 2. chaotic saddle regression
# ---------------------------------------------------------------------------

def test_chaotic_seeds_match_pinned_values(chaotic_bundle):
    by_winding = _by_winding(chaotic_bundle.setup)
    for winding, (sp, sq) in REGRESSION_SEEDS["chaotic-fig6"].items():
        sad = by_winding[winding]
        assert abs(sad.seed.ic[0] - sp) < 1e-6
        assert abs(sad.seed.ic[1] - sq) < 1e-6


def test_chaotic_saddle_components_match_pinned_values(chaotic_bundle):
    by_winding = _by_winding(chaotic_bundle.setup)
    for winding, (tP, tQ) in REGRESSION_SADDLES["chaotic-fig6"].items():
        sad = by_winding[winding]
        P0 = sad.trajectory.initial.p1
        Q0 = sad.trajectory.initial.q1
        assert abs(P0.real - tP.real) < 1e-6
        assert abs(P0.imag - tP.imag) < 1e-6
        assert abs(Q0.real - tQ.real) < 1e-6
        assert abs(Q0.imag - tQ.imag) < 1e-6
        assert sad.residual_norm < 1e-12


def test_chaotic_saddles_sit_on_the_symmetry_line(chaotic_bundle):
    """For this scenario the saddle initial conditions obey P0 = i Q0."""
    by_winding = _by_winding(chaotic_bundle.setup)
    for winding in REGRESSION_SADDLES["chaotic-fig6"]:
        ic = by_winding[winding].trajectory.initial
        assert abs(ic.p1 - 1j * ic.q1) < 1e-12


def test_chaotic_reflected_seeds_give_negated_saddles(chaotic_bundle):
    """Negating phase space maps the saddle for image (n_p, n_q) onto the
    one for (-n_p, -1-n_q); partners inside the searched image window must
    appear, negated, to 1e-10."""
    setup = chaotic_bundle.setup
    rng = setup.config.image_range
    points = [
        (s.trajectory.initial.p1, s.trajectory.initial.q1)
        for s in setup.saddles
    ]
    checked = 0
    for sad, (P0, Q0) in zip(setup.saddles, points):
        n_p, n_q = sad.seed.winding
        if max(abs(-n_p), abs(-1 - n_q)) > rng:
            continue
        best = min(max(abs(P0 + P1), abs(Q0 + Q1)) for P1, Q1 in points)
        assert best < 1e-10
        checked += 1
    assert checked >= 4  # both pinned saddles and their reflections


# ---------------------------------------------------------------------------
# 3. error hierarchy
# ---------------------------------------------------------------------------

def test_error_hierarchy_holds_at_every_gated_n(
    integrable_bundle, chaotic_bundle
):
    for bundle in (integrable_bundle, chaotic_bundle):
        gated = [r for r in bundle.rows if r.N >= 100]
        assert len(gated) == 13  # 100 .. 700 step 50
        for r in gated:
            assert r.abs_err_ggwpd < r.abs_err_oc


def test_integrable_error_ratio_at_largest_n(integrable_bundle):
    last = integrable_bundle.rows[-1]
    assert last.N == 700
    assert last.abs_err_oc / last.abs_err_ggwpd >= 10.0


def test_sweep_runtime_under_a_minute(integrable_bundle, chaotic_bundle):
    assert integrable_bundle.duration < 60.0
    assert chaotic_bundle.duration < 60.0


# ---------------------------------------------------------------------------
# 4. magnitude-ratio convergence
# ---------------------------------------------------------------------------

def test_magnitude_ratio_converges_only_for_saddle_sum(
    integrable_bundle, chaotic_bundle
):
    for bundle in (integrable_bundle, chaotic_bundle):
        rows = {r.N: r for r in bundle.rows}
        first, last = rows[100], rows[700]
        gg_err = abs(last.ratio_ggwpd - 1.0)
        assert gg_err < 1e-2
        assert gg_err < abs(first.ratio_ggwpd - 1.0)
        assert abs(last.ratio_oc - 1.0) >= 5.0 * gg_err


# ---------------------------------------------------------------------------
# 5. phase convergence
# ---------------------------------------------------------------------------

def test_phase_error_converges(integrable_bundle, chaotic_bundle):
    for bundle in (integrable_bundle, chaotic_bundle):
        rows = {r.N: r for r in bundle.rows}
        assert abs(rows[700].phase_err_ggwpd) < 1e-2
        assert abs(rows[700].phase_err_ggwpd) < abs(rows[100].phase_err_ggwpd)


# ---------------------------------------------------------------------------
# 6. free-particle exactness
# ---------------------------------------------------------------------------

def test_free_particle_methods_reach_machine_precision():
    """All three evaluators agree with the closed form to 1e-12 on a
    six-sigma grid, in under a second, with m = sigma = hbar = 1."""
    alpha = GaussianPacket(0.7, -0.3, 0.25, 1.0)  # b = 1/(2 sigma)^2, sigma = 1
    assert alpha.sigma == 1.0
    start = time.perf_counter()
    for t in (0.5, 1.0, 2.0, 5.0):
        _, q_t = fp.evolved_center(alpha, t)
        for x in np.linspace(q_t - 6.0, q_t + 6.0, 25):
            exact = fp.exact_wavefunction(alpha, x, t)
            assert abs(fp.linearized_wavefunction(alpha, x, t) - exact) < 1e-12
            assert abs(fp.offcenter_wavefunction(alpha, x, t) - exact) < 1e-12
            assert abs(fp.ggwpd_wavefunction(alpha, x, t) - exact) < 1e-12
    assert time.perf_counter() - start < 1.0


# ---------------------------------------------------------------------------
# 7. oracle integrity
# ---------------------------------------------------------------------------

def test_floquet_operator_unitary_at_largest_n():
    for K in (0.05, 8.25):
        F = floquet_matrix(700, RotorParams(K))
        dev = np.abs(F.conj().T @ F - np.eye(700)).max()
        assert dev < 1e-12


def test_discretized_packets_unit_norm():
    for name in ("integrable-fig2", "chaotic-fig6"):
        cfg = preset(name)
        for N in (50, 350, 700):
            alpha, beta = packets_for(cfg, N)
            for packet in (alpha, beta):
                vec = discretize_packet(packet, N, cfg.image_range)
                assert abs(np.linalg.norm(vec) - 1.0) < 1e-12


def test_quantum_correlation_bounded_by_one(integrable_bundle, chaotic_bundle):
    for bundle in (integrable_bundle, chaotic_bundle):
        for r in bundle.rows:
            assert abs(r.C_qm) <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# 8. structural invariants
# ---------------------------------------------------------------------------

def test_unit_determinants_along_all_used_trajectories(
    integrable_bundle, chaotic_bundle
):
    """The map is symplectic, so every accumulated stability matrix —
    final and every branch-tracking checkpoint, complex saddle and real
    off-center trajectory alike — has determinant 1."""
    for bundle in (integrable_bundle, chaotic_bundle):
        setup = bundle.setup
        params = RotorParams(setup.config.K)
        trajectories = [sad.trajectory for sad in setup.saddles]
        for seed in setup.seeds:
            trajectories.append(
                propagate(ComplexPhasePoint(*seed.ic), setup.config.t, params)
            )
        for traj in trajectories:
            assert abs(traj.stability_determinant() - 1.0) < 1e-10
            for mat in traj.checkpoints:
                det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
                assert abs(det - 1.0) < 1e-10


def _shoot(q0: float, qt: float, t: int, params: RotorParams, p0_guess: float):
    """Two-point boundary solve: pick p0 so the orbit from (p0, q0) lands
    on final position qt after t steps (Newton on the landing miss).

    Needs a guess on the right landing branch — strongly kicked orbits
    fold the landing position many times per unit of p0, so a cold Newton
    start jumps branches and diverges.
    """
    p0 = p0_guess
    for _ in range(80):
        traj = propagate(ComplexPhasePoint(p0, q0), t, params)
        miss = (traj.final.q1 - qt).real
        if abs(miss) < 1e-14:
            return traj
        p0 -= miss / traj.m21.real
    raise AssertionError(f"boundary solve stalled, landing miss {miss:.3e}")


def _branch_guess(q0: float, qt: float, t: int, params: RotorParams) -> float:
    """Coarse-scan p0 for a sign change of the landing miss, then bisect
    onto that branch far enough for Newton to finish the job."""
    grid = np.linspace(-0.5, 0.9, 4001)
    pts = np.column_stack([grid, np.full_like(grid, q0)])
    miss = iterate_map(pts, t, params)[:, 1] - qt
    sign = np.sign(miss)
    crossings = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    assert crossings.size, "no landing branch crosses the target in the window"
    i = int(crossings[0])
    lo, hi = float(grid[i]), float(grid[i + 1])
    flo = float(miss[i])
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fmid = float(
            iterate_map(np.array([[mid, q0]]), t, params)[0, 1] - qt
        )
        if flo * fmid <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def test_action_is_the_generating_function_of_the_map():
    """Finite differences of the two-point action against the boundary
    momenta and the stability blocks of the solving trajectory."""
    params = RotorParams(8.25)
    t = 3
    q0, qt = 0.1, 0.35
    h = 1e-6

    center = _shoot(q0, qt, t, params, _branch_guess(q0, qt, t, params))
    p0_c = center.initial.p1.real

    def solved(dq0: float, dqt: float):
        return _shoot(q0 + dq0, qt + dqt, t, params, p0_guess=p0_c)

    s_q0 = (solved(+h, 0).action.real - solved(-h, 0).action.real) / (2 * h)
    s_qt = (solved(0, +h).action.real - solved(0, -h).action.real) / (2 * h)
    assert abs(s_q0 - (-center.initial.p1.real)) < 1e-5
    assert abs(s_qt - center.final.p1.real) < 1e-5

    # second derivatives: boundary-momentum sensitivities against the
    # stability blocks of the central trajectory
    dp0_dq0 = (solved(+h, 0).initial.p1.real
               - solved(-h, 0).initial.p1.real) / (2 * h)
    dp0_dqt = (solved(0, +h).initial.p1.real
               - solved(0, -h).initial.p1.real) / (2 * h)
    dpt_dqt = (solved(0, +h).final.p1.real
               - solved(0, -h).final.p1.real) / (2 * h)
    m11 = center.m11.real
    m21 = center.m21.real
    m22 = center.m22.real
    assert abs(dp0_dq0 - (-m22 / m21)) < 1e-5 * max(1.0, abs(m22 / m21))
    assert abs(dp0_dqt - 1.0 / m21) < 1e-5
    assert abs(dpt_dqt - m11 / m21) < 1e-5 * max(1.0, abs(m11 / m21))


def test_saddle_locations_do_not_depend_on_hbar(
    integrable_bundle, chaotic_bundle
):
    """With packet width locked to b = pi N, the saddle equations lose
    their hbar dependence; re-solving at a different N must reproduce the
    same complex initial conditions."""
    # chaotic: the scenario setup already re-solved every saddle at its
    # second N and recorded the worst component drift
    assert chaotic_bundle.setup.saddle_drift < 1e-10

    # integrable: re-solve explicitly at the two sweep endpoints
    cfg = integrable_bundle.config
    params = RotorParams(cfg.K)
    seed = integrable_bundle.setup.seeds[0]
    solutions = []
    for N in (50, 700):
        alpha, beta = packets_for(cfg, N)
        sad = find_saddle(alpha, beta, seed, params, tol=cfg.tol,
                          max_iter=cfg.max_iter)
        solutions.append(sad.trajectory.initial)
    a, b = solutions
    assert abs(a.p1 - b.p1) < 1e-10
    assert abs(a.q1 - b.q1) < 1e-10


# ---------------------------------------------------------------------------
# 9. determinism
# ---------------------------------------------------------------------------

def test_repeated_sweeps_emit_identical_bytes(
    integrable_bundle, chaotic_bundle, tmp_path
):
    for bundle in (integrable_bundle, chaotic_bundle):
        cfg = bundle.config
        rerun_rows = run_sweep(cfg, prepare_scenario(cfg))
        first = tmp_path / f"{cfg.label}_first.csv"
        second = tmp_path / f"{cfg.label}_second.csv"
        emit_csv(bundle.rows, first)
        emit_csv(rerun_rows, second)
        assert first.read_bytes() == second.read_bytes()
