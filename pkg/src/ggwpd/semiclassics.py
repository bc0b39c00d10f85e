"""Semiclassical propagation of Gaussian packets along rotor trajectories.

Three evaluators of increasing sophistication share this module:

* ``linearized_correlation`` — one real trajectory launched from the ket
  packet's center, with the dynamics linearized about it;
* ``offcenter_correlation`` — a sum over representative real trajectories
  (transport seeds), each entering through an exact quadratic form in the
  scaled offsets between trajectory endpoints and packet centers;
* ``ggwpd_correlation`` / ``ggwpd_wavefunction`` — the full complexified
  treatment: Newton-Raphson refinement of each real seed onto the complex
  saddle trajectory joining the two packets' phase-space constraint sets,
  then a steepest-descent evaluation with a continuously tracked
  square-root branch.

All evaluators consume :class:`~ggwpd.rotor.ComplexTrajectory` objects and
are therefore dynamics-agnostic: trajectories built analytically (e.g. for
free motion) can be fed to the same code paths exercised by the rotor.
Everything here is one-dimensional; packets of higher dimension are
rejected up front.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CausticError, ConfigError, ConvergenceError
from .packets import (
    ComplexPhasePoint,
    GaussianPacket,
    ResidualPair,
    bra_norm_exponent,
    ket_norm_exponent,
    residuals,
)
from .rotor import (
    ComplexTrajectory,
    RotorParams,
    SeedTrajectory,
    iterate_map,
    propagate,
)


class BranchPhase:
    """Streaming accumulator for a continuously unwrapped square root.

    Feed successive determinant values along a sufficiently fine path via
    :func:`branch_sqrt`; the accumulated argument never jumps by more than
    pi between samples, so the returned root follows the analytic branch
    instead of the principal one.  The first sample fixes the branch with
    the principal argument, which for the positive-real determinants
    arising at zero elapsed time selects the root with positive real part.
    """

    __slots__ = ("_angle", "_last")

    def __init__(self) -> None:
        self._angle = 0.0
        self._last: complex | None = None

    def advance(self, det: complex) -> complex:
        if det == 0:
            raise CausticError("vanishing determinant: caustic encountered")
        if self._last is None:
            self._angle = float(np.angle(det))
        else:
            self._angle += float(np.angle(det / self._last))
        self._last = complex(det)
        return complex(np.sqrt(abs(det)) * np.exp(0.5j * self._angle))


def branch_sqrt(det: complex, state: BranchPhase) -> complex:
    """Square root of ``det`` on the branch tracked by ``state``.

    Raises :class:`CausticError` on a vanishing determinant.
    """
    return state.advance(det)


@dataclass(frozen=True)
class SaddleTrajectory:
    """A converged complex saddle trajectory together with its provenance.

    The seed is retained because the real transport trajectory it refines
    is what gives the complex contribution its physical reading.
    """

    trajectory: ComplexTrajectory
    seed: SeedTrajectory
    iterations: int
    residual_norm: float
    residual_history: tuple[float, ...]


@dataclass(frozen=True)
class SaddleContribution:
    """One branch of a saddle-point sum, with its factors kept inspectable.

    ``value = norm_constants * exp(i*action/hbar + ket_exponent +
    bra_exponent) * prefactor`` where ``prefactor`` is the reciprocal
    branch-tracked square root (any half-integer winding phase lives
    there).
    """

    action: complex
    ket_exponent: complex
    bra_exponent: complex
    prefactor: complex
    value: complex
    winding: tuple[int, int]


@dataclass(frozen=True)
class OffCenterContribution:
    """One real-trajectory branch of the off-center correlation sum.

    ``stability_sum`` is the branch-tracked complex combination of
    stability blocks whose square root forms the prefactor; the four
    ``coeff_*`` entries multiply the squared scaled offsets (position and
    momentum, at the initial and final packet respectively) in the
    exponent's quadratic form.
    """

    stability_sum: complex
    coeff_xx_initial: complex
    coeff_xx_final: complex
    coeff_pp_initial: complex
    coeff_pp_final: complex
    dx_initial: float
    dp_initial: float
    dx_final: float
    dp_final: float
    value: complex
    winding: tuple[int, int]


@dataclass(frozen=True)
class CorrelationResult:
    """Total semiclassical correlation plus its per-branch breakdown."""

    total: complex
    branches: tuple


def _require_1d(*packets: GaussianPacket) -> None:
    for p in packets:
        if p.dim != 1:
            raise ConfigError("rotor semiclassics is one-dimensional")


def _shifted_target(beta: GaussianPacket, winding: tuple[int, int]) -> GaussianPacket:
    """The lattice image of the bra packet selected by a winding pair."""
    n_p, n_q = winding
    return beta.with_center(beta.p1 + n_p, beta.q1 + n_q)


# ---------------------------------------------------------------------------
# Newton-Raphson saddle search
# ---------------------------------------------------------------------------

def _correlation_jacobian(
    alpha: GaussianPacket, beta: GaussianPacket, traj: ComplexTrajectory
) -> np.ndarray:
    hbar = alpha.hbar
    return np.array(
        [
            [1j / hbar, 2.0 * alpha.b1],
            [
                2.0 * beta.b1 * traj.m21 - (1j / hbar) * traj.m11,
                2.0 * beta.b1 * traj.m22 - (1j / hbar) * traj.m12,
            ],
        ]
    )


def newton_step(
    alpha: GaussianPacket, beta: GaussianPacket, current: ComplexTrajectory
) -> tuple[ComplexPhasePoint, ResidualPair]:
    """One Newton update of the initial point of a candidate trajectory.

    Solves the linearized pair of endpoint constraints using the
    trajectory's stability blocks and returns the updated initial
    condition together with the residuals *before* the update.  ``beta``
    must already be the winding-shifted image the trajectory targets.
    """
    _require_1d(alpha, beta)
    res = residuals(alpha, beta, current.initial, current.final)
    jac = _correlation_jacobian(alpha, beta, current)
    rhs = -np.array([res.initial[0], res.final[0]])
    try:
        delta = np.linalg.solve(jac, rhs)
    except np.linalg.LinAlgError as exc:
        raise CausticError(
            "singular Newton system (coalescing saddles or caustic)"
        ) from exc
    updated = ComplexPhasePoint(
        current.initial.p1 + delta[0], current.initial.q1 + delta[1]
    )
    return updated, res


def _newton_solve(
    ic: ComplexPhasePoint,
    t: int,
    params: RotorParams,
    residual_of,
    jacobian_of,
    tol: float,
    max_iter: int,
    runaway_bound: float,
    branch_substeps: int,
):
    """Damped Newton iteration shared by the two saddle searches.

    A step that fails to reduce the residual norm is halved up to six
    times before the search is abandoned.
    """
    traj = propagate(ic, t, params, runaway_bound, branch_substeps)
    res = residual_of(traj)
    history = [res.max_norm]
    iterations = 0
    while res.max_norm >= tol:
        if iterations >= max_iter:
            raise ConvergenceError(res.max_norm, iterations)
        jac = jacobian_of(traj)
        rhs = -np.array([res.initial[0], res.final[0]])
        try:
            delta = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError as exc:
            raise CausticError(
                "singular Newton system (coalescing saddles or caustic)"
            ) from exc
        scale = 1.0
        accepted = False
        cand_res = res
        for _ in range(7):
            cand_ic = ComplexPhasePoint(
                traj.initial.p1 + scale * delta[0],
                traj.initial.q1 + scale * delta[1],
            )
            cand = propagate(cand_ic, t, params, runaway_bound, branch_substeps)
            cand_res = residual_of(cand)
            if cand_res.max_norm < res.max_norm:
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            raise ConvergenceError(
                cand_res.max_norm,
                iterations + 1,
                "Newton step failed to reduce the residual after six halvings",
            )
        traj, res = cand, cand_res
        iterations += 1
        history.append(res.max_norm)
    return traj, iterations, res, history


def find_saddle(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    seed: SeedTrajectory,
    params: RotorParams,
    tol: float = 1e-12,
    max_iter: int = 25,
    runaway_bound: float = 10.0,
    branch_substeps: int = 16,
) -> SaddleTrajectory:
    """Refine a real seed trajectory onto the complex saddle trajectory.

    The seed is complexified with exactly zero imaginary parts and
    iterated with damped Newton steps until both endpoint residuals drop
    below ``tol`` in max norm.  The bra-side constraint targets the
    lattice image of ``beta`` selected by ``seed.winding``.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` updates, or when damping cannot reduce the
        residual (the last residual norm rides along on the exception).
    RunawayError
        If an iterate's trajectory escapes to large imaginary parts.
    CausticError
        On a singular Newton system.
    """
    _require_1d(alpha, beta)
    target = _shifted_target(beta, seed.winding)
    ic = ComplexPhasePoint(complex(seed.ic[0]), complex(seed.ic[1]))

    def residual_of(traj: ComplexTrajectory) -> ResidualPair:
        return residuals(alpha, target, traj.initial, traj.final)

    def jacobian_of(traj: ComplexTrajectory) -> np.ndarray:
        return _correlation_jacobian(alpha, target, traj)

    traj, iterations, res, history = _newton_solve(
        ic, seed.t, params, residual_of, jacobian_of,
        tol, max_iter, runaway_bound, branch_substeps,
    )
    return SaddleTrajectory(
        trajectory=traj,
        seed=seed,
        iterations=iterations,
        residual_norm=res.max_norm,
        residual_history=tuple(history),
    )


# ---------------------------------------------------------------------------
# GGWPD steepest-descent terms
# ---------------------------------------------------------------------------

def saddle_contribution(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    trajectory: ComplexTrajectory,
    winding: tuple[int, int] = (0, 0),
) -> SaddleContribution:
    """Steepest-descent correlation term of one saddle trajectory.

    ``beta`` must be the winding-shifted image the trajectory connects to;
    the branch of the square-root prefactor is tracked continuously along
    the trajectory's stability checkpoints starting from the positive root
    at zero elapsed time.
    """
    _require_1d(alpha, beta)
    hbar = alpha.hbar
    ba, bb = alpha.b1, beta.b1
    state = BranchPhase()
    root = 0j
    for M in trajectory.checkpoints:
        det = (
            M[0, 0] * ba
            + bb * M[1, 1]
            + 2j * hbar * bb * M[1, 0] * ba
            - (0.5j / hbar) * M[0, 1]
        )
        root = branch_sqrt(det, state)
    fm = ket_norm_exponent(alpha, trajectory.initial)
    fp = bra_norm_exponent(beta, trajectory.final)
    value = (
        (4.0 * ba * bb) ** 0.25
        * np.exp(1j * trajectory.action / hbar + fm + fp)
        / root
    )
    return SaddleContribution(
        action=trajectory.action,
        ket_exponent=fm,
        bra_exponent=fp,
        prefactor=1.0 / root,
        value=complex(value),
        winding=winding,
    )


def ggwpd_correlation(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    saddles: list[SaddleTrajectory],
    t: int,
    prune_threshold: float = 1e-12,
) -> CorrelationResult:
    """Sum of steepest-descent terms over converged saddle trajectories.

    Branches whose exponential magnitude falls below ``prune_threshold``
    times the largest branch are dropped.  The winding image each saddle
    targets is taken from its seed, and the action accumulated on the
    unfolded torus carries the corresponding phase without correction.
    """
    _require_1d(alpha, beta)
    contributions: list[SaddleContribution] = []
    weights: list[float] = []
    for sad in saddles:
        if sad.trajectory.t != t:
            raise ConfigError(
                f"saddle trajectory has {sad.trajectory.t} steps, expected {t}"
            )
        target = _shifted_target(beta, sad.seed.winding)
        contrib = saddle_contribution(
            alpha, target, sad.trajectory, winding=sad.seed.winding
        )
        exponent = (
            1j * contrib.action / alpha.hbar
            + contrib.ket_exponent
            + contrib.bra_exponent
        )
        contributions.append(contrib)
        weights.append(float(np.exp(exponent.real)))
    if weights:
        cutoff = prune_threshold * max(weights)
        kept = tuple(
            c for c, w in zip(contributions, weights) if w >= cutoff
        )
    else:
        kept = ()
    total = complex(sum(c.value for c in kept))
    return CorrelationResult(total=total, branches=kept)


def wavefunction_contribution(
    alpha: GaussianPacket,
    trajectory: ComplexTrajectory,
    winding: tuple[int, int] = (0, 0),
) -> SaddleContribution:
    """Steepest-descent term for a final position eigenstate.

    Same structure as :func:`saddle_contribution` with the bra packet
    replaced by a position eigenvector at the trajectory's (real) final
    position; the bra-side exponent is identically zero.
    """
    _require_1d(alpha)
    hbar = alpha.hbar
    ba = alpha.b1
    state = BranchPhase()
    root = 0j
    for M in trajectory.checkpoints:
        root = branch_sqrt(M[1, 1] + 2j * hbar * M[1, 0] * ba, state)
    fm = ket_norm_exponent(alpha, trajectory.initial)
    value = (
        (2.0 * ba / np.pi) ** 0.25
        * np.exp(1j * trajectory.action / hbar + fm)
        / root
    )
    return SaddleContribution(
        action=trajectory.action,
        ket_exponent=fm,
        bra_exponent=0j,
        prefactor=1.0 / root,
        value=complex(value),
        winding=winding,
    )


def find_position_saddle(
    alpha: GaussianPacket,
    x_target: float,
    seed_momentum: float,
    t: int,
    params: RotorParams,
    winding_q: int = 0,
    tol: float = 1e-12,
    max_iter: int = 25,
    runaway_bound: float = 10.0,
    branch_substeps: int = 16,
) -> SaddleTrajectory:
    """Saddle search with the bra constraint replaced by Q_t = x_target.

    ``x_target`` must already include any lattice shift; ``winding_q``
    merely records it.  Seeded from the real point (seed_momentum, q_alpha).
    """
    _require_1d(alpha)
    hbar = alpha.hbar
    ba = alpha.b1

    def residual_of(traj: ComplexTrajectory) -> ResidualPair:
        c0 = 2.0 * ba * (traj.initial.q1 - alpha.q1) + (1j / hbar) * (
            traj.initial.p1 - alpha.p1
        )
        ct = traj.final.q1 - x_target
        return ResidualPair(np.array([c0]), np.array([ct]))

    def jacobian_of(traj: ComplexTrajectory) -> np.ndarray:
        return np.array([[1j / hbar, 2.0 * ba], [traj.m21, traj.m22]])

    ic = ComplexPhasePoint(complex(seed_momentum), complex(alpha.q1))
    traj, iterations, res, history = _newton_solve(
        ic, t, params, residual_of, jacobian_of,
        tol, max_iter, runaway_bound, branch_substeps,
    )
    seed = SeedTrajectory(
        ic=(float(seed_momentum), alpha.q1),
        t=t,
        winding=(0, winding_q),
        kind="position",
    )
    return SaddleTrajectory(
        trajectory=traj,
        seed=seed,
        iterations=iterations,
        residual_norm=res.max_norm,
        residual_history=tuple(history),
    )


def ggwpd_wavefunction(
    alpha: GaussianPacket,
    x: float,
    t: int,
    params: RotorParams,
    image_range: int = 1,
    tol: float = 1e-12,
    max_iter: int = 25,
    halfwidth_sigma: float = 8.0,
    prune_threshold: float = 1e-12,
) -> complex:
    """Evolved wavefunction at position x via the position-saddle sum.

    Real seeds are taken from the momentum line through the ket center
    (adequate for shearing-dominated transport; strong chaos would need
    manifold-based seeding as in the correlation case).  One saddle is
    refined per crossing per lattice image of x.
    """
    _require_1d(alpha)
    if t < 1:
        raise ValueError("position saddles need at least one step")
    sig_p = alpha.hbar / (2.0 * alpha.sigma)
    w = halfwidth_sigma * sig_p
    n_scan = 1025
    p_grid = np.linspace(alpha.p1 - w, alpha.p1 + w, n_scan)
    pts = np.column_stack([p_grid, np.full(n_scan, alpha.q1)])
    ends = iterate_map(pts, t, params)

    def q_end(p: float) -> float:
        return float(iterate_map(np.array([[p, alpha.q1]]), t, params)[0, 1])

    terms: list[SaddleContribution] = []
    weights: list[float] = []
    seen: set[tuple] = set()
    for n_q in range(-image_range, image_range + 1):
        target = x + n_q
        g = ends[:, 1] - target
        sign = np.sign(g)
        # roots landing exactly on a scan node (x at an evolved center is
        # the common case) would defeat a strict sign-change test
        seed_momenta = [float(p_grid[i]) for i in np.nonzero(sign == 0.0)[0]]
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            lo, hi = p_grid[i], p_grid[i + 1]
            glo = g[i]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                gm = q_end(mid) - target
                if gm == 0.0 or (hi - lo) < 1e-13:
                    lo = hi = mid
                    break
                if np.sign(gm) == np.sign(glo):
                    lo, glo = mid, gm
                else:
                    hi = mid
            seed_momenta.append(0.5 * (lo + hi))
        for p_seed in seed_momenta:
            sad = find_position_saddle(
                alpha, target, p_seed, t, params,
                winding_q=n_q, tol=tol, max_iter=max_iter,
            )
            ic = sad.trajectory.initial
            key = (
                n_q,
                round(ic.p1.real, 12), round(ic.p1.imag, 12),
                round(ic.q1.real, 12), round(ic.q1.imag, 12),
            )
            if key in seen:
                continue
            seen.add(key)
            contrib = wavefunction_contribution(
                alpha, sad.trajectory, winding=(0, n_q)
            )
            exponent = 1j * contrib.action / alpha.hbar + contrib.ket_exponent
            terms.append(contrib)
            weights.append(float(np.exp(exponent.real)))
    if not terms:
        return 0j
    cutoff = prune_threshold * max(weights)
    return complex(
        sum(c.value for c, w in zip(terms, weights) if w >= cutoff)
    )


# ---------------------------------------------------------------------------
# off-center real-trajectory and linearized evaluators
# ---------------------------------------------------------------------------

def offcenter_contribution(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    trajectory: ComplexTrajectory,
    winding: tuple[int, int] = (0, 0),
) -> OffCenterContribution:
    """Exact quadratic-form correlation term of one real trajectory.

    The dynamics is expanded to second order about the trajectory; for
    quadratic Hamiltonians the result is exact for *any* real trajectory.
    ``beta`` must be the winding-shifted image (equal widths and hbar are
    required — the underlying expression assumes a common sigma).
    """
    _require_1d(alpha, beta)
    if not np.isclose(alpha.b1, beta.b1, rtol=1e-12) or alpha.hbar != beta.hbar:
        raise ConfigError(
            "off-center evaluation requires equal packet widths and hbar"
        )
    if not (trajectory.initial.is_real() and trajectory.final.is_real()):
        raise ConfigError("off-center evaluation requires a real trajectory")
    b = alpha.b1
    hbar = alpha.hbar
    # sigma^2 = 1/(4b); the two stability scalings below are hbar/(2 sigma^2)
    # and its reciprocal
    r1 = 2.0 * hbar * b
    r2 = 1.0 / (2.0 * hbar * b)
    sx = np.sqrt(1.0 / (2.0 * b))  # sqrt(2 sigma^2)

    state = BranchPhase()
    root = 0j
    a0 = 0j
    for M in trajectory.checkpoints:
        a0 = M[0, 0] + M[1, 1] + 1j * (r1 * M[1, 0] - r2 * M[0, 1])
        root = branch_sqrt(a0, state)

    p0, q0 = trajectory.initial.p1.real, trajectory.initial.q1.real
    pt, qt = trajectory.final.p1.real, trajectory.final.q1.real
    dx_a = (alpha.q1 - q0) / sx
    dp_a = (alpha.p1 - p0) * sx / hbar
    dx_b = (beta.q1 - qt) / sx
    dp_b = (beta.p1 - pt) * sx / hbar

    c_xx_i = trajectory.m22 - 1j * r2 * trajectory.m12
    c_xx_f = trajectory.m11 - 1j * r2 * trajectory.m12
    c_pp_i = trajectory.m11 + 1j * r1 * trajectory.m21
    c_pp_f = trajectory.m22 + 1j * r1 * trajectory.m21

    quad = (
        c_xx_i * dx_a**2
        + c_xx_f * dx_b**2
        + c_pp_i * dp_a**2
        + c_pp_f * dp_b**2
        - 2.0 * (dx_a + 1j * dp_a) * (dx_b - 1j * dp_b)
        + 2j * c_xx_i * dx_a * dp_a
        - 2j * c_xx_f * dx_b * dp_b
    )
    phase = (
        trajectory.action.real
        + pt * (beta.q1 - qt)
        - p0 * (alpha.q1 - q0)
    ) / hbar
    value = np.sqrt(2.0) / root * np.exp(1j * phase - quad / (2.0 * a0))
    return OffCenterContribution(
        stability_sum=complex(a0),
        coeff_xx_initial=complex(c_xx_i),
        coeff_xx_final=complex(c_xx_f),
        coeff_pp_initial=complex(c_pp_i),
        coeff_pp_final=complex(c_pp_f),
        dx_initial=float(dx_a),
        dp_initial=float(dp_a),
        dx_final=float(dx_b),
        dp_final=float(dp_b),
        value=complex(value),
        winding=winding,
    )


def offcenter_correlation(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    seeds: list[SeedTrajectory],
    params: RotorParams,
    t: int,
    prune_threshold: float = 1e-12,
    branch_substeps: int = 16,
) -> CorrelationResult:
    """Off-center real-trajectory correlation summed over transport seeds."""
    _require_1d(alpha, beta)
    contributions: list[OffCenterContribution] = []
    weights: list[float] = []
    for seed in seeds:
        if seed.t != t:
            raise ConfigError(f"seed has t = {seed.t}, expected {t}")
        ic = ComplexPhasePoint(complex(seed.ic[0]), complex(seed.ic[1]))
        traj = propagate(ic, t, params, branch_substeps=branch_substeps)
        target = _shifted_target(beta, seed.winding)
        contrib = offcenter_contribution(
            alpha, target, traj, winding=seed.winding
        )
        contributions.append(contrib)
        weights.append(abs(contrib.value))
    if weights:
        cutoff = prune_threshold * max(weights)
        kept = tuple(
            c for c, w in zip(contributions, weights) if w >= cutoff
        )
    else:
        kept = ()
    total = complex(sum(c.value for c in kept))
    return CorrelationResult(total=total, branches=kept)


def linearized_correlation(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    params: RotorParams,
    t: int,
    branch_substeps: int = 16,
) -> complex:
    """Single-trajectory linearized estimate of the correlation.

    Launches the ket center itself (so the initial offsets vanish
    identically) and targets the lattice image of the bra center nearest
    the endpoint.  At t = 0 this reproduces the closed-form packet overlap
    exactly.
    """
    _require_1d(alpha, beta)
    ic = ComplexPhasePoint(complex(alpha.p1), complex(alpha.q1))
    traj = propagate(ic, t, params, branch_substeps=branch_substeps)
    n_p = int(np.round(traj.final.p1.real - beta.p1))
    n_q = int(np.round(traj.final.q1.real - beta.q1))
    target = _shifted_target(beta, (n_p, n_q))
    return offcenter_contribution(
        alpha, target, traj, winding=(n_p, n_q)
    ).value
