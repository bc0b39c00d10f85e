"""Gaussian wave packets and the complexified phase-space constraint.

The packet parametrization used everywhere in this package is

    <x|alpha> = (2^D Det[b]/pi^D)^(1/4) exp[-(x-q).b.(x-q) + (i/hbar) p.(x-q)]

with a real symmetric positive definite width matrix ``b``.  A complex
phase-space point (P, Q) represents the same state when it satisfies the
linear constraint relation solved by :func:`manifold_point`; the
normalization-and-phase exponents returned by :func:`ket_norm_exponent`
and :func:`bra_norm_exponent` make the complex-center Gaussian form agree
pointwise with the real-center one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _as_vector(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def _as_complex_vector(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=complex))


@dataclass(frozen=True)
class GaussianPacket:
    """A unit-normalized Gaussian coherent state.

    Parameters
    ----------
    center_p, center_q : float or (D,) array_like
        Real phase-space center.
    b : float or (D, D) array_like
        Width matrix (inverse length squared); must be real symmetric with
        strictly positive eigenvalues.
    hbar : float
        Action scale.  For the rotor experiments ``hbar = 1/(2 pi N)`` and
        ``b = pi N`` so that position and momentum uncertainties coincide.
    """

    center_p: np.ndarray
    center_q: np.ndarray
    b: np.ndarray
    hbar: float

    def __init__(self, center_p, center_q, b, hbar: float) -> None:
        object.__setattr__(self, "center_p", _as_vector(center_p))
        object.__setattr__(self, "center_q", _as_vector(center_q))
        bm = np.asarray(b, dtype=float)
        if bm.ndim == 0:
            bm = bm.reshape(1, 1)
        object.__setattr__(self, "b", bm)
        object.__setattr__(self, "hbar", float(hbar))
        self._validate()

    def _validate(self) -> None:
        d = self.center_q.shape[0]
        if self.center_p.shape != (d,) or self.b.shape != (d, d):
            raise ValueError("inconsistent dimensions among p, q, b")
        if not np.allclose(self.b, self.b.T, rtol=0.0, atol=1e-14):
            raise ValueError("width matrix must be symmetric")
        if np.any(np.linalg.eigvalsh(self.b) <= 0.0):
            raise ValueError("width matrix must be positive definite")
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")

    @property
    def dim(self) -> int:
        return self.center_q.shape[0]

    @property
    def b1(self) -> float:
        """Scalar width for one-dimensional packets."""
        if self.dim != 1:
            raise ValueError("scalar width only defined for D=1")
        return float(self.b[0, 0])

    @property
    def sigma(self) -> float:
        """Position uncertainty sigma = 1/(2 sqrt(b)) for D=1."""
        return 1.0 / (2.0 * np.sqrt(self.b1))

    @property
    def p1(self) -> float:
        if self.dim != 1:
            raise ValueError("scalar center only defined for D=1")
        return float(self.center_p[0])

    @property
    def q1(self) -> float:
        if self.dim != 1:
            raise ValueError("scalar center only defined for D=1")
        return float(self.center_q[0])

    def norm_constant(self) -> float:
        """The real prefactor (2^D Det[b]/pi^D)^(1/4)."""
        d = self.dim
        det = float(np.linalg.det(self.b))
        return (2.0**d * det / np.pi**d) ** 0.25

    def with_center(self, p, q) -> "GaussianPacket":
        """Same width and hbar, new real center (used for lattice images)."""
        return GaussianPacket(p, q, self.b, self.hbar)


@dataclass(frozen=True)
class ComplexPhasePoint:
    """A point (P, Q) in complexified phase space."""

    P: np.ndarray
    Q: np.ndarray

    def __init__(self, P, Q) -> None:
        object.__setattr__(self, "P", _as_complex_vector(P))
        object.__setattr__(self, "Q", _as_complex_vector(Q))
        if self.P.shape != self.Q.shape:
            raise ValueError("P and Q must have the same dimension")

    @property
    def p1(self) -> complex:
        return complex(self.P[0])

    @property
    def q1(self) -> complex:
        return complex(self.Q[0])

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(
            np.all(np.abs(self.P.imag) <= tol) and np.all(np.abs(self.Q.imag) <= tol)
        )


@dataclass(frozen=True)
class ResidualPair:
    """Deviations of a trajectory's endpoints from the two packet constraints.

    ``initial`` measures how far the initial point is from the ket packet's
    constraint set, ``final`` the same for the final point against the bra
    packet (with its momentum term conjugated).  Both vanish exactly on a
    saddle-point trajectory.
    """

    initial: np.ndarray = field()
    final: np.ndarray = field()

    def __init__(self, initial, final) -> None:
        object.__setattr__(self, "initial", _as_complex_vector(initial))
        object.__setattr__(self, "final", _as_complex_vector(final))

    @property
    def max_norm(self) -> float:
        return float(
            max(np.max(np.abs(self.initial)), np.max(np.abs(self.final)))
        )


def packet_evaluate(packet: GaussianPacket, x) -> complex:
    """Amplitude <x|alpha> of the packet at a real position.

    Parameters
    ----------
    packet : GaussianPacket
    x : float or (D,) array_like

    Returns
    -------
    complex
    """
    xv = _as_vector(x)
    dq = xv - packet.center_q
    quad = dq @ packet.b @ dq
    phase = packet.center_p @ dq / packet.hbar
    return packet.norm_constant() * np.exp(-quad + 1j * phase)


def manifold_point(packet: GaussianPacket, Q) -> ComplexPhasePoint:
    """The unique momentum completing Q to a point representing the packet.

    Solves ``2 b Q + (i/hbar) P = 2 b q_c + (i/hbar) p_c`` for P, i.e.

        P = p_c + 2 i hbar b (Q - q_c).

    Every returned point yields an identically zero initial residual in
    :func:`residuals`, and for an origin-centered packet with
    ``2 sigma^2 = hbar`` the relation reduces to ``P = i Q``.
    """
    Qv = _as_complex_vector(Q)
    P = packet.center_p + 2j * packet.hbar * (packet.b @ (Qv - packet.center_q))
    return ComplexPhasePoint(P, Qv)


def ket_norm_exponent(packet: GaussianPacket, point: ComplexPhasePoint) -> complex:
    """Exponent restoring normalization and phase for a complex-center ket.

    With ``N0 = (2^D Det[b]/pi^D)^(1/4) exp[ket_norm_exponent]`` the form
    ``N0 exp[-(x-Q).b.(x-Q) + (i/hbar) P.(x-Q)]`` reproduces <x|alpha>
    pointwise whenever (P, Q) lies on the packet's constraint set.

    Vanishes exactly for real points.
    """
    b = packet.b
    hbar = packet.hbar
    PR, PI = point.P.real, point.P.imag
    QI = point.Q.imag
    binv = np.linalg.inv(b)
    return complex(
        1j / (2.0 * hbar**2) * (PR @ binv @ PI)
        - (PI @ binv @ PI) / (4.0 * hbar**2)
        - QI @ b @ QI
        - (PR @ QI) / hbar
    )


def bra_norm_exponent(packet: GaussianPacket, point: ComplexPhasePoint) -> complex:
    """Bra-side companion of :func:`ket_norm_exponent`.

    Identical except for the sign of the real-momentum/imaginary-position
    cross term: ``bra - ket = (2/hbar) P_real . Q_imag``.
    """
    b = packet.b
    hbar = packet.hbar
    PR, PI = point.P.real, point.P.imag
    QI = point.Q.imag
    binv = np.linalg.inv(b)
    return complex(
        1j / (2.0 * hbar**2) * (PR @ binv @ PI)
        - (PI @ binv @ PI) / (4.0 * hbar**2)
        - QI @ b @ QI
        + (PR @ QI) / hbar
    )


def residuals(
    alpha: GaussianPacket,
    beta: GaussianPacket,
    point0: ComplexPhasePoint,
    point_t: ComplexPhasePoint,
) -> ResidualPair:
    """Saddle-condition residuals of a candidate trajectory's endpoints.

    The initial point is tested against the ket packet ``alpha`` and the
    final point against the bra packet ``beta``; note the conjugated sign
    of the momentum term on the bra side:

        initial = 2 b_a (Q0 - q_a) + (i/hbar)(P0 - p_a)
        final   = 2 b_b (Qt - q_b) - (i/hbar)(Pt - p_b)
    """
    c_init = 2.0 * (alpha.b @ (point0.Q - alpha.center_q)) + (
        1j / alpha.hbar
    ) * (point0.P - alpha.center_p)
    c_fin = 2.0 * (beta.b @ (point_t.Q - beta.center_q)) - (
        1j / beta.hbar
    ) * (point_t.P - beta.center_p)
    return ResidualPair(c_init, c_fin)


def gaussian_overlap(alpha: GaussianPacket, beta: GaussianPacket) -> complex:
    """Closed-form overlap <beta|alpha> of two real-center packets.

    Both packets must share hbar and dimension.  Reduces to 1 for
    identical packets; magnitude is bounded by 1 (Cauchy-Schwarz).
    """
    if alpha.dim != beta.dim:
        raise ValueError("dimension mismatch")
    if alpha.hbar != beta.hbar:
        raise ValueError("hbar mismatch")
    hbar = alpha.hbar
    A = alpha.b + beta.b
    Bv = (
        2.0 * (alpha.b @ alpha.center_q)
        + 2.0 * (beta.b @ beta.center_q)
        + 1j / hbar * (alpha.center_p - beta.center_p)
    )
    C = (
        -alpha.center_q @ alpha.b @ alpha.center_q
        - beta.center_q @ beta.b @ beta.center_q
        - 1j / hbar * (alpha.center_p @ alpha.center_q - beta.center_p @ beta.center_q)
    )
    Ainv = np.linalg.inv(A)
    d = alpha.dim
    gauss = (np.pi**d / np.linalg.det(A)) ** 0.5 * np.exp(Bv @ Ainv @ Bv / 4.0 + C)
    return complex(alpha.norm_constant() * beta.norm_constant() * gauss)
