"""Closed-form weak-value engine for one target qubit and one control qubit.

The target qubit a couples to the meter through H = g sigma_z x, which
translates the momentum wavepacket by -+ gt on the sigma_z = +-1 branches.
After post-selecting a on a Bloch vector (theta_a, phi_a), every momentum
statistic closes into four Gaussian overlap integrals:

    K11 = p0 - gt      K00 = p0 + gt      K10 = p0 * J10
    J11 = J00 = 1      J10 = exp(-g^2 t^2 / 2 sigma^2)

and the weak value <sigma_z>_W = (p0 - <p>)/gt of the projected-control
configuration is

    (c3 cos(theta_b) + cos(theta_a)) /
    (1 + c3 cos(theta_a) cos(theta_b)
       + J10 sin(theta_a) sin(theta_b) (c1 cos(phi_a) cos(phi_b)
                                        + c2 sin(phi_a) sin(phi_b)))

Denominator zeros are reported as divergence verdicts (carrying the
denominator magnitude and the post-selection probability at that point),
never as exceptions or infinities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .meter import MeterProfile
from .states import (
    SIGMA_1,
    SIGMA_2,
    SIGMA_3,
    BellDiagonalState,
    InvalidStateError,
    PostSelection,
    bd_density_matrix,
    postselection_vector,
    validate_bd,
)

#: Below this denominator magnitude a weak-value quotient is meaningless.
EPS_DEN = 1e-12


@dataclass(frozen=True)
class CouplingSchedule:
    """Accumulated coupling gt >= 0; weak_limit pins J10 = 1 exactly (sigma -> inf)."""

    gt: float = 0.0
    weak_limit: bool = False

    def __post_init__(self):
        if not np.isfinite(self.gt) or self.gt < 0.0:
            raise ValueError(f"gt={self.gt} must be >= 0")


@dataclass(frozen=True)
class KJIntegrals:
    """Gaussian overlap integrals; J11 = J00 = 1 are implicit."""

    k11: float
    k00: float
    k10: float
    j10: float

    j11: float = 1.0
    j00: float = 1.0


def kj_integrals(m: MeterProfile, c: CouplingSchedule) -> KJIntegrals:
    """Closed forms of the overlap integrals for a Gaussian meter."""
    j10 = 1.0 if c.weak_limit else float(np.exp(-(c.gt**2) / (2.0 * m.sigma**2)))
    return KJIntegrals(k11=m.p0 - c.gt, k00=m.p0 + c.gt, k10=m.p0 * j10, j10=j10)


@dataclass(frozen=True)
class WeakValueReport:
    """Weak value, pointer mean, post-selection probability and verdict flags.

    ``mean_p = p0 - gt * weak_value`` holds by construction.  Divergent and
    indeterminate reports carry ``weak_value = mean_p = None`` together with
    the offending denominator.
    """

    weak_value: float | None
    mean_p: float | None
    probability: float
    amplified: bool
    divergent: bool
    denominator: float
    indeterminate: bool = False

    def to_dict(self) -> dict:
        return {
            "weak_value": self.weak_value,
            "mean_p": self.mean_p,
            "probability": self.probability,
            "amplified": self.amplified,
            "divergent": self.divergent,
            "denominator": self.denominator,
            "indeterminate": self.indeterminate,
        }


def _report(numerator: float, denominator: float, probability: float,
            m: MeterProfile, c: CouplingSchedule, eps_den: float) -> WeakValueReport:
    """Assemble a report from the weak-value quotient, handling degenerate points."""
    probability = float(min(max(probability, 0.0), 1.0))
    if abs(denominator) <= eps_den:
        return WeakValueReport(
            weak_value=None,
            mean_p=None,
            probability=probability,
            amplified=abs(numerator) > eps_den,
            divergent=True,
            denominator=float(denominator),
            indeterminate=abs(numerator) <= eps_den,
        )
    wv = float(numerator / denominator)
    return WeakValueReport(
        weak_value=wv,
        mean_p=m.p0 - c.gt * wv,
        probability=probability,
        amplified=abs(wv) > 1.0,
        divergent=False,
        denominator=float(denominator),
    )


def mean_p_traced(theta_a: float, m: MeterProfile, c: CouplingSchedule) -> float:
    """Pointer mean p0 - gt cos(theta_a) when the control qubit is traced out.

    Tracing destroys the target coherence, so |<p> - p0| <= gt always: no
    amplification regardless of the initial correlations.
    """
    return m.p0 - c.gt * np.cos(theta_a)


def _eq_parts(state: BellDiagonalState, ps_a: PostSelection, ps_b: PostSelection,
              j10: float) -> tuple[float, float]:
    num = state.c3 * np.cos(ps_b.theta) + np.cos(ps_a.theta)
    den = (
        1.0
        + state.c3 * np.cos(ps_a.theta) * np.cos(ps_b.theta)
        + j10
        * np.sin(ps_a.theta)
        * np.sin(ps_b.theta)
        * (
            state.c1 * np.cos(ps_a.phi) * np.cos(ps_b.phi)
            + state.c2 * np.sin(ps_a.phi) * np.sin(ps_b.phi)
        )
    )
    return float(num), float(den)


def postselection_probability(state, ps_a: PostSelection, ps_b: PostSelection) -> float:
    """Success probability of the joint post-selection on the initial state.

    ``state`` is either a BellDiagonalState (returns <psi_post| rho |psi_post>)
    or a pure two-qubit 4-vector (returns |<psi| psi_post>|^2).
    """
    post = np.kron(postselection_vector(ps_a), postselection_vector(ps_b))
    if isinstance(state, BellDiagonalState):
        rho = bd_density_matrix(state)
        return float(np.real(post.conj() @ rho @ post))
    vec = np.asarray(state, dtype=complex)
    if vec.shape != (4,):
        raise InvalidStateError("pure two-qubit state needs 4 amplitudes")
    return float(abs(post.conj() @ vec) ** 2)


def weak_value_projected(state: BellDiagonalState, ps_a: PostSelection,
                         ps_b: PostSelection, m: MeterProfile, c: CouplingSchedule,
                         eps_den: float = EPS_DEN) -> WeakValueReport:
    """Weak value of sigma_z on the target with the control projected on ps_b."""
    verdict = validate_bd(state)
    if not verdict.valid:
        raise InvalidStateError(
            f"non-physical Bell-diagonal triple {state.as_tuple()}: "
            f"min eigenvalue {verdict.min_eigenvalue}"
        )
    j10 = kj_integrals(m, c).j10
    num, den = _eq_parts(state, ps_a, ps_b, j10)
    prob = postselection_probability(state, ps_a, ps_b)
    return _report(num, den, prob, m, c, eps_den)


def weak_value_bell(ps_a: PostSelection, ps_b: PostSelection, m: MeterProfile,
                    c: CouplingSchedule, eps_den: float = EPS_DEN) -> WeakValueReport:
    """Bell-state specialization with delta = phi_a + phi_b.

    (cos(theta_b) + cos(theta_a)) /
    (1 + cos(theta_a) cos(theta_b) + J10 sin(theta_a) sin(theta_b) cos(delta))
    """
    j10 = kj_integrals(m, c).j10
    num = np.cos(ps_b.theta) + np.cos(ps_a.theta)
    den = (
        1.0
        + np.cos(ps_a.theta) * np.cos(ps_b.theta)
        + j10 * np.sin(ps_a.theta) * np.sin(ps_b.theta) * np.cos(ps_a.phi + ps_b.phi)
    )
    prob = postselection_probability(BellDiagonalState(1.0, -1.0, 1.0), ps_a, ps_b)
    return _report(float(num), float(den), prob, m, c, eps_den)


def weak_value_uncorrelated(ps_a: PostSelection, m: MeterProfile, c: CouplingSchedule,
                            eps_den: float = EPS_DEN) -> WeakValueReport:
    """Single-qubit weak value for the product state (|1> + |0>)/sqrt(2) x |0>_b.

    cos(theta_a) / (1 + J10 sin(theta_a) cos(phi_a)); the control qubit has no
    influence here, so tracing or projecting it gives the same result.
    """
    j10 = kj_integrals(m, c).j10
    num = np.cos(ps_a.theta)
    den = 1.0 + j10 * np.sin(ps_a.theta) * np.cos(ps_a.phi)
    # probability of the target-qubit post-selection alone on |+>_a
    prob = 0.5 * (1.0 + np.sin(ps_a.theta) * np.cos(ps_a.phi))
    return _report(float(num), float(den), float(prob), m, c, eps_den)


@dataclass(frozen=True)
class ConditionalState:
    """Unnormalized target state <psi_b| rho |psi_b> and its coherence magnitude."""

    matrix: np.ndarray
    off_diagonal: float


def coherence_generated(state: BellDiagonalState, ps_b: PostSelection) -> ConditionalState:
    """Target-qubit conditional state after measuring the control on ps_b.

    A zero off-diagonal element means the control measurement generates no
    coherence in the target, which rules out any weak-value control at that
    post-selection.
    """
    _require_valid(state)
    vec_b = postselection_vector(ps_b)
    bloch = [float(np.real(vec_b.conj() @ sigma @ vec_b)) for sigma in (SIGMA_1, SIGMA_2, SIGMA_3)]
    cond = (
        np.eye(2, dtype=complex)
        + state.c1 * bloch[0] * SIGMA_1
        + state.c2 * bloch[1] * SIGMA_2
        + state.c3 * bloch[2] * SIGMA_3
    ) / 4.0
    return ConditionalState(matrix=cond, off_diagonal=float(abs(cond[0, 1])))


def pointer_shift_real(a: float, m: MeterProfile, c: CouplingSchedule) -> float:
    """Final pointer momentum p0 - gt * A for a real weak value A."""
    return m.p0 - c.gt * a


def pointer_shift_imaginary(b: float, m: MeterProfile, c: CouplingSchedule,
                            x_initial: float = 0.0) -> float:
    """Final pointer position for a purely imaginary weak value iB.

    <X>_f = <X>_i + 2 gt B Var(X)_i with Var(X)_i = 1/(4 sigma^2) for the
    Gaussian meter.
    """
    return x_initial + 2.0 * c.gt * b / (4.0 * m.sigma**2)


@dataclass(frozen=True)
class AAVWeakValue:
    """Generic pre/post-selected weak value and post-selection probability."""

    value: complex | None
    probability: float
    divergent: bool
    overlap: complex


def aav_weak_value(pre: np.ndarray, post: np.ndarray, observable: np.ndarray,
                   eps_den: float = EPS_DEN) -> AAVWeakValue:
    """<post|A|pre> / <post|pre> with the success probability |<post|pre>|^2."""
    pre = np.asarray(pre, dtype=complex)
    post = np.asarray(post, dtype=complex)
    observable = np.asarray(observable, dtype=complex)
    overlap = complex(post.conj() @ pre)
    probability = abs(overlap) ** 2
    if abs(overlap) <= eps_den:
        return AAVWeakValue(value=None, probability=probability, divergent=True, overlap=overlap)
    value = complex(post.conj() @ observable @ pre) / overlap
    return AAVWeakValue(value=value, probability=probability, divergent=False, overlap=overlap)


def weak_value_theta_b_derivative(state: BellDiagonalState, ps_a: PostSelection,
                                  ps_b: PostSelection, m: MeterProfile,
                                  c: CouplingSchedule) -> float:
    """Analytic derivative of the projected weak value with respect to theta_b."""
    _require_valid(state)
    j10 = kj_integrals(m, c).j10
    num, den = _eq_parts(state, ps_a, ps_b, j10)
    if abs(den) <= EPS_DEN:
        raise ZeroDivisionError("weak value diverges at the requested angle")
    phase = state.c1 * np.cos(ps_a.phi) * np.cos(ps_b.phi) + state.c2 * np.sin(ps_a.phi) * np.sin(ps_b.phi)
    dnum = -state.c3 * np.sin(ps_b.theta)
    dden = (
        -state.c3 * np.cos(ps_a.theta) * np.sin(ps_b.theta)
        + j10 * np.sin(ps_a.theta) * np.cos(ps_b.theta) * phase
    )
    return float((dnum * den - num * dden) / den**2)


@dataclass(frozen=True)
class SensitivityReport:
    """Angular sensitivity eta = (WV(theta_b0 + d) - WV(theta_b0)) / WV'(theta_b0)."""

    eta: float | None
    weak_value_reference: float
    weak_value_displaced: float
    derivative: float
    probability: float
    zero_derivative: bool


def sensitivity_eta(state: BellDiagonalState, ps_a: PostSelection, theta_b0: float,
                    phi_b: float, m: MeterProfile, c: CouplingSchedule,
                    delta_theta_b: float, eps_den: float = EPS_DEN) -> SensitivityReport:
    """Estimate of the control-angle displacement recovered from the output shift.

    To first order eta -> delta_theta_b, so a measured weak-value offset maps
    back to the angular displacement of the control post-selection.
    """
    ps_b0 = PostSelection(theta_b0, phi_b)
    ps_b1 = PostSelection(theta_b0 + delta_theta_b, phi_b)
    wv0 = weak_value_projected(state, ps_a, ps_b0, m, c, eps_den)
    wv1 = weak_value_projected(state, ps_a, ps_b1, m, c, eps_den)
    if wv0.divergent or wv1.divergent:
        raise ZeroDivisionError("weak value diverges inside the sensitivity window")
    derivative = weak_value_theta_b_derivative(state, ps_a, ps_b0, m, c)
    if abs(derivative) <= eps_den:
        return SensitivityReport(
            eta=None,
            weak_value_reference=wv0.weak_value,
            weak_value_displaced=wv1.weak_value,
            derivative=derivative,
            probability=wv0.probability,
            zero_derivative=True,
        )
    return SensitivityReport(
        eta=(wv1.weak_value - wv0.weak_value) / derivative,
        weak_value_reference=wv0.weak_value,
        weak_value_displaced=wv1.weak_value,
        derivative=derivative,
        probability=wv0.probability,
        zero_derivative=False,
    )


@dataclass(frozen=True)
class ResolvableAngle:
    """Smallest resolvable control-angle offset under a relative detection limit.

    ``delta_theta_min`` treats the detection limit as relative to the output
    weak value (limit * |WV| / |WV'|); ``delta_theta_min_absolute`` records the
    alternative reading of an absolute output limit (limit / |WV'|).
    """

    delta_theta_min: float | None
    delta_theta_min_absolute: float | None
    weak_value: float
    derivative: float
    probability: float
    zero_derivative: bool


def resolvable_angle(state: BellDiagonalState, ps_a: PostSelection, theta_b0: float,
                     phi_b: float, m: MeterProfile, c: CouplingSchedule,
                     relative_detection_limit: float,
                     eps_den: float = EPS_DEN) -> ResolvableAngle:
    """Angular resolution of the control measurement at a given detection limit."""
    ps_b0 = PostSelection(theta_b0, phi_b)
    wv0 = weak_value_projected(state, ps_a, ps_b0, m, c, eps_den)
    if wv0.divergent:
        raise ZeroDivisionError("weak value diverges at the reference angle")
    derivative = weak_value_theta_b_derivative(state, ps_a, ps_b0, m, c)
    if abs(derivative) <= eps_den:
        return ResolvableAngle(
            delta_theta_min=None,
            delta_theta_min_absolute=None,
            weak_value=wv0.weak_value,
            derivative=derivative,
            probability=wv0.probability,
            zero_derivative=True,
        )
    return ResolvableAngle(
        delta_theta_min=relative_detection_limit * abs(wv0.weak_value) / abs(derivative),
        delta_theta_min_absolute=relative_detection_limit / abs(derivative),
        weak_value=wv0.weak_value,
        derivative=derivative,
        probability=wv0.probability,
        zero_derivative=False,
    )


def asymptotic_weak_value(state: BellDiagonalState, ps_a: PostSelection,
                          ps_b: PostSelection, eps_den: float = EPS_DEN) -> float:
    """Strong-coupling limit (J10 -> 0) where the interference term vanishes.

    Reduces to (c3 cos(theta_b) + cos(theta_a)) / (1 + c3 cos(theta_a) cos(theta_b)),
    which never leaves [-1, 1]: without interference there is no amplification.
    """
    _require_valid(state)
    num, den = _eq_parts(state, ps_a, ps_b, 0.0)
    if abs(den) <= eps_den:
        raise ZeroDivisionError("asymptotic denominator vanishes")
    return num / den


def _threshold_bisect(num: float, den_const: float, den_j_coeff: float,
                      sigma: float, tol: float) -> float | None:
    """Smallest gt > 0 with |num| = |den_const + J10(gt) * den_j_coeff|.

    The denominator is linear in J10 = exp(-gt^2/2 sigma^2), so
    g(gt) = |den(gt)| - |num| changes sign exactly once on (0, 20 sigma];
    plain bisection is globally convergent here.
    """
    def gap(gt: float) -> float:
        j10 = np.exp(-(gt**2) / (2.0 * sigma**2))
        return abs(den_const + j10 * den_j_coeff) - abs(num)

    lo, hi = 0.0, 20.0 * sigma
    if gap(lo) >= 0.0:
        return None  # |WV| <= 1 already at gt = 0
    if gap(hi) < 0.0:
        return None  # amplified even without interference; no finite threshold
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def amplification_threshold_gt(state: BellDiagonalState, ps_a: PostSelection,
                               ps_b: PostSelection, sigma: float,
                               tol: float = 1e-9) -> float | None:
    """Critical coupling gt_c above which |weak value| drops to 1 and below.

    Returns None when the configuration is not amplified at gt = 0.  The
    threshold scales linearly with sigma at fixed angles.
    """
    _require_valid(state)
    num, den_weak = _eq_parts(state, ps_a, ps_b, 1.0)
    _, den_strong = _eq_parts(state, ps_a, ps_b, 0.0)
    return _threshold_bisect(num, den_strong, den_weak - den_strong, sigma, tol)


def amplification_threshold_gt_uncorrelated(ps_a: PostSelection, sigma: float,
                                            tol: float = 1e-9) -> float | None:
    """Single-qubit amplification threshold for the uncorrelated product state."""
    num = float(np.cos(ps_a.theta))
    den_j_coeff = float(np.sin(ps_a.theta) * np.cos(ps_a.phi))
    return _threshold_bisect(num, 1.0, den_j_coeff, sigma, tol)


def amplification_onset_r(state: BellDiagonalState, ps_a: PostSelection,
                          ps_b: PostSelection, gt: float,
                          tol: float = 1e-9) -> float | None:
    """Smallest squeezing r at which |weak value| reaches 1 for a fixed gt.

    Squeezing widens the meter (sigma = e^r/2), restoring the interference
    term; below the returned r the configuration is not amplified.  Returns
    None if even r = 0 is amplified or if no squeezing up to r = 50 suffices.
    """
    _require_valid(state)

    def abs_wv(r: float) -> float:
        sigma = np.exp(r) / 2.0
        j10 = np.exp(-(gt**2) / (2.0 * sigma**2))
        num, den = _eq_parts(state, ps_a, ps_b, j10)
        if abs(den) <= EPS_DEN:
            return np.inf
        return abs(num / den)

    lo, hi = 0.0, 50.0
    if abs_wv(lo) >= 1.0 or abs_wv(hi) < 1.0:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if abs_wv(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _require_valid(state: BellDiagonalState):
    verdict = validate_bd(state)
    if not verdict.valid:
        raise InvalidStateError(
            f"non-physical Bell-diagonal triple {state.as_tuple()}: "
            f"min eigenvalue {verdict.min_eigenvalue}"
        )
