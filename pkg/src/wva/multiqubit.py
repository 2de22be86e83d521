"""Three-qubit extension: GHZ/W initial states with two control qubits.

Each control qubit is either projected on its own post-selection or traced
out.  The momentum statistics still close into the same K/J overlap
integrals: writing c_ij for the post-selected branch coefficients
(i, j label the sigma_z = +1/-1 branches of the target),

    <p>  = (c11 K11 + c00 K00 + 2 Re(c10) K10)
         / (c11 J11 + c00 J00 + 2 Re(c10) J10)

so the weak value reduces to (c11 - c00) / (c11 + c00 + 2 Re(c10) J10).
The numerator follows from the denominator by the K <-> J substitution;
the quadrature oracle cross-checks this construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .meter import MeterProfile
from .states import PostSelection, ThreeQubitPure, ghz, postselection_vector, w_state
from .weakvalue import EPS_DEN, CouplingSchedule, WeakValueReport, kj_integrals

TRACE = "trace"
ControlAction = Union[PostSelection, Literal["trace"]]


@dataclass(frozen=True)
class ThreeQubitScenario:
    """Initial three-qubit state, target post-selection and per-control actions."""

    initial: ThreeQubitPure
    ps_a: PostSelection
    controls: tuple[ControlAction, ControlAction]

    def to_dict(self) -> dict:
        actions = []
        for action in self.controls:
            if action == TRACE:
                actions.append({"action": "trace"})
            else:
                actions.append({"action": "project", "theta": action.theta, "phi": action.phi})
        return {"initial": self.initial.tag, "ps_a": self.ps_a.to_dict(), "controls": actions}

    @classmethod
    def from_dict(cls, data: dict) -> "ThreeQubitScenario":
        tag = data["initial"]
        if tag == "GHZ":
            initial = ghz()
        elif tag == "W":
            initial = w_state()
        else:
            raise ValueError(f"unknown initial state tag {tag!r}")
        actions = []
        for entry in data["controls"]:
            if entry["action"] == "trace":
                actions.append(TRACE)
            elif entry["action"] == "project":
                actions.append(PostSelection(float(entry["theta"]), float(entry.get("phi", 0.0))))
            else:
                raise ValueError(f"unknown control action {entry['action']!r}")
        if len(actions) != 2:
            raise ValueError("a three-qubit scenario needs exactly two control actions")
        return cls(initial=initial, ps_a=PostSelection.from_dict(data["ps_a"]),
                   controls=(actions[0], actions[1]))


def _apply_controls(block: np.ndarray, controls: tuple[ControlAction, ControlAction]) -> complex:
    """Reduce a 4x4 operator on (b, e) to a scalar via projection/partial trace."""
    op = block.reshape(2, 2, 2, 2)  # (b, e, b', e')
    action_b, action_e = controls
    if action_b == TRACE:
        op = np.einsum("iajb->ab", op)
    else:
        vb = postselection_vector(action_b)
        op = np.einsum("i,iajb,j->ab", vb.conj(), op, vb)
    if action_e == TRACE:
        return complex(np.trace(op))
    ve = postselection_vector(action_e)
    return complex(ve.conj() @ op @ ve)


def _branch_coefficients(scenario: ThreeQubitScenario) -> tuple[float, float, complex]:
    """Post-selected branch weights (c11, c00, c10) of the target qubit."""
    vec = scenario.initial.vector()
    rho = np.outer(vec, vec.conj())
    psa = postselection_vector(scenario.ps_a)
    amp = {1: psa[0], 0: psa[1]}

    def coeff(i: int, j: int) -> complex:
        block = rho[(1 - i) * 4:(1 - i) * 4 + 4, (1 - j) * 4:(1 - j) * 4 + 4]
        return np.conj(amp[i]) * amp[j] * _apply_controls(block, scenario.controls)

    c11 = coeff(1, 1)
    c00 = coeff(0, 0)
    if abs(c11.imag) > 1e-12 or abs(c00.imag) > 1e-12:
        raise ArithmeticError("diagonal branch coefficients acquired an imaginary part")
    return c11.real, c00.real, coeff(1, 0)


def three_qubit_weak_value(scenario: ThreeQubitScenario, m: MeterProfile,
                           c: CouplingSchedule, eps_den: float = EPS_DEN) -> WeakValueReport:
    """Weak value of sigma_z on the target for an arbitrary control configuration."""
    c11, c00, c10 = _branch_coefficients(scenario)
    j10 = kj_integrals(m, c).j10
    num = c11 - c00
    den = c11 + c00 + 2.0 * c10.real * j10
    probability = float(min(max(c11 + c00 + 2.0 * c10.real, 0.0), 1.0))
    if abs(den) <= eps_den:
        return WeakValueReport(
            weak_value=None,
            mean_p=None,
            probability=probability,
            amplified=abs(num) > eps_den,
            divergent=True,
            denominator=float(den),
            indeterminate=abs(num) <= eps_den,
        )
    wv = float(num / den)
    return WeakValueReport(
        weak_value=wv,
        mean_p=m.p0 - c.gt * wv,
        probability=probability,
        amplified=abs(wv) > 1.0,
        divergent=False,
        denominator=float(den),
    )


def ghz_projected_denominator(theta_a: float, theta_b: float, theta_e: float,
                              phi_abe: float, m: MeterProfile, c: CouplingSchedule) -> float:
    """Post-selected trace for GHZ with both controls projected (phi_abe = phi_a+phi_b+phi_e)."""
    j10 = kj_integrals(m, c).j10
    ca, cb, ce = np.cos(theta_a / 2) ** 2, np.cos(theta_b / 2) ** 2, np.cos(theta_e / 2) ** 2
    sa, sb, se = np.sin(theta_a / 2) ** 2, np.sin(theta_b / 2) ** 2, np.sin(theta_e / 2) ** 2
    cross = np.sin(theta_a) * np.sin(theta_b) * np.sin(theta_e) * np.cos(phi_abe)
    return float((8.0 * ca * cb * ce + 8.0 * sa * sb * se + 2.0 * cross * j10) / 16.0)


def ghz_weak_value(ps_a: PostSelection, ps_b: PostSelection, ps_e: PostSelection,
                   m: MeterProfile, c: CouplingSchedule,
                   eps_den: float = EPS_DEN) -> WeakValueReport:
    """GHZ weak value with both control qubits projected."""
    scenario = ThreeQubitScenario(initial=ghz(), ps_a=ps_a, controls=(ps_b, ps_e))
    return three_qubit_weak_value(scenario, m, c, eps_den)


def w_trace_project_denominator(theta_a: float, theta_e: float, phi_a: float,
                                phi_e: float, m: MeterProfile, c: CouplingSchedule) -> float:
    """Post-selected trace for W with control b traced and control e projected."""
    j10 = kj_integrals(m, c).j10
    ca2 = np.cos(theta_a / 2) ** 2
    sa2 = np.sin(theta_a / 2) ** 2
    se2 = np.sin(theta_e / 2) ** 2
    cross = np.sin(theta_a) * np.sin(theta_e) * np.cos(phi_a - phi_e)
    return float((2.0 * ca2 * se2 + 2.0 * sa2 + cross * j10) / 6.0)


def w_trace_project_weak_value(ps_a: PostSelection, ps_e: PostSelection,
                               m: MeterProfile, c: CouplingSchedule,
                               eps_den: float = EPS_DEN) -> WeakValueReport:
    """W-state weak value with control b traced out and control e projected."""
    scenario = ThreeQubitScenario(initial=w_state(), ps_a=ps_a, controls=(TRACE, ps_e))
    return three_qubit_weak_value(scenario, m, c, eps_den)


def w_weak_value_closed(theta_a, theta_e, delta_phi, j10):
    """Closed form of the trace-b/project-e W weak value; broadcasts over arrays.

    Degenerate 0/0 corners evaluate to nan.
    """
    ca2 = np.cos(np.asarray(theta_a) / 2) ** 2
    sa2 = np.sin(np.asarray(theta_a) / 2) ** 2
    se2 = np.sin(np.asarray(theta_e) / 2) ** 2
    num = 2.0 * ca2 * se2 - 2.0 * sa2
    den = 2.0 * ca2 * se2 + 2.0 * sa2 + j10 * np.sin(theta_a) * np.sin(theta_e) * np.cos(delta_phi)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(den) > EPS_DEN, num / den, np.nan)


@dataclass(frozen=True)
class SupSearchResult:
    """Grid supremum of |weak value| plus the coordinate-refined local value."""

    grid_value: float
    grid_theta_a: float
    grid_theta_e: float
    grid_delta_phi: float
    refined_value: float
    refined_theta_a: float
    refined_theta_e: float
    refined_delta_phi: float
    converged: bool


def w_sup_search(j10: float = 1.0, grid_shape: tuple[int, int, int] = (181, 181, 72),
                 refine_tol: float = 1e-6, max_sweeps: int = 60) -> SupSearchResult:
    """Supremum of |WV| for trace-b/project-e over the (theta_a, theta_e, dphi) grid.

    The coarse scan is deterministic (first maximum wins) and is followed by
    coordinate refinement with shrinking brackets.  The objective grows
    without bound toward the theta_a ~ theta_e -> 0 corner (at vanishing
    probability), so refinement is capped at ``max_sweeps`` sweeps;
    ``converged`` records whether the parameter tolerance was reached first.
    """
    n_a, n_e, n_p = grid_shape
    thetas_a = np.linspace(0.0, np.pi, n_a)
    thetas_e = np.linspace(0.0, np.pi, n_e)
    dphis = np.linspace(0.0, 2.0 * np.pi, n_p, endpoint=False)
    grid = np.abs(w_weak_value_closed(
        thetas_a[:, None, None], thetas_e[None, :, None], dphis[None, None, :], j10))
    grid = np.where(np.isfinite(grid), grid, -np.inf)
    flat_index = int(np.argmax(grid))
    ia, ie, ip = np.unravel_index(flat_index, grid.shape)
    grid_value = float(grid[ia, ie, ip])
    point = np.array([thetas_a[ia], thetas_e[ie], dphis[ip]])

    def objective(x: np.ndarray) -> float:
        value = w_weak_value_closed(x[0], x[1], x[2], j10)
        return abs(float(value)) if np.isfinite(value) else -np.inf

    bounds = [(0.0, np.pi), (0.0, np.pi), (0.0, 2.0 * np.pi)]
    steps = np.array([np.pi / (n_a - 1), np.pi / (n_e - 1), 2.0 * np.pi / n_p])
    best = objective(point)
    converged = False
    for _ in range(max_sweeps):
        moved = 0.0
        for axis in range(3):
            step = steps[axis]
            while step > refine_tol / 4.0:
                for direction in (1.0, -1.0):
                    candidate = point.copy()
                    candidate[axis] = np.clip(point[axis] + direction * step,
                                              bounds[axis][0], bounds[axis][1])
                    value = objective(candidate)
                    if value > best:
                        moved = max(moved, abs(candidate[axis] - point[axis]))
                        point, best = candidate, value
                        break
                else:
                    step /= 2.0
        if moved < refine_tol:
            converged = True
            break
    return SupSearchResult(
        grid_value=grid_value,
        grid_theta_a=float(thetas_a[ia]),
        grid_theta_e=float(thetas_e[ie]),
        grid_delta_phi=float(dphis[ip]),
        refined_value=float(best),
        refined_theta_a=float(point[0]),
        refined_theta_e=float(point[1]),
        refined_delta_phi=float(point[2]),
        converged=converged,
    )


@dataclass(frozen=True)
class EfficiencyComparison:
    """Matched-amplification comparison between a two- and a three-qubit scheme."""

    two_qubit: WeakValueReport
    three_qubit: WeakValueReport
    probability_ratio: float


def efficiency_comparison(two_qubit_report: WeakValueReport,
                          three_qubit_report: WeakValueReport) -> EfficiencyComparison:
    """Pair up (weak value, probability) for two schemes and report the probability ratio."""
    if two_qubit_report.probability > 0.0:
        ratio = three_qubit_report.probability / two_qubit_report.probability
    else:
        ratio = np.inf
    return EfficiencyComparison(
        two_qubit=two_qubit_report,
        three_qubit=three_qubit_report,
        probability_ratio=float(ratio),
    )
