"""Brute-force verification path for every pointer-mean result.

The oracle never touches the closed-form overlap integrals.  It evaluates the
shifted Gaussian amplitudes phi(p -+ gt) on a momentum grid, reduces the
initial state over the control qubits by explicit linear algebra, and forms

    <p> = sum_ij w_ij Int q psi_i(q) psi_j(q) dq
        / sum_ij w_ij Int   psi_i(q) psi_j(q) dq

by composite-trapezoid quadrature (i, j run over the two target branches).
The cross term pairs bra and ket momenta shifted by -gt and +gt; its
momentum-diagonal contribution is exactly the product of the two shifted
amplitudes at the same node, so no delta-function discretization is needed.
Fixed nodes and fixed summation order keep results bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .meter import MeterProfile, wavefunction
from .multiqubit import ThreeQubitScenario
from .states import (
    BellDiagonalState,
    InvalidStateError,
    PostSelection,
    bd_density_matrix,
    postselection_vector,
)
from .weakvalue import CouplingSchedule, KJIntegrals


class QuadratureError(ArithmeticError):
    """Raised when the quadrature fails its convergence or realness checks."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite-trapezoid grid: half-width in units of sigma, odd node count."""

    half_width: float = 12.0
    nodes: int = 4001

    def __post_init__(self):
        if self.nodes < 101 or self.nodes % 2 == 0:
            raise ValueError(f"nodes={self.nodes} must be odd and >= 101")
        if self.half_width < 8.0:
            raise ValueError(f"half_width={self.half_width} must be >= 8 sigma")

    def grid(self, m: MeterProfile, c: CouplingSchedule) -> np.ndarray:
        # cover both shifted wavepackets at any gt
        span = self.half_width * m.sigma + 2.0 * abs(c.gt)
        return np.linspace(m.p0 - span, m.p0 + span, self.nodes)


def _branch_amplitudes(q: np.ndarray, m: MeterProfile, c: CouplingSchedule):
    """Amplitudes of the sigma_z = +1 / -1 branches: packets moved to p0 -+ gt."""
    return wavefunction(m, q + c.gt), wavefunction(m, q - c.gt)


def oracle_kj(m: MeterProfile, c: CouplingSchedule,
              q: QuadratureSpec = QuadratureSpec()) -> KJIntegrals:
    """Overlap integrals from their defining quadratures, not the closed forms."""
    if c.weak_limit:
        raise ValueError("the oracle needs a finite meter width, not the weak-limit flag")
    grid = q.grid(m, c)
    psi1, psi0 = _branch_amplitudes(grid, m, c)
    k11 = np.trapezoid(grid * psi1 * psi1, grid)
    k00 = np.trapezoid(grid * psi0 * psi0, grid)
    k10 = np.trapezoid(grid * psi1 * psi0, grid)
    j10 = np.trapezoid(psi1 * psi0, grid)
    return KJIntegrals(k11=float(k11), k00=float(k00), k10=float(k10), j10=float(j10))


def _control_weights_two_qubit(state, action) -> np.ndarray:
    """2x2 matrix of scalar weights B_ij = reduction of <i|rho|j>_a over the control."""
    if isinstance(state, BellDiagonalState):
        rho = bd_density_matrix(state)
    else:
        vec = np.asarray(state, dtype=complex)
        if vec.shape != (4,):
            raise InvalidStateError("pure two-qubit state needs 4 amplitudes")
        rho = np.outer(vec, vec.conj())
    weights = np.empty((2, 2), dtype=complex)
    for i in (0, 1):
        for j in (0, 1):
            block = rho[2 * i:2 * i + 2, 2 * j:2 * j + 2]
            if action == "trace":
                weights[i, j] = np.trace(block)
            else:
                vb = postselection_vector(action)
                weights[i, j] = vb.conj() @ block @ vb
    return weights


def _control_weights_three_qubit(scenario: ThreeQubitScenario) -> np.ndarray:
    vec = scenario.initial.vector()
    rho = np.outer(vec, vec.conj())
    weights = np.empty((2, 2), dtype=complex)
    for i in (0, 1):
        for j in (0, 1):
            block = rho[4 * i:4 * i + 4, 4 * j:4 * j + 4].reshape(2, 2, 2, 2)
            action_b, action_e = scenario.controls
            if action_b == "trace":
                op = np.einsum("iajb->ab", block)
            else:
                vb = postselection_vector(action_b)
                op = np.einsum("i,iajb,j->ab", vb.conj(), block, vb)
            if action_e == "trace":
                weights[i, j] = np.trace(op)
            else:
                ve = postselection_vector(action_e)
                weights[i, j] = ve.conj() @ op @ ve
    return weights


def oracle_mean_p(state, ps_a: PostSelection, control_actions, m: MeterProfile,
                  c: CouplingSchedule, q: QuadratureSpec = QuadratureSpec(),
                  check_convergence: bool = False) -> float:
    """Pointer momentum mean by direct quadrature.

    ``state`` is a BellDiagonalState, a pure two-qubit 4-vector, or a full
    ThreeQubitScenario.  For two-qubit inputs ``control_actions`` is a single
    PostSelection or the string "trace"; a ThreeQubitScenario carries its own
    target post-selection and control actions, and the ``ps_a`` /
    ``control_actions`` arguments are ignored.
    """
    if c.weak_limit:
        raise ValueError("the oracle needs a finite meter width, not the weak-limit flag")
    if isinstance(state, ThreeQubitScenario):
        weights = _control_weights_three_qubit(state)
        ps_a = state.ps_a
    else:
        weights = _control_weights_two_qubit(state, control_actions)

    psa = postselection_vector(ps_a)
    grid = q.grid(m, c)
    psi1, psi0 = _branch_amplitudes(grid, m, c)
    branch = (psi1, psi0)  # row/col 0 is the sigma_z = +1 branch

    num = 0.0j
    den = 0.0j
    for i in (0, 1):
        for j in (0, 1):
            w = np.conj(psa[i]) * psa[j] * weights[i, j]
            profile = branch[i] * branch[j]
            den += w * np.trapezoid(profile, grid)
            num += w * np.trapezoid(grid * profile, grid)
    if abs(num.imag) > 1e-12 or abs(den.imag) > 1e-12:
        raise QuadratureError(
            f"assembled traces are not real: Im(num)={num.imag}, Im(den)={den.imag}"
        )
    if abs(den.real) < 1e-300:
        raise QuadratureError("post-selected trace vanishes; mean momentum undefined")
    value = num.real / den.real

    if check_convergence:
        doubled = QuadratureSpec(half_width=q.half_width, nodes=2 * q.nodes - 1)
        refined = oracle_mean_p(state, ps_a, control_actions, m, c, doubled)
        if abs(refined - value) > 1e-8:
            raise QuadratureError(
                f"quadrature not converged: N={q.nodes} vs {doubled.nodes} differ by "
                f"{abs(refined - value):.3e}"
            )
    return float(value)


@dataclass(frozen=True)
class ConvergenceRow:
    nodes: int
    value: float
    change_from_previous: float | None


def convergence_study(state, ps_a: PostSelection, control_actions, m: MeterProfile,
                      c: CouplingSchedule, node_ladder=(1001, 2001, 4001, 8001),
                      half_width: float = 12.0) -> list[ConvergenceRow]:
    """Run the oracle over a node ladder and report successive differences."""
    rows: list[ConvergenceRow] = []
    previous = None
    for nodes in node_ladder:
        value = oracle_mean_p(state, ps_a, control_actions, m, c,
                              QuadratureSpec(half_width=half_width, nodes=nodes))
        change = None if previous is None else abs(value - previous)
        rows.append(ConvergenceRow(nodes=nodes, value=value, change_from_previous=change))
        previous = value
    return rows
