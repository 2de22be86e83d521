"""Two- and three-qubit initial states and projective post-selections.

Basis convention used throughout the package: each qubit is expanded in
(|1>, |0>), the sigma_z eigenstates with eigenvalues +1 and -1, so
sigma_z = diag(+1, -1).  Composite systems use the corresponding tensor
ordering, e.g. the two-qubit product basis is [|11>, |10>, |01>, |00>].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

#: Eigenvalues below -PSD_TOL mark a non-physical state; boundary states
#: (pure Bell points, rank-deficient corners) pass with tiny negative noise.
PSD_TOL = 1e-12


class InvalidStateError(ValueError):
    """Raised when a state fails its physicality constraints."""


@dataclass(frozen=True)
class BellDiagonalState:
    """Correlation triple (c1, c2, c3) of rho = (I + sum_j c_j sigma_j x sigma_j)/4."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            value = getattr(self, name)
            if not np.isfinite(value) or abs(value) > 1.0:
                raise InvalidStateError(f"{name}={value} outside [-1, 1]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}

    @classmethod
    def from_dict(cls, data: dict) -> "BellDiagonalState":
        return cls(float(data["c1"]), float(data["c2"]), float(data["c3"]))


@dataclass(frozen=True)
class BDValidity:
    """Physicality verdict for a Bell-diagonal triple."""

    valid: bool
    eigenvalues: tuple[float, float, float, float]
    min_eigenvalue: float


@dataclass(frozen=True)
class PostSelection:
    """Projective post-selection cos(theta/2)|1> + sin(theta/2) e^{i phi}|0>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi + 1e-12):
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not (0.0 <= self.phi < 2.0 * np.pi + 1e-12):
            raise ValueError(f"phi={self.phi} outside [0, 2*pi)")

    def to_dict(self) -> dict:
        return {"theta": self.theta, "phi": self.phi}

    @classmethod
    def from_dict(cls, data: dict) -> "PostSelection":
        return cls(float(data["theta"]), float(data.get("phi", 0.0)))


@dataclass(frozen=True)
class ThreeQubitPure:
    """Pure three-qubit state; amplitudes ordered by the (|1>, |0>) basis.

    Qubit order is (a, b, e): a is the target coupled to the meter, b and e
    are the control qubits.  Index 0 holds |111> and index 7 holds |000>;
    use ``basis_index`` to address individual kets.
    """

    amplitudes: tuple
    tag: str = "custom"

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex)
        if vec.shape != (8,):
            raise InvalidStateError("three-qubit state needs 8 amplitudes")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > 1e-12:
            raise InvalidStateError(f"state norm {norm} differs from 1 by more than 1e-12")
        object.__setattr__(self, "amplitudes", tuple(complex(x) for x in vec))

    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)


def basis_index(*bits: int) -> int:
    """Flat index of |x1 x2 ... xn> in the (|1>, |0>) tensor ordering."""
    index = 0
    for bit in bits:
        index = 2 * index + (1 - bit)
    return index


def bd_eigenvalues(state: BellDiagonalState) -> tuple[float, float, float, float]:
    """Spectrum of the Bell-diagonal density matrix, one eigenvalue per Bell state."""
    c1, c2, c3 = state.as_tuple()
    return (
        (1.0 - c1 - c2 - c3) / 4.0,
        (1.0 - c1 + c2 + c3) / 4.0,
        (1.0 + c1 - c2 + c3) / 4.0,
        (1.0 + c1 + c2 - c3) / 4.0,
    )


def validate_bd(state: BellDiagonalState, tol: float = PSD_TOL) -> BDValidity:
    """Accept exactly the triples inside the physical tetrahedron (up to tol)."""
    lam = bd_eigenvalues(state)
    lam_min = min(lam)
    return BDValidity(valid=lam_min >= -tol, eigenvalues=lam, min_eigenvalue=lam_min)


def werner(c: float) -> BellDiagonalState:
    """Werner state (1-c) I/4 + c |Psi-><Psi-|, i.e. the triple (-c, -c, -c)."""
    if not 0.0 <= c <= 1.0:
        raise InvalidStateError(f"Werner parameter c={c} outside [0, 1]")
    return BellDiagonalState(-c, -c, -c)


def bell_phi_plus() -> BellDiagonalState:
    """The Bell state (|11> + |00>)/sqrt(2) as the triple (1, -1, 1)."""
    return BellDiagonalState(1.0, -1.0, 1.0)


def bd_density_matrix(state: BellDiagonalState) -> np.ndarray:
    """4x4 density matrix (I + sum_j c_j sigma_j x sigma_j)/4 in the product basis."""
    verdict = validate_bd(state)
    if not verdict.valid:
        raise InvalidStateError(
            f"non-physical Bell-diagonal triple {state.as_tuple()}: "
            f"min eigenvalue {verdict.min_eigenvalue}"
        )
    rho = np.kron(IDENTITY_2, IDENTITY_2)
    for c, sigma in ((state.c1, SIGMA_1), (state.c2, SIGMA_2), (state.c3, SIGMA_3)):
        rho = rho + c * np.kron(sigma, sigma)
    return rho / 4.0


def postselection_vector(ps: PostSelection) -> np.ndarray:
    """Amplitudes (cos(theta/2), sin(theta/2) e^{i phi}) in the (|1>, |0>) basis."""
    return np.array(
        [np.cos(ps.theta / 2.0), np.sin(ps.theta / 2.0) * np.exp(1j * ps.phi)],
        dtype=complex,
    )


def plus_zero_state() -> np.ndarray:
    """Uncorrelated pure state (|1>_a + |0>_a)/sqrt(2) x |0>_b as a 4-vector."""
    vec = np.zeros(4, dtype=complex)
    vec[basis_index(1, 0)] = 1.0 / np.sqrt(2.0)
    vec[basis_index(0, 0)] = 1.0 / np.sqrt(2.0)
    return vec


def ghz() -> ThreeQubitPure:
    """(|000> + |111>)/sqrt(2)."""
    vec = np.zeros(8, dtype=complex)
    vec[basis_index(0, 0, 0)] = 1.0 / np.sqrt(2.0)
    vec[basis_index(1, 1, 1)] = 1.0 / np.sqrt(2.0)
    return ThreeQubitPure(tuple(vec), tag="GHZ")


def w_state() -> ThreeQubitPure:
    """(|100> + |010> + |001>)/sqrt(3)."""
    vec = np.zeros(8, dtype=complex)
    for bits in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        vec[basis_index(*bits)] = 1.0 / np.sqrt(3.0)
    return ThreeQubitPure(tuple(vec), tag="W")


def partial_trace_qubit(rho: np.ndarray, traced: int) -> np.ndarray:
    """Trace one qubit out of a two-qubit density matrix (traced = 0 or 1)."""
    reshaped = rho.reshape(2, 2, 2, 2)
    if traced == 0:
        return np.einsum("ijik->jk", reshaped)
    if traced == 1:
        return np.einsum("jiki->jk", reshaped)
    raise ValueError("traced must be 0 or 1")
