"""Exact statevector simulation for small registers (dense, double precision).

Bit-order convention, used by every module in this package: the ket string
"q0 q1 ... q(n-1)" is read left to right with q0 as the most significant bit
of the basis index, so ``new_basis_state(5, "00110")`` puts the amplitude at
index 0b00110 = 6. All operations are pure: they return fresh values and
never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, CircuitOp, GateKind, UnsupportedGateError

#: Tolerance for unitarity and normalization checks; double precision only
#: ever has to absorb rounding here.
ATOL = 1e-9

#: circuit_unitary guard: 2^6 x 2^6 is the largest matrix worth materializing.
MAX_UNITARY_QUBITS = 6

_SQRT2_INV = 1.0 / np.sqrt(2.0)
_GATE_1Q = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
}


@dataclass(frozen=True, eq=False)
class StateVector:
    """2^n complex amplitudes over the computational basis."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(f"expected {2**self.n_qubits} amplitudes, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amps", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True, eq=False)
class GateMatrix:
    """A k-qubit unitary; construction validates U†U = I within ATOL."""

    k: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"gate arity must be >= 1, got {self.k}")
        entries = np.asarray(self.entries, dtype=complex)
        dim = 2**self.k
        if entries.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ValueError("gate entries must be finite")
        defect = np.abs(entries.conj().T @ entries - np.eye(dim)).max()
        if defect > ATOL:
            raise ValueError(f"matrix is not unitary (U†U deviates from I by {defect:.3e})")
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Born-rule probabilities over an ordered list of measured qubits.

    Bitstring keys follow the measured_qubits order: the leftmost character
    is the first listed qubit. Every outcome appears, including zeros.
    """

    measured_qubits: tuple[int, ...]
    probs: dict[str, float]

    def __post_init__(self) -> None:
        if any(p < -1e-12 for p in self.probs.values()):
            raise ValueError("probabilities must be nonnegative")
        total = sum(self.probs.values())
        if abs(total - 1.0) > ATOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")


def new_basis_state(n_qubits: int, bits: str) -> StateVector:
    """Computational basis state |bits>, q0 being the leftmost character."""
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    if len(bits) != n_qubits:
        raise ValueError(f"bit string {bits!r} does not match n_qubits={n_qubits}")
    if any(ch not in "01" for ch in bits):
        raise ValueError(f"bit string must contain only 0/1, got {bits!r}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(n_qubits, amps)


def apply_gate(state: StateVector, gate: GateMatrix, targets: tuple[int, ...] | list[int]) -> StateVector:
    """Apply a k-qubit gate to the listed qubits (identity elsewhere).

    targets[0] is the most significant qubit of the gate's own index space.
    """
    targets = tuple(targets)
    n = state.n_qubits
    if len(set(targets)) != len(targets):
        raise ValueError(f"repeated target qubit in {targets}")
    if any(q < 0 or q >= n for q in targets):
        raise ValueError(f"target qubits {targets} out of range for n_qubits={n}")
    if gate.k != len(targets):
        raise ValueError(f"gate acts on {gate.k} qubits but {len(targets)} targets given")

    k = gate.k
    psi = np.moveaxis(state.amps.reshape((2,) * n), targets, range(k))
    out = (gate.entries @ psi.reshape(2**k, -1)).reshape((2,) * n)
    out = np.moveaxis(out, range(k), targets).reshape(-1)
    assert abs(np.linalg.norm(out) - np.linalg.norm(state.amps)) <= ATOL, "statevector norm drifted"
    return StateVector(n, out)


def _base_matrix(kind: GateKind) -> np.ndarray:
    if kind in _GATE_1Q:
        return _GATE_1Q[kind]
    if kind in (GateKind.CX, GateKind.CCX):
        return _GATE_1Q[GateKind.X]
    if kind is GateKind.CCXX:
        return np.kron(_GATE_1Q[GateKind.X], _GATE_1Q[GateKind.X])
    raise UnsupportedGateError(f"unknown gate kind {kind!r}")


@lru_cache(maxsize=None)
def _op_gate(op: CircuitOp) -> tuple[GateMatrix, tuple[int, ...]]:
    """Expand an IR op into a dense unitary over its control+target wires.

    Controls occupy the most significant positions of the expanded matrix, in
    op order; the op fires only on the block where every control qubit reads
    its ControlSpec value, so anticontrols need no special casing downstream.
    """
    base = _base_matrix(op.kind)
    if not op.controls:
        return GateMatrix(len(op.targets), base), op.targets
    dim_t = base.shape[0]
    dim = (2 ** len(op.controls)) * dim_t
    mat = np.eye(dim, dtype=complex)
    block = 0
    for c in op.controls:
        block = (block << 1) | c.value
    lo = block * dim_t
    mat[lo : lo + dim_t, lo : lo + dim_t] = base
    return GateMatrix(len(op.controls) + len(op.targets), mat), op.qubits


def run_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    """Left-to-right fold of apply_gate over the circuit's ops."""
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(
            f"circuit has {circuit.n_qubits} qubits but state has {state.n_qubits}"
        )
    for op in circuit.ops:
        gate, wires = _op_gate(op)
        state = apply_gate(state, gate, wires)
    return state


def outcome_distribution(state: StateVector, measured: tuple[int, ...] | list[int]) -> OutcomeDistribution:
    """Marginal Born-rule distribution over the listed qubits.

    Unmeasured qubits are summed out; bitstring keys follow the given order.
    """
    measured = tuple(measured)
    n = state.n_qubits
    if not measured:
        raise ValueError("measured qubit list must not be empty")
    if len(set(measured)) != len(measured):
        raise ValueError(f"repeated qubit in measured list {measured}")
    if any(q < 0 or q >= n for q in measured):
        raise ValueError(f"measured qubits {measured} out of range for n_qubits={n}")

    p = np.abs(state.amps.reshape((2,) * n)) ** 2
    others = tuple(i for i in range(n) if i not in measured)
    marg = p.sum(axis=others) if others else p
    in_sorted = sorted(measured)
    marg = np.transpose(marg, [in_sorted.index(q) for q in measured]).reshape(-1)
    k = len(measured)
    probs = {format(i, f"0{k}b"): float(marg[i]) for i in range(2**k)}
    return OutcomeDistribution(measured, probs)


def circuit_unitary(circuit: Circuit) -> GateMatrix:
    """Full circuit unitary, built by running every basis state as a column.

    Intended as a verification oracle for synthesis passes; capped at
    MAX_UNITARY_QUBITS qubits.
    """
    n = circuit.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ValueError(f"circuit_unitary supports at most {MAX_UNITARY_QUBITS} qubits, got {n}")
    dim = 2**n
    mat = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        mat[:, j] = run_circuit(circuit, new_basis_state(n, format(j, f"0{n}b"))).amps
    return GateMatrix(n, mat)


def equal_up_to_global_phase(a: GateMatrix | np.ndarray, b: GateMatrix | np.ndarray, atol: float = ATOL) -> bool:
    """Elementwise matrix equality after removing a global phase.

    The phase reference is the first entry of largest magnitude in ``a``;
    both matrices are rotated so that entry is real and positive, then
    compared entry by entry.
    """
    ma = np.asarray(a.entries if isinstance(a, GateMatrix) else a, dtype=complex)
    mb = np.asarray(b.entries if isinstance(b, GateMatrix) else b, dtype=complex)
    if ma.shape != mb.shape:
        return False
    ref = int(np.argmax(np.abs(ma)))
    za, zb = ma.ravel()[ref], mb.ravel()[ref]
    if abs(za) <= atol or abs(zb) <= atol:
        return False
    na = ma / (za / abs(za))
    nb = mb / (zb / abs(zb))
    return bool(np.abs(na - nb).max() <= atol)
