"""Gate IR with control polarities, lowering passes, and OpenQASM 2.0 export.

A circuit is an immutable value: a qubit count plus an ordered tuple of
operations. Controlled kinds (CX, CCX, CCXX) carry explicit control
polarities, so "fire on |0>" anticontrols are first-class in the IR and are
removed only by the lowering pipeline.

``lower`` runs three passes in a fixed order: CCXX ops split into two CCX
ops sharing the controls; negative controls are conjugated away with X
gates (followed by a peephole that cancels X pairs left facing each other
on the same wire); finally each CCX expands into the canonical 15-gate
H/T/Tdg/CX network. The resulting basis is {X, H, S, SDG, T, TDG, CX},
which is exactly what ``export_qasm`` accepts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum


class UnsupportedGateError(ValueError):
    """An operation uses a gate kind the consumer cannot handle."""


class GateKind(Enum):
    """Gate vocabulary; values double as qelib1 mnemonics."""

    X = "x"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    CX = "cx"
    CCX = "ccx"
    CCXX = "ccxx"


#: (controls, targets) carried by each kind.
ARITY: dict[GateKind, tuple[int, int]] = {
    GateKind.X: (0, 1),
    GateKind.H: (0, 1),
    GateKind.S: (0, 1),
    GateKind.SDG: (0, 1),
    GateKind.T: (0, 1),
    GateKind.TDG: (0, 1),
    GateKind.CX: (1, 1),
    GateKind.CCX: (2, 1),
    GateKind.CCXX: (2, 2),
}

#: Kinds allowed in a fully lowered circuit (and in QASM output).
LOWERED_KINDS = frozenset(
    {GateKind.X, GateKind.H, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.CX}
)


@dataclass(frozen=True)
class ControlSpec:
    """A control wire; the gate fires when the qubit reads |value>.

    value=0 is an anticontrol.
    """

    qubit: int
    value: int = 1

    def __post_init__(self) -> None:
        if self.qubit < 0:
            raise ValueError(f"control qubit must be >= 0, got {self.qubit}")
        if self.value not in (0, 1):
            raise ValueError(f"control value must be 0 or 1, got {self.value}")


@dataclass(frozen=True)
class CircuitOp:
    """One gate application: a kind, its controls, and its ordered targets."""

    kind: GateKind
    controls: tuple[ControlSpec, ...] = ()
    targets: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "targets", tuple(self.targets))
        n_ctrl, n_tgt = ARITY[self.kind]
        if len(self.controls) != n_ctrl or len(self.targets) != n_tgt:
            raise ValueError(
                f"{self.kind.value} takes {n_ctrl} controls and {n_tgt} targets, "
                f"got {len(self.controls)} and {len(self.targets)}"
            )
        if any(q < 0 for q in self.targets):
            raise ValueError(f"target qubits must be >= 0, got {self.targets}")
        wires = [c.qubit for c in self.controls] + list(self.targets)
        if len(set(wires)) != len(wires):
            raise ValueError(f"controls and targets must be distinct qubits, got {wires}")

    @property
    def qubits(self) -> tuple[int, ...]:
        """All wires the op touches, controls first."""
        return tuple(c.qubit for c in self.controls) + self.targets


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over a fixed register."""

    n_qubits: int
    ops: tuple[CircuitOp, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for op in self.ops:
            bad = [q for q in op.qubits if q >= self.n_qubits]
            if bad:
                raise ValueError(f"op {op.kind.value} references qubits {bad} >= n_qubits={self.n_qubits}")


def x(qubit: int) -> CircuitOp:
    return CircuitOp(GateKind.X, (), (qubit,))


def h(qubit: int) -> CircuitOp:
    return CircuitOp(GateKind.H, (), (qubit,))


def s(qubit: int) -> CircuitOp:
    return CircuitOp(GateKind.S, (), (qubit,))


def sdg(qubit: int) -> CircuitOp:
    return CircuitOp(GateKind.SDG, (), (qubit,))


def t(qubit: int) -> CircuitOp:
    return CircuitOp(GateKind.T, (), (qubit,))


def tdg(qubit: int) -> CircuitOp:
    return CircuitOp(GateKind.TDG, (), (qubit,))


def cx(control: int, target: int, value: int = 1) -> CircuitOp:
    return CircuitOp(GateKind.CX, (ControlSpec(control, value),), (target,))


def ccx(c1: int, c2: int, target: int, values: tuple[int, int] = (1, 1)) -> CircuitOp:
    controls = (ControlSpec(c1, values[0]), ControlSpec(c2, values[1]))
    return CircuitOp(GateKind.CCX, controls, (target,))


def ccxx(c1: int, c2: int, t1: int, t2: int, values: tuple[int, int] = (1, 1)) -> CircuitOp:
    controls = (ControlSpec(c1, values[0]), ControlSpec(c2, values[1]))
    return CircuitOp(GateKind.CCXX, controls, (t1, t2))


def ccxx_decompose(op: CircuitOp) -> list[CircuitOp]:
    """Split a two-target doubly controlled X into two CCX ops sharing the controls."""
    if op.kind is not GateKind.CCXX:
        raise ValueError(f"expected a ccxx op, got {op.kind.value}")
    t1, t2 = op.targets
    return [
        CircuitOp(GateKind.CCX, op.controls, (t1,)),
        CircuitOp(GateKind.CCX, op.controls, (t2,)),
    ]


def polarity_lower(op: CircuitOp) -> list[CircuitOp]:
    """Replace negative controls by X conjugation, leaving an all-positive op.

    Each anticontrolled wire gets an X before and after the op; ops that are
    already all-positive (or uncontrolled) pass through unchanged.
    """
    negatives = tuple(c.qubit for c in op.controls if c.value == 0)
    if not negatives:
        return [op]
    flips = [x(q) for q in negatives]
    positive = replace(op, controls=tuple(ControlSpec(c.qubit) for c in op.controls))
    return [*flips, positive, *flips]


def ccx_decompose(op: CircuitOp) -> list[CircuitOp]:
    """Expand a positively controlled Toffoli into the canonical 15-gate network.

    The sequence over {H, T, TDG, CX} reproduces the Toffoli unitary exactly,
    with no residual global phase. Negative controls must be removed first
    (see ``polarity_lower``).
    """
    if op.kind is not GateKind.CCX:
        raise ValueError(f"expected a ccx op, got {op.kind.value}")
    if any(c.value != 1 for c in op.controls):
        raise ValueError("ccx_decompose requires positive controls; run polarity_lower first")
    a, b = (c.qubit for c in op.controls)
    tgt = op.targets[0]
    return [
        h(tgt),
        cx(b, tgt),
        tdg(tgt),
        cx(a, tgt),
        t(tgt),
        cx(b, tgt),
        tdg(tgt),
        cx(a, tgt),
        t(b),
        t(tgt),
        h(tgt),
        cx(a, b),
        t(a),
        tdg(b),
        cx(a, b),
    ]


def _cancel_facing_x(ops: list[CircuitOp]) -> list[CircuitOp]:
    """Drop X pairs on the same wire separated only by ops on other wires."""
    out: list[CircuitOp] = []
    for op in ops:
        if op.kind is GateKind.X:
            q = op.targets[0]
            j = len(out) - 1
            while j >= 0 and q not in out[j].qubits:
                j -= 1
            if j >= 0 and out[j].kind is GateKind.X:
                del out[j]
                continue
        out.append(op)
    return out


def lower(circuit: Circuit) -> Circuit:
    """Rewrite a circuit onto the {X, H, S, SDG, T, TDG, CX} basis.

    Pass order is fixed: CCXX -> CCX pairs, then anticontrol removal with
    X-pair cleanup, then CCX -> Clifford+T. The output unitary equals the
    input unitary (no pass here introduces a global phase). Idempotent.
    """
    split: list[CircuitOp] = []
    for op in circuit.ops:
        if op.kind not in ARITY:
            raise UnsupportedGateError(f"unknown gate kind {op.kind!r}")
        split.extend(ccxx_decompose(op) if op.kind is GateKind.CCXX else [op])

    positive: list[CircuitOp] = []
    for op in split:
        positive.extend(polarity_lower(op))
    positive = _cancel_facing_x(positive)

    lowered: list[CircuitOp] = []
    for op in positive:
        lowered.extend(ccx_decompose(op) if op.kind is GateKind.CCX else [op])
    return Circuit(circuit.n_qubits, tuple(lowered), circuit.name)


def export_qasm(circuit: Circuit, measured: tuple[int, ...] | list[int]) -> str:
    """Serialize a lowered circuit as OpenQASM 2.0 text.

    Registers are always named ``q`` and ``c``; the classical register is
    sized to the measured-qubit list and one measure statement is emitted per
    entry, in list order. Output is a deterministic function of the inputs,
    byte for byte. Raises UnsupportedGateError on non-lowered gates.
    """
    measured = tuple(measured)
    for op in circuit.ops:
        if op.kind not in LOWERED_KINDS:
            raise UnsupportedGateError(f"cannot export {op.kind.value}; lower the circuit first")
        if any(c.value != 1 for c in op.controls):
            raise UnsupportedGateError("cannot export anticontrolled ops; lower the circuit first")
    if len(set(measured)) != len(measured):
        raise ValueError(f"measured qubits must be distinct, got {measured}")
    if any(q < 0 or q >= circuit.n_qubits for q in measured):
        raise ValueError(f"measured qubits {measured} out of range for n_qubits={circuit.n_qubits}")

    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.n_qubits}];"]
    if measured:
        lines.append(f"creg c[{len(measured)}];")
    for op in circuit.ops:
        wires = ",".join(f"q[{q}]" for q in op.qubits)
        lines.append(f"{op.kind.value} {wires};")
    for i, q in enumerate(measured):
        lines.append(f"measure q[{q}] -> c[{i}];")
    return "\n".join(lines) + "\n"
