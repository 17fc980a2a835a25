"""Quantum control for a two-sensor, three-motor vehicle, plus its classical twin.

The five-qubit circuit copies the sensor bits onto two ancilla wires, flips
the wheel qubits through a controlled/anticontrolled pair of two-target
Toffolis, and raises the flight qubit with an anticontrolled Toffoli when
both sensors fire. Measuring q2, q3, q4 yields the motor command (left
wheel, right wheel, propeller). On sensor basis states the outcome
distribution is a delta; ``drive`` enforces that, so any synthesis or
simulator regression surfaces as a hard error at this boundary.

Sensor encoding: bit 1 means light falls on the sensor. Motor encoding:
bit 1 means the motor runs. The ancillas are deliberately left entangled
with the inputs; nothing downstream measures them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .circuit import Circuit, ccx, ccxx, cx, lower
from .qsim import OutcomeDistribution, new_basis_state, outcome_distribution, run_circuit

#: A measured outcome must carry at least this much probability to count as
#: deterministic.
DELTA_ATOL = 1e-9

BRAIN_KINDS = ("quantum", "quantum_lowered", "classical")


class NondeterministicOutcomeError(RuntimeError):
    """The measured distribution was not a delta; the control circuit is broken."""


@dataclass(frozen=True)
class SensorInput:
    """The two light-sensor bits (s1 = left side, s2 = right side)."""

    s1: int
    s2: int

    def __post_init__(self) -> None:
        if self.s1 not in (0, 1) or self.s2 not in (0, 1):
            raise ValueError(f"sensor values must be bits, got ({self.s1}, {self.s2})")


@dataclass(frozen=True)
class MotorOutput:
    """The three motor bits: left wheel, right wheel, propeller."""

    m1: int
    m2: int
    m3: int

    def __post_init__(self) -> None:
        if any(m not in (0, 1) for m in (self.m1, self.m2, self.m3)):
            raise ValueError(f"motor values must be bits, got ({self.m1}, {self.m2}, {self.m3})")
        if self.m3 == 1 and (self.m1 or self.m2):
            raise ValueError("flight motor excludes wheel motors")

    @property
    def bits(self) -> tuple[int, int, int]:
        return (self.m1, self.m2, self.m3)


@dataclass(frozen=True)
class RobotLayout:
    """Fixed wire assignment of the five-qubit control circuit."""

    ancillas: tuple[int, int] = (0, 1)
    wheels: tuple[int, int] = (2, 3)
    flight: int = 4

    @property
    def measured(self) -> tuple[int, int, int]:
        return (*self.wheels, self.flight)


LAYOUT = RobotLayout()

_TRUTH_TABLE: dict[tuple[int, int], tuple[int, int, int]] = {
    (0, 0): (1, 1, 0),
    (0, 1): (0, 1, 0),
    (1, 0): (1, 0, 0),
    (1, 1): (0, 0, 1),
}

BEHAVIOR_LABELS: dict[tuple[int, int, int], str] = {
    (1, 1, 0): "Moves forward",
    (0, 1, 0): "Takes a left turn",
    (1, 0, 0): "Takes a right turn",
    (0, 0, 1): "Takes off from the ground",
}


def build_robot_circuit() -> Circuit:
    """The five-qubit control circuit.

    Two CNOTs copy the sensor qubits onto the ancillas, a positively
    controlled two-target Toffoli and its anticontrolled partner rewrite the
    wheel qubits, and an anticontrolled Toffoli on the wheel qubits raises
    the flight qubit exactly when both wheels end up off.
    """
    ops = (
        cx(2, 0),
        cx(3, 1),
        ccxx(0, 1, 2, 3),
        ccxx(0, 1, 2, 3, values=(0, 0)),
        ccx(2, 3, 4, values=(0, 0)),
    )
    return Circuit(5, ops, name="robot")


@lru_cache(maxsize=None)
def _circuit(lowered: bool) -> Circuit:
    circuit = build_robot_circuit()
    return lower(circuit) if lowered else circuit


def measure_distribution(sensors: SensorInput, lowered: bool = False) -> OutcomeDistribution:
    """Motor-qubit outcome distribution for one sensor input."""
    state = new_basis_state(5, f"00{sensors.s1}{sensors.s2}0")
    return outcome_distribution(run_circuit(_circuit(lowered), state), LAYOUT.measured)


def drive(sensors: SensorInput, lowered: bool = False) -> MotorOutput:
    """Run the control circuit on |0 0 s1 s2 0> and read the motor bits.

    Raises NondeterministicOutcomeError if the measured distribution is not a
    delta (probability >= 1 - DELTA_ATOL on a single outcome).
    """
    dist = measure_distribution(sensors, lowered)
    outcome, p = max(dist.probs.items(), key=lambda item: item[1])
    if p < 1.0 - DELTA_ATOL:
        raise NondeterministicOutcomeError(
            f"input ({sensors.s1}, {sensors.s2}) gave best outcome {outcome!r} "
            f"with probability {p}, expected a delta"
        )
    return MotorOutput(int(outcome[0]), int(outcome[1]), int(outcome[2]))


def classical_drive(sensors: SensorInput) -> MotorOutput:
    """Direct table lookup of the vehicle behavior; oracle for the circuit."""
    return MotorOutput(*_TRUTH_TABLE[(sensors.s1, sensors.s2)])


def _drive_lowered(sensors: SensorInput) -> MotorOutput:
    return drive(sensors, lowered=True)


_BRAINS: dict[str, Callable[[SensorInput], MotorOutput]] = {
    "quantum": drive,
    "quantum_lowered": _drive_lowered,
    "classical": classical_drive,
}


def brain_function(kind: str = "quantum") -> Callable[[SensorInput], MotorOutput]:
    """Resolve a brain kind name to its drive callable."""
    try:
        return _BRAINS[kind]
    except KeyError:
        raise ValueError(f"unknown brain kind {kind!r}; expected one of {BRAIN_KINDS}") from None


def control_table(kind: str = "quantum") -> dict[SensorInput, MotorOutput]:
    """Tabulate the chosen brain over all four sensor inputs.

    The quantum kinds run the circuit once per input, determinism check
    included, so a broken synthesis pass fails here before any lookup.
    """
    law = brain_function(kind)
    return {
        sensors: law(sensors)
        for sensors in (SensorInput(a, b) for a in (0, 1) for b in (0, 1))
    }


def behavior_label(motors: MotorOutput) -> str:
    """Human-readable behavior for one of the four table rows."""
    try:
        return BEHAVIOR_LABELS[motors.bits]
    except KeyError:
        raise ValueError(f"motor output {motors.bits} is not a known behavior") from None
