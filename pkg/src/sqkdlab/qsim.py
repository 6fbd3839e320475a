"""Exact pure-state simulation of independent Bell pairs.

Every entangled pair lives in its own 4-amplitude complex vector indexed by
the computational basis states (00, 01, 10, 11); the first bit belongs to
Alice's qubit, the second to Bob's.  Pairs never interact, so a run over
many pairs is just a stack of independent 4-vectors; the ``*_batch``
functions operate on an ``(n, 4)`` array at once and are exactly equivalent
to looping the single-pair functions (asserted in the test suite).

Gates are plain 2x2 complex unitaries and measurement follows the Born rule
with explicit collapse.  All arithmetic is double precision with 1e-12
tolerances: the gate set used here only has entries in {0, ±1, ±1/√2}, so
rounding error stays near machine epsilon.  Global phase is never
normalized away; comparisons that need it are made up to phase by callers.
"""

import math
from typing import NamedTuple

import numpy as np

ATOL = 1e-12

ALICE = "A"
BOB = "B"

_SQRT_HALF = 1.0 / math.sqrt(2.0)

# SPIN_FLIP maps |0> -> -|1>, |1> -> |0>; it equals Pauli Y up to a global
# phase and sends |Φ+> to the singlet, whose halves disagree in every basis.
_GATES = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=complex),
    "SPIN_FLIP": np.array([[0, 1], [-1, 0]], dtype=complex),
}

GATE_NAMES = tuple(_GATES)

# Value of the measured qubit in each of the four basis components.
_COMPONENT_BIT = {
    ALICE: np.array([0, 0, 1, 1], dtype=np.uint8),
    BOB: np.array([0, 1, 0, 1], dtype=np.uint8),
}


class MeasurementRecord(NamedTuple):
    outcome: int
    post_state: np.ndarray


def standard_gate(name: str) -> np.ndarray:
    """Return one of the named 2x2 unitaries (I, H, X, Y, Z, SPIN_FLIP)."""
    try:
        return _GATES[name.upper()].copy()
    except KeyError:
        raise ValueError(
            f"unknown gate name {name!r}; expected one of {', '.join(GATE_NAMES)}"
        ) from None


def bell_phi_plus() -> np.ndarray:
    """The maximally entangled pair (|00> + |11>)/√2."""
    return np.array([_SQRT_HALF, 0.0, 0.0, _SQRT_HALF], dtype=complex)


def bell_batch(count: int) -> np.ndarray:
    """``count`` independent (|00> + |11>)/√2 pairs as a (count, 4) array."""
    return np.tile(bell_phi_plus(), (count, 1))


def is_unitary(gate, atol: float = ATOL) -> bool:
    g = np.asarray(gate, dtype=complex)
    if g.shape != (2, 2):
        return False
    return bool(np.all(np.abs(g.conj().T @ g - np.eye(2)) <= atol))


def _require_target(target: str) -> None:
    if target not in (ALICE, BOB):
        raise ValueError(f"qubit selector must be {ALICE!r} or {BOB!r}, got {target!r}")


def _expand(gate: np.ndarray, target: str) -> np.ndarray:
    """Lift a 2x2 gate to the 4-dimensional pair space on the chosen qubit."""
    eye = np.eye(2, dtype=complex)
    return np.kron(gate, eye) if target == ALICE else np.kron(eye, gate)


def apply_gate(state, gate, target: str) -> np.ndarray:
    """Apply a single-qubit unitary to one qubit of a pair state.

    Rejects non-unitary gates; preserves the norm to within 1e-12.
    """
    _require_target(target)
    if not is_unitary(gate):
        raise ValueError("gate is not unitary (within 1e-12)")
    state = np.asarray(state, dtype=complex)
    return _expand(np.asarray(gate, dtype=complex), target) @ state


def apply_gate_batch(states, gate, target: str, where=None) -> np.ndarray:
    """Apply one gate to the same qubit of many independent pairs.

    ``where`` optionally restricts the update to a boolean row mask (used to
    gate per-position on a key bit).  Returns a new (n, 4) array.
    """
    _require_target(target)
    if not is_unitary(gate):
        raise ValueError("gate is not unitary (within 1e-12)")
    states = np.array(states, dtype=complex)
    op_t = _expand(np.asarray(gate, dtype=complex), target).T
    if where is None:
        return states @ op_t
    states[where] = states[where] @ op_t
    return states


def born_probability_zero(state, target: str) -> float:
    """Born-rule probability of outcome 0 on the chosen qubit."""
    _require_target(target)
    weights = np.abs(np.asarray(state)) ** 2
    zero_components = _COMPONENT_BIT[target] == 0
    return float(weights[zero_components].sum())


def _check_normalized(weights_sum: np.ndarray | float) -> None:
    if np.max(np.abs(weights_sum - 1.0)) > 1e-9:
        raise ValueError("state is not normalized")


def measure_z(state, target: str, rng: np.random.Generator) -> MeasurementRecord:
    """Z-measure one qubit: draw the outcome by the Born rule and collapse.

    Deterministic given the rng stream state.  The post state is the
    renormalized projection; components inconsistent with the outcome are
    exactly zero.
    """
    _require_target(target)
    state = np.asarray(state, dtype=complex)
    weights = np.abs(state) ** 2
    _check_normalized(weights.sum())
    p_zero = float(weights[_COMPONENT_BIT[target] == 0].sum())
    outcome = 0 if rng.random() < p_zero else 1
    post = np.where(_COMPONENT_BIT[target] == outcome, state, 0.0)
    norm = np.linalg.norm(post)
    if norm <= ATOL:
        raise RuntimeError("drew a measurement outcome of (numerically) zero probability")
    return MeasurementRecord(outcome, post / norm)


def measure_z_batch(states, target: str, rng: np.random.Generator):
    """Z-measure the chosen qubit of every pair.

    Returns ``(outcomes, collapsed)`` with outcomes uint8 of shape (n,) and
    collapsed states (n, 4).  Consumes exactly n uniform draws, in row
    order, matching n sequential ``measure_z`` calls on the same stream.
    """
    _require_target(target)
    states = np.asarray(states, dtype=complex)
    weights = np.abs(states) ** 2
    _check_normalized(weights.sum(axis=1))
    component_bit = _COMPONENT_BIT[target]
    p_zero = weights[:, component_bit == 0].sum(axis=1)
    outcomes = (rng.random(states.shape[0]) >= p_zero).astype(np.uint8)
    keep = component_bit[None, :] == outcomes[:, None]
    post = np.where(keep, states, 0.0)
    norms = np.linalg.norm(post, axis=1)
    if np.any(norms <= ATOL):
        raise RuntimeError("drew a measurement outcome of (numerically) zero probability")
    return outcomes, post / norms[:, None]
