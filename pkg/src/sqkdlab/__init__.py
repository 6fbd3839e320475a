"""Desk-scale lab for an authenticated semi-quantum key distribution protocol.

Simulates honest runs over Bell pairs, reproduces the modification attack
that corrupts the agreed key without tripping the plain check-bit
comparison, and demonstrates that announcing keyed universal-hash digests
of the check bits detects it.
"""

from .adversary import (
    AdversaryStrategy,
    AttackSearchResult,
    intercept_resend_attack,
    modification_attack,
    search_attacks,
)
from .harness import AggregateReport, RunConfig, replay_paper_example, run_batch, run_search
from .hashing import ToeplitzSpec, derive_hash_spec, privacy_amplify, toeplitz_hash
from .protocol import (
    VARIANT_IMPROVED,
    VARIANT_ORIGINAL,
    MasterKeys,
    Partition,
    ProtocolError,
    ProtocolParams,
    SessionOutcome,
    generate_master_keys,
    partition_measurements,
    run_session,
)
from .qsim import (
    MeasurementRecord,
    apply_gate,
    bell_phi_plus,
    measure_z,
    standard_gate,
)

__version__ = "0.1.0"

__all__ = [
    "AdversaryStrategy",
    "AggregateReport",
    "AttackSearchResult",
    "MasterKeys",
    "MeasurementRecord",
    "Partition",
    "ProtocolError",
    "ProtocolParams",
    "RunConfig",
    "SessionOutcome",
    "ToeplitzSpec",
    "VARIANT_IMPROVED",
    "VARIANT_ORIGINAL",
    "apply_gate",
    "bell_phi_plus",
    "derive_hash_spec",
    "generate_master_keys",
    "intercept_resend_attack",
    "measure_z",
    "modification_attack",
    "partition_measurements",
    "privacy_amplify",
    "replay_paper_example",
    "run_batch",
    "run_search",
    "run_session",
    "search_attacks",
    "standard_gate",
    "toeplitz_hash",
]
