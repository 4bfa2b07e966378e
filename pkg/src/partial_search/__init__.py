"""Completing isomorphisms and Hamiltonian cycles from partial-answer oracles."""

from __future__ import annotations

from .errors import (
    ContractionError,
    InstanceTooLarge,
    InternalInvariantFailure,
    NoWitness,
    NotIsomorphic,
    OracleViolation,
    ParseError,
    PlantedViolation,
    ReductionError,
)
from .graphs import (
    HamiltonianCycle,
    MultiGraph,
    SimpleGraph,
    contract_edge,
    validate_hamiltonian_cycle,
    validate_isomorphism,
)
from .hc_engine import LeftRightContext, complete_hamiltonian_cycle, contract_and_update
from .hc_oracles import HcOraclePolicy, enumerate_consistent_cycles
from .iso_engine import GadgetGraph, complete_isomorphism, resolve_answer
from .iso_oracles import IsoOraclePolicy, enumerate_isomorphisms, find_example1_fixture

__all__ = [
    "ContractionError", "GadgetGraph", "HamiltonianCycle", "HcOraclePolicy", "InstanceTooLarge",
    "InternalInvariantFailure", "IsoOraclePolicy", "LeftRightContext", "MultiGraph", "NoWitness",
    "NotIsomorphic", "OracleViolation", "ParseError", "PlantedViolation", "ReductionError", "SimpleGraph",
    "complete_hamiltonian_cycle", "complete_isomorphism", "contract_and_update", "contract_edge",
    "enumerate_consistent_cycles", "enumerate_isomorphisms", "find_example1_fixture", "resolve_answer",
    "validate_hamiltonian_cycle", "validate_isomorphism",
]
