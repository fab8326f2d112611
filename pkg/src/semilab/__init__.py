"""Identities in semigroups: substitution proofs, counting refutations and
free models."""

from .corpus import UnknownFixture, corpus_names, corpus_verify
from .freemodel import (
    EnumerationLimits,
    FreeModel,
    GroupReport,
    NotConverged,
    TripletSignature,
    analyze,
    enumerate_model,
    export_cayley,
    normal_form,
    signature,
)
from .invariants import (
    DeltaPolynomial,
    InvariantCertificate,
    NotInvariant,
    Unknown,
    certify_mod,
    count_delta_forms,
    forward_delta_polynomial,
    refute,
)
from .proofs import (
    Exhausted,
    InvalidProof,
    Proof,
    ProofProfile,
    Proved,
    Refuted,
    SearchLimits,
    profile,
    search,
    validate,
)
from .rewrite import Identity, RewriteStep, StepBounds, apply_step, find_step, parse_identity, successors
from .words import ParseError, WordError, forward_pairs, letter_counts, parse_word, show

__version__ = "0.1.0"
