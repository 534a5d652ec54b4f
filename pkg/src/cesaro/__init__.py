"""The Cesàro operator: exact matrix identities, summability, spectra and square roots."""

from .numerics import Bracket, ExactComplex, bernoulli, binomial, generalized_binomial
from .matrices import MatrixTruncation, IdentityReport, build, check_identity
from .summability import SummationReport, summarize

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "ExactComplex",
    "bernoulli",
    "binomial",
    "generalized_binomial",
    "MatrixTruncation",
    "IdentityReport",
    "build",
    "check_identity",
    "SummationReport",
    "summarize",
]
