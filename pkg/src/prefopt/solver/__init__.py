from .encoding import FloatGene, IntGene, KeyEncoding, MixedEncoding
from .ga import (
    GaConfig,
    IntergenerationalGA,
    ReferenceSet,
    RefMember,
    RunResult,
    TraceRow,
    prune_noncompetitive,
    solve,
    write_trace_csv,
)

__all__ = [
    "FloatGene", "IntGene", "KeyEncoding", "MixedEncoding",
    "GaConfig", "IntergenerationalGA", "ReferenceSet", "RefMember",
    "RunResult", "TraceRow", "prune_noncompetitive", "solve", "write_trace_csv",
]
