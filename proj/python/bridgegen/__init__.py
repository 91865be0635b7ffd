"""Frontend IR to MLIR-style IR translation, with a reference interpreter."""

from ._core import (
    BridgegenError,
    PipelineError,
    einsum,
    einsum_module,
    generate,
    lower,
    run,
    verify,
)

__all__ = [
    "BridgegenError",
    "PipelineError",
    "einsum",
    "einsum_module",
    "generate",
    "lower",
    "run",
    "verify",
]
