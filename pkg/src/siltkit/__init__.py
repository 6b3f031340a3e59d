"""siltkit: exact silting-object computations in derived categories of quiver algebras."""

from .fields import DEFAULT_PRIME, FieldSpec
from .linalg import Matrix, block, block_diag, hstack, kernel_backend, vstack

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRIME",
    "FieldSpec",
    "Matrix",
    "block",
    "block_diag",
    "hstack",
    "kernel_backend",
    "vstack",
    "__version__",
]
