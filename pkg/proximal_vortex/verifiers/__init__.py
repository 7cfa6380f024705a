"""
Verifiers package initialization. Exposes the workspace and batch verifiers.
"""

from .batch_verifier import BatchVerifier, JobResult
from .workspace_verifier import SUBCOMMANDS, WorkspaceVerifier

__all__ = [
    "WorkspaceVerifier",
    "BatchVerifier",
    "JobResult",
    "SUBCOMMANDS",
]
