"""
Deterministic replicate execution.

Exports:
    ReplicateRunner: thread-pool sweep with index-ordered results
    block_sizes: split a replicate total into RNG blocks
"""

from .runner import ReplicateRunner, block_sizes

__all__ = ["ReplicateRunner", "block_sizes"]
