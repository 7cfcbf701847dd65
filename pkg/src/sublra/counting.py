"""Instrumentation for entry-access and flop accounting.

Sublinear-cost claims are part of this library's contract, so the routines
that read rows/columns of an input matrix or run structured multiplications
thread an optional :class:`OpCounter` through and charge it with the number
of matrix entries read and the number of floating-point multiply-adds spent.
Counts are closed-form charges for the structured operations performed, not
hardware counters.
"""

from dataclasses import dataclass


@dataclass
class OpCounter:
    """Accumulator for matrix-entry reads and arithmetic work."""

    entry_reads: int = 0
    flops: int = 0

    def add_reads(self, count):
        self.entry_reads += int(count)

    def add_flops(self, count):
        self.flops += int(count)

    def merge(self, other):
        self.entry_reads += other.entry_reads
        self.flops += other.flops


def ensure_counter(counter):
    """Return the given counter, or a fresh throwaway one."""
    return counter if counter is not None else OpCounter()
