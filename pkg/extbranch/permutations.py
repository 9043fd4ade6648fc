"""
Bijection between ordered histories of size n and permutations of 1..n-1.

A history maps to the in-order reading of its ranks, pi_t = (pi_L, r(t), pi_R).
The inverse places the maximum at the root and recurses on both sides; the
fast path builds the same tree left to right with a monotone stack.

Under this bijection the external branch lengths of t are exactly the
non-peak entries of pi_t, where an entry is a peak when it sits at an inner
position and exceeds both neighbours.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidPermutationError, SupportError
from .histories import LEAF, BranchLengthProfile, OrderedHistory


@dataclass(frozen=True)
class Permutation:
    """A permutation of 1..m stored in one-line notation."""
    values: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, 'values', values)
        if not values:
            raise InvalidPermutationError('permutation must have at least one entry')
        if sorted(values) != list(range(1, len(values) + 1)):
            raise InvalidPermutationError(f'not a permutation of 1..{len(values)}: {values}')

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, index):
        return self.values[index]


def format_permutation(p: Permutation) -> str:
    """One-line comma-separated text, e.g. ``2,6,4,5,3,1,7``."""
    return ','.join(str(v) for v in p.values)


def parse_permutation(text: str) -> Permutation:
    """Inverse of :func:`format_permutation`."""
    try:
        return Permutation(tuple(int(tok) for tok in text.strip().split(',')))
    except ValueError as e:
        if isinstance(e, InvalidPermutationError):
            raise
        raise InvalidPermutationError(f'cannot parse permutation {text!r}: {e}') from e


# =============================================================================
# BIJECTION
# =============================================================================

def tree_to_permutation(t: OrderedHistory) -> Permutation:
    """In-order reading of the ranks of ``t``."""
    out: List[int] = []
    stack: List[int] = []
    node = t.root
    while stack or node != LEAF:
        while node != LEAF:
            stack.append(node)
            node = t.left_child(node)
        node = stack.pop()
        out.append(node)
        node = t.right_child(node)
    return Permutation(tuple(out))


def permutation_to_tree(p: Permutation) -> OrderedHistory:
    """
    Build the history of ``p`` in one left-to-right pass.

    The stack holds the right spine of the tree built so far (decreasing).
    A new value adopts the last popped smaller value as its left child and
    becomes the right child of whatever remains on top.
    """
    m = len(p)
    left = [LEAF] * m
    right = [LEAF] * m
    stack: List[int] = []
    for v in p.values:
        last = LEAF
        while stack and stack[-1] < v:
            last = stack.pop()
        left[v - 1] = last
        if stack:
            right[stack[-1] - 1] = v
        stack.append(v)
    return OrderedHistory(n=m + 1, left=tuple(left), right=tuple(right))


def permutation_to_tree_reference(p: Permutation) -> OrderedHistory:
    """Maximum-split construction; O(m^2) worst case, kept as a cross-check."""
    values = p.values
    m = len(values)
    left = [LEAF] * m
    right = [LEAF] * m
    # (lo, hi, parent rank, side) segments still to place
    segments = [(0, m, LEAF, 0)]
    while segments:
        lo, hi, parent, side = segments.pop()
        if lo >= hi:
            continue
        i = max(range(lo, hi), key=values.__getitem__)
        node = values[i]
        if parent != LEAF:
            (left if side == 0 else right)[parent - 1] = node
        segments.append((lo, i, node, 0))
        segments.append((i + 1, hi, node, 1))
    return OrderedHistory(n=m + 1, left=tuple(left), right=tuple(right))


# =============================================================================
# PEAK STATISTICS
# =============================================================================

def _is_peak(values: Sequence[int], i: int) -> bool:
    return 0 < i < len(values) - 1 and values[i - 1] < values[i] > values[i + 1]


def peak_values(p: Permutation) -> Tuple[int, ...]:
    """Peak entries in position order."""
    v = p.values
    return tuple(v[i] for i in range(1, len(v) - 1) if _is_peak(v, i))


def non_peak_sorted(values: Sequence[int]) -> List[int]:
    """Non-peak entries of a raw one-line sequence, largest first."""
    last = len(values) - 1
    return sorted(
        (values[i] for i in range(len(values))
         if not (0 < i < last and values[i - 1] < values[i] > values[i + 1])),
        reverse=True,
    )


def non_peak_values(p: Permutation) -> BranchLengthProfile:
    """Non-peak entries, strictly decreasing."""
    return BranchLengthProfile(tuple(non_peak_sorted(p.values)))


def kth_largest_non_peak(p: Permutation, k: int) -> Optional[int]:
    """The k-th largest non-peak entry, or None if there are fewer than k."""
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    non_peaks = non_peak_sorted(p.values)
    return non_peaks[k - 1] if k <= len(non_peaks) else None


def non_peak_array(values: np.ndarray) -> np.ndarray:
    """Vectorized :func:`non_peak_sorted` for a numpy one-line permutation."""
    inner = values[1:-1]
    is_peak = np.zeros(values.shape[0], dtype=bool)
    is_peak[1:-1] = (inner > values[:-2]) & (inner > values[2:])
    return np.sort(values[~is_peak])[::-1]
