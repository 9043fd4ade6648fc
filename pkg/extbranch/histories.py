"""
Ranked ordered histories.

An ordered history of size n is a full binary plane tree with n leaves whose
n-1 internal nodes carry the ranks 1..n-1, decreasing from the root (rank
n-1) toward the leaves. The tree is stored as two rank-indexed child arrays;
a child entry is either the rank of an internal node or ``LEAF``.

The length of an external branch is the rank of the leaf's parent, so the
external branch profile is the decreasing list of ranks that have at least
one leaf child.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, List, Optional, Tuple

from .config import get_settings
from .errors import EnumerationBoundError, InvalidHistoryError, SupportError
from .seeding import SeedLike, make_rng

logger = logging.getLogger(__name__)

# Child marker for a leaf; ranks start at 1 so 0 is never a node
LEAF = 0


@dataclass(frozen=True)
class OrderedHistory:
    """
    Ranked ordered history stored as rank-indexed child arrays.

    ``left[r - 1]`` and ``right[r - 1]`` are the children of the node of rank
    ``r``: another rank, or ``LEAF``.
    """
    n: int
    left: Tuple[int, ...]
    right: Tuple[int, ...]

    def __post_init__(self):
        self.validate()

    @property
    def root(self) -> int:
        return self.n - 1

    def left_child(self, rank: int) -> int:
        return self.left[rank - 1]

    def right_child(self, rank: int) -> int:
        return self.right[rank - 1]

    def children(self, rank: int) -> Tuple[int, int]:
        return self.left[rank - 1], self.right[rank - 1]

    def leaf_children(self, rank: int) -> int:
        """Number of leaves (0, 1 or 2) directly below ``rank``."""
        return (self.left[rank - 1] == LEAF) + (self.right[rank - 1] == LEAF)

    def subtree_sizes(self) -> List[int]:
        """Leaf counts of every internal subtree, indexed by rank (slot 0 unused)."""
        sizes = [1] * self.n
        # Children always have smaller ranks, so ascending order is a post-order
        for rank in range(1, self.n):
            a, b = self.children(rank)
            sizes[rank] = (sizes[a] if a else 1) + (sizes[b] if b else 1)
        return sizes

    def validate(self) -> None:
        """Check leaf/node counts, rank bijectivity and monotone ranks."""
        n = self.n
        if n < 2:
            raise InvalidHistoryError(f'history needs at least 2 leaves, got n={n}')
        if len(self.left) != n - 1 or len(self.right) != n - 1:
            raise InvalidHistoryError(
                f'expected {n - 1} internal nodes, got {len(self.left)}/{len(self.right)}'
            )

        seen_as_child = [False] * n
        leaves = 0
        for rank in range(1, n):
            for child in self.children(rank):
                if child == LEAF:
                    leaves += 1
                    continue
                if not 1 <= child < rank:
                    raise InvalidHistoryError(
                        f'node {rank} has child {child}; ranks must decrease toward leaves'
                    )
                if seen_as_child[child]:
                    raise InvalidHistoryError(f'node {child} has two parents')
                seen_as_child[child] = True

        if leaves != n:
            raise InvalidHistoryError(f'expected {n} leaves, found {leaves}')
        orphans = [r for r in range(1, n - 1) if not seen_as_child[r]]
        if orphans:
            raise InvalidHistoryError(f'nodes without parent: {orphans}')


@dataclass(frozen=True)
class BranchLengthProfile:
    """Distinct external branch lengths, strictly decreasing."""
    lengths: Tuple[int, ...]

    def __post_init__(self):
        if not self.lengths:
            raise InvalidHistoryError('profile is empty')
        if any(a <= b for a, b in zip(self.lengths, self.lengths[1:])):
            raise InvalidHistoryError(f'profile not strictly decreasing: {self.lengths}')
        if self.lengths[-1] < 1:
            raise InvalidHistoryError(f'lengths must be positive: {self.lengths}')

    def __len__(self) -> int:
        return len(self.lengths)

    def __iter__(self):
        return iter(self.lengths)

    def __getitem__(self, index):
        return self.lengths[index]

    def kth(self, k: int) -> Optional[int]:
        """The k-th largest length (1-based), or None when it does not exist."""
        if k < 1:
            raise SupportError(f'k must be >= 1, got {k}')
        return self.lengths[k - 1] if k <= len(self.lengths) else None


# =============================================================================
# STATISTICS
# =============================================================================

def external_branch_profile(t: OrderedHistory) -> BranchLengthProfile:
    """Ranks of parents of leaves, largest first."""
    return BranchLengthProfile(
        tuple(r for r in range(t.n - 1, 0, -1) if t.leaf_children(r))
    )


def cherry_count(t: OrderedHistory) -> int:
    """Number of internal nodes whose children are both leaves."""
    return sum(1 for r in range(1, t.n) if t.leaf_children(r) == 2)


def yule_probability(t: OrderedHistory) -> Fraction:
    """Yule probability 2^(n-1-c(t)) / (n-1)! of the un-ordered history of ``t``."""
    return Fraction(2 ** (t.n - 1 - cherry_count(t)), factorial(t.n - 1))


def canonical_form(t: OrderedHistory) -> str:
    """
    Orientation-free encoding of the ranked history.

    At each node the two children are sorted by (subtree size, encoding), so
    two ordered histories get the same string exactly when they are plane
    embeddings of the same history.
    """
    sizes = t.subtree_sizes()
    codes = [''] * t.n
    for rank in range(1, t.n):
        parts = sorted(
            ((sizes[c], codes[c]) if c else (1, '') for c in t.children(rank))
        )
        codes[rank] = f'({parts[0][1]},{parts[1][1]}){rank}'
    return codes[t.root]


# =============================================================================
# SERIALIZATION
# =============================================================================

def to_newick(t: OrderedHistory) -> str:
    """
    Newick-like text with anonymous leaves and ranks as internal labels.

    Grammar::

        tree := node ";"
        node := leaf | "(" node "," node ")" rank
        leaf := ""            (empty)
        rank := [0-9]+

    The cherry-only history of size 2 is ``(,)1;``.
    """
    codes = [''] * t.n
    for rank in range(1, t.n):
        a, b = t.children(rank)
        codes[rank] = f'({codes[a] if a else ""},{codes[b] if b else ""}){rank}'
    return codes[t.root] + ';'


def from_newick(text: str) -> OrderedHistory:
    """Parse the output of :func:`to_newick` back into a validated history."""
    body = text.strip()
    if not body.endswith(';'):
        raise InvalidHistoryError("newick text must end with ';'")
    body = body[:-1]

    links: dict = {}
    stack: List[List[int]] = []
    expect_node = True
    root: Optional[int] = None
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == '(':
            if not expect_node:
                raise InvalidHistoryError(f'unexpected "(" at offset {i}')
            stack.append([])
            i += 1
        elif ch == ',':
            if not stack:
                raise InvalidHistoryError(f'unexpected "," at offset {i}')
            if expect_node:
                stack[-1].append(LEAF)
            expect_node = True
            i += 1
        elif ch == ')':
            if not stack:
                raise InvalidHistoryError(f'unbalanced ")" at offset {i}')
            if expect_node:
                stack[-1].append(LEAF)
            j = i + 1
            while j < len(body) and body[j].isdigit():
                j += 1
            if j == i + 1:
                raise InvalidHistoryError(f'missing rank after ")" at offset {i}')
            rank = int(body[i + 1:j])
            kids = stack.pop()
            if len(kids) != 2:
                raise InvalidHistoryError(f'node {rank} has {len(kids)} children, expected 2')
            if rank in links:
                raise InvalidHistoryError(f'rank {rank} used twice')
            links[rank] = (kids[0], kids[1])
            if stack:
                stack[-1].append(rank)
            elif root is None:
                root = rank
            else:
                raise InvalidHistoryError('text holds more than one tree')
            expect_node = False
            i = j
        else:
            raise InvalidHistoryError(f'unexpected character {ch!r} at offset {i}')

    if stack or root is None:
        raise InvalidHistoryError('unbalanced parentheses')
    n = len(links) + 1
    if sorted(links) != list(range(1, n)):
        raise InvalidHistoryError(f'ranks must be exactly 1..{n - 1}')
    return OrderedHistory(
        n=n,
        left=tuple(links[r][0] for r in range(1, n)),
        right=tuple(links[r][1] for r in range(1, n)),
    )


# =============================================================================
# SAMPLERS AND ENUMERATION
# =============================================================================

def sample_uniform(n: int, seed: SeedLike) -> OrderedHistory:
    """
    Uniform ordered history of size n.

    Draws a uniform permutation of 1..n-1 and maps it through the
    permutation bijection, so every one of the (n-1)! histories is equally
    likely. Deterministic for a given seed.
    """
    from .permutations import Permutation, permutation_to_tree

    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    rng = make_rng(seed)
    values = rng.permutation(n - 1) + 1
    return permutation_to_tree(Permutation(tuple(values.tolist())))


def sample_yule_growth(n: int, seed: SeedLike) -> OrderedHistory:
    """
    Ordered history grown top-down by lineage splitting.

    At step i = 1..n-1 one of the i pending lineages is chosen uniformly and
    split into an ordered pair; the split gets rank n-i. Each sequence of
    choices yields a distinct ordered history, so the result is uniform.
    """
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    rng = make_rng(seed)
    left = [LEAF] * (n - 1)
    right = [LEAF] * (n - 1)
    # Pending lineages as (parent rank, side); the first entry is the root slot
    pending: List[Tuple[int, int]] = [(0, 0)]
    for i in range(1, n):
        j = int(rng.integers(i))
        parent, side = pending[j]
        rank = n - i
        if parent:
            (left if side == 0 else right)[parent - 1] = rank
        pending[j] = (rank, 0)
        pending.append((rank, 1))
    return OrderedHistory(n=n, left=tuple(left), right=tuple(right))


def enumerate_ordered(n: int, bound: Optional[int] = None) -> Iterator[OrderedHistory]:
    """Yield all (n-1)! ordered histories of size n, one per permutation."""
    from .permutations import Permutation, permutation_to_tree

    if bound is None:
        bound = get_settings().enumeration_bound
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    if n > bound:
        raise EnumerationBoundError(
            f'n={n} exceeds the enumeration bound {bound} ({factorial(n - 1)} histories)'
        )
    logger.info('enumerating %d ordered histories of size %d', factorial(n - 1), n)
    for values in itertools.permutations(range(1, n)):
        yield permutation_to_tree(Permutation(values))
