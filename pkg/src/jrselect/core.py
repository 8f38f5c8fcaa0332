"""Data model for approval-based top-k selection.

Users and items are 0-indexed everywhere, including file formats. An
approval profile is stored redundantly as one bitmask per user (bit i set
iff the user approves item i) and one bitmask per item (bit u set iff user
u approves it), so that the set algebra used by verification and the
greedy solver reduces to integer AND / popcount. Profiles, partitions and
instances are immutable after construction.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    CommitteeSizeError,
    EmptyGroupError,
    ItemIndexError,
    MissingScoresError,
    NegativeScoreError,
    PartitionError,
    ProbabilityError,
    ValidationError,
)

Score = Union[int, "Fraction", float]  # noqa: F821  (Fraction imported by users)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_frozenset(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def item_mask(items: Iterable[int], m: int) -> int:
    """Pack item indices into a bitmask, validating 0 <= i < m."""
    mask = 0
    for i in items:
        i = _as_index(i, m, ItemIndexError, "item")
        mask |= 1 << i
    return mask


def user_mask(users: Iterable[int], n: int) -> int:
    mask = 0
    for u in users:
        u = _as_index(u, n, ValidationError, "user")
        mask |= 1 << u
    return mask


def _as_index(value, bound, exc, kind):
    # operator.index admits any integer-like (numpy ints included), not bool.
    if isinstance(value, bool):
        raise exc(f"{kind} index must be an int, got {value!r}")
    try:
        value = operator.index(value)
    except TypeError:
        raise exc(f"{kind} index must be an int, got {value!r}")
    if not 0 <= value < bound:
        raise exc(f"{kind} index {value} out of range [0, {bound})")
    return value


class ApprovalProfile:
    """An immutable n-user, m-item approval profile.

    Parameters
    ----------
    approvals : sequence of iterables of int
        ``approvals[u]`` holds the items user u approves. Empty sets are
        allowed; duplicates within one user's set are collapsed.
    m : int
        Number of items. Must be at least 1 even if nobody approves
        anything.
    """

    __slots__ = ("n", "m", "approval_masks", "approver_masks", "_sets")

    def __init__(self, approvals: Sequence[Iterable[int]], m: int):
        masks = []
        if m < 1:
            raise ValidationError("a profile needs at least one item")
        for items in approvals:
            masks.append(item_mask(items, m))
        self._finish(masks, m)

    @classmethod
    def from_masks(cls, masks: Sequence[int], m: int) -> "ApprovalProfile":
        """Build a profile directly from per-user item bitmasks."""
        if m < 1:
            raise ValidationError("a profile needs at least one item")
        full = (1 << m) - 1
        out = []
        for mask in masks:
            if isinstance(mask, bool):
                raise ValidationError(f"approval mask must be an int, got {mask!r}")
            try:
                mask = operator.index(mask)
            except TypeError:
                raise ValidationError(f"approval mask must be an int, got {mask!r}")
            if not 0 <= mask <= full:
                raise ItemIndexError(f"approval mask {mask:#x} has bits outside [0, {m})")
            out.append(mask)
        obj = cls.__new__(cls)
        obj._finish(out, m)
        return obj

    def _finish(self, masks: list[int], m: int) -> None:
        if not masks:
            raise ValidationError("a profile needs at least one user")
        approvers = [0] * m
        for u, mask in enumerate(masks):
            bit = 1 << u
            for i in iter_bits(mask):
                approvers[i] |= bit
        object.__setattr__(self, "n", len(masks))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "approval_masks", tuple(masks))
        object.__setattr__(self, "approver_masks", tuple(approvers))
        object.__setattr__(self, "_sets", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("ApprovalProfile is immutable")

    @property
    def approval_sets(self) -> tuple[frozenset[int], ...]:
        """Per-user approval sets as frozensets (computed once, cached)."""
        if self._sets is None:
            sets = tuple(bits_to_frozenset(mask) for mask in self.approval_masks)
            object.__setattr__(self, "_sets", sets)
        return self._sets

    def approves(self, user: int, item: int) -> bool:
        user = _as_index(user, self.n, ValidationError, "user")
        item = _as_index(item, self.m, ItemIndexError, "item")
        return bool(self.approval_masks[user] >> item & 1)

    def approvers(self, item: int) -> frozenset[int]:
        item = _as_index(item, self.m, ItemIndexError, "item")
        return bits_to_frozenset(self.approver_masks[item])

    def approval_count(self, item: int) -> int:
        """Number of users approving ``item``."""
        item = _as_index(item, self.m, ItemIndexError, "item")
        return self.approver_masks[item].bit_count()

    def __eq__(self, other):
        if not isinstance(other, ApprovalProfile):
            return NotImplemented
        return self.m == other.m and self.approval_masks == other.approval_masks

    def __hash__(self):
        return hash((self.m, self.approval_masks))

    def __repr__(self):
        return f"ApprovalProfile(n={self.n}, m={self.m})"


class GroupPartition:
    """A partition of the n users into gamma non-empty blocks.

    The canonical form is an assignment vector mapping each user to a
    block label in ``range(gamma)``; every label must be used at least
    once.
    """

    __slots__ = ("gamma", "assignment", "block_masks", "block_sizes")

    def __init__(self, assignment: Sequence[int], gamma: int | None = None):
        labels = []
        for g in assignment:
            if isinstance(g, bool):
                raise PartitionError(f"block label must be a non-negative int, got {g!r}")
            try:
                g = operator.index(g)
            except TypeError:
                raise PartitionError(f"block label must be a non-negative int, got {g!r}")
            if g < 0:
                raise PartitionError(f"block label must be a non-negative int, got {g!r}")
            labels.append(g)
        if not labels:
            raise PartitionError("a partition needs at least one user")
        inferred = max(labels) + 1
        if gamma is None:
            gamma = inferred
        elif gamma < inferred:
            raise PartitionError(f"label {inferred - 1} exceeds gamma={gamma}")
        masks = [0] * gamma
        for u, g in enumerate(labels):
            masks[g] |= 1 << u
        for g, mask in enumerate(masks):
            if mask == 0:
                raise PartitionError(f"block {g} is empty")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "assignment", tuple(labels))
        object.__setattr__(self, "block_masks", tuple(masks))
        object.__setattr__(self, "block_sizes", tuple(mask.bit_count() for mask in masks))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[int]], n: int) -> "GroupPartition":
        """Build a partition from explicit user blocks covering range(n)."""
        assignment = [-1] * n
        for g, block in enumerate(blocks):
            empty = True
            for u in block:
                empty = False
                u = _as_index(u, n, PartitionError, "user")
                if assignment[u] != -1:
                    raise PartitionError(f"user {u} appears in two blocks")
                assignment[u] = g
            if empty:
                raise EmptyGroupError(f"block {g} is empty")
        missing = [u for u, g in enumerate(assignment) if g == -1]
        if missing:
            raise PartitionError(f"users {missing} belong to no block")
        return cls(assignment)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("GroupPartition is immutable")

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(iter_bits(mask)) for mask in self.block_masks)

    def block_of(self, user: int) -> int:
        user = _as_index(user, self.n, ValidationError, "user")
        return self.assignment[user]

    def __eq__(self, other):
        if not isinstance(other, GroupPartition):
            return NotImplemented
        return self.assignment == other.assignment

    def __hash__(self):
        return hash(self.assignment)

    def __repr__(self):
        return f"GroupPartition(gamma={self.gamma}, n={self.n})"


class Instance:
    """A selection instance: profile, committee size k, optional groups
    and optional external item scores.

    Invariants enforced here: ``1 <= k <= m``; the partition, when
    present, covers exactly the profile's users; external scores, when
    present, assign a finite non-negative value to every item.
    """

    __slots__ = ("profile", "k", "groups", "external_scores")

    def __init__(
        self,
        profile: ApprovalProfile,
        k: int,
        groups: GroupPartition | None = None,
        external_scores: Sequence[float] | Mapping[int, float] | None = None,
    ):
        if isinstance(k, bool):
            raise CommitteeSizeError(f"k must be an int, got {k!r}")
        try:
            k = operator.index(k)
        except TypeError:
            raise CommitteeSizeError(f"k must be an int, got {k!r}")
        if not 1 <= k <= profile.m:
            raise CommitteeSizeError(f"k={k} violates 1 <= k <= m={profile.m}")
        if groups is not None:
            if not isinstance(groups, GroupPartition):
                raise PartitionError(f"groups must be a GroupPartition, got {type(groups).__name__}")
            if groups.n != profile.n:
                raise PartitionError(
                    f"partition covers {groups.n} users but the profile has {profile.n}"
                )
        scores = None
        if external_scores is not None:
            scores = _normalize_scores(external_scores, profile.m)
        object.__setattr__(self, "profile", profile)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "external_scores", scores)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Instance is immutable")

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def m(self) -> int:
        return self.profile.m

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.profile == other.profile
            and self.k == other.k
            and self.groups == other.groups
            and self.external_scores == other.external_scores
        )

    def __hash__(self):
        return hash((self.profile, self.k, self.groups, self.external_scores))

    def __repr__(self):
        parts = [f"n={self.n}", f"m={self.m}", f"k={self.k}"]
        if self.groups is not None:
            parts.append(f"gamma={self.groups.gamma}")
        if self.external_scores is not None:
            parts.append("external_scores")
        return f"Instance({', '.join(parts)})"


def _normalize_scores(scores, m: int) -> tuple[float, ...]:
    if isinstance(scores, Mapping):
        missing = [i for i in range(m) if i not in scores]
        if missing:
            raise MissingScoresError(f"external scores missing for items {missing}")
        extra = [i for i in scores if not (isinstance(i, int) and 0 <= i < m)]
        if extra:
            raise ItemIndexError(f"external scores given for unknown items {extra}")
        values = [scores[i] for i in range(m)]
    else:
        values = list(scores)
        if len(values) != m:
            raise MissingScoresError(f"expected {m} external scores, got {len(values)}")
    out = []
    for i, v in enumerate(values):
        v = float(v)
        if v != v:  # NaN
            raise ValidationError(f"external score for item {i} is NaN")
        if v < 0:
            raise NegativeScoreError(f"external score for item {i} is negative: {v}")
        out.append(v)
    return tuple(out)


def build_instance(
    n: int,
    m: int,
    k: int,
    approvals: Sequence[Iterable[int]],
    groups=None,
    external_scores=None,
) -> Instance:
    """Validate raw inputs and assemble an :class:`Instance`.

    ``groups`` may be a :class:`GroupPartition`, an assignment vector of
    length n, or a sequence of user blocks.
    """
    approvals = list(approvals)
    if len(approvals) != n:
        raise ValidationError(f"expected {n} approval sets, got {len(approvals)}")
    profile = ApprovalProfile(approvals, m)
    partition = None
    if groups is not None:
        if isinstance(groups, GroupPartition):
            partition = groups
        else:
            groups = list(groups)
            if len(groups) == n and all(isinstance(g, int) and not isinstance(g, bool) for g in groups):
                partition = GroupPartition(groups)
            else:
                partition = GroupPartition.from_blocks(groups, n)
    return Instance(profile, k, partition, external_scores)


def threshold_probabilistic_approvals(
    probabilities: Sequence[Sequence[float]], cutoff: float = 0.5
) -> list[set[int]]:
    """Turn a dense probability matrix into approval sets.

    A user approves item i iff ``probabilities[u][i] > cutoff`` (strictly:
    a value equal to the cutoff is not an approval). All entries and the
    cutoff must lie in [0, 1].
    """
    cutoff = float(cutoff)
    if not 0.0 <= cutoff <= 1.0:
        raise ProbabilityError(f"cutoff {cutoff} outside [0, 1]")
    rows = [list(row) for row in probabilities]
    if not rows:
        raise ValidationError("a profile needs at least one user")
    width = len(rows[0])
    out: list[set[int]] = []
    for u, row in enumerate(rows):
        if len(row) != width:
            raise ValidationError(f"row {u} has {len(row)} entries, expected {width}")
        approved = set()
        for i, p in enumerate(row):
            p = float(p)
            if not 0.0 <= p <= 1.0:
                raise ProbabilityError(f"probability {p} for user {u}, item {i} outside [0, 1]")
            if p > cutoff:
                approved.add(i)
        out.append(approved)
    return out


@dataclass(frozen=True)
class Committee:
    """A selected item set together with its score under one rule.

    ``satisfies_jr`` is tri-state: True / False when verified, None when
    the producer did not check.
    """

    items: frozenset[int]
    score: Score
    satisfies_jr: bool | None = None

    @property
    def size(self) -> int:
        return len(self.items)

    def sorted_items(self) -> tuple[int, ...]:
        return tuple(sorted(self.items))
