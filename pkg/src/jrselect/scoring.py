"""Additive per-item scoring rules and rule property checkers.

Every rule maps (item, instance) to a non-negative score; the score of an
item set is the sum over its members. Counting rules are exact: engagement
scores are ints and the diverse-approval variants return
:class:`fractions.Fraction`, so solver comparisons are cross-multiplied
integer comparisons rather than float ones. External scores are plain
floats and may exceed 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .core import ApprovalProfile, Instance, Score, _as_index
from .errors import (
    ItemIndexError,
    MissingGroupsError,
    MissingScoresError,
    ValidationError,
)


@dataclass(frozen=True)
class ScoringRule:
    """A named additive scoring rule.

    ``kind`` is one of ``engagement``, ``maximin_diverse_approval``,
    ``product_diverse_approval``, ``external`` or ``custom``; the CLI and
    report serializers key off ``name``.
    """

    name: str
    kind: str
    evaluate: Callable[[int, Instance], Score]

    def score_item(self, item: int, instance: Instance) -> Score:
        return self.evaluate(item, instance)

    def score_set(self, items: Iterable[int], instance: Instance) -> Score:
        total: Score = 0
        for i in items:
            total = total + self.evaluate(i, instance)
        return total


def engagement_score(item: int, instance: Instance) -> int:
    """Number of users approving ``item``."""
    return instance.profile.approval_count(item)


def _require_groups(instance: Instance):
    if instance.groups is None:
        raise MissingGroupsError("this rule needs a group partition on the instance")
    return instance.groups


def maximin_diverse_approval(item: int, instance: Instance) -> Fraction:
    """Worst within-group approval rate of ``item`` across all groups.

    With a single group this is the plain approval fraction. The value is
    exact: a Fraction in [0, 1].
    """
    groups = _require_groups(instance)
    item = _as_index(item, instance.m, ItemIndexError, "item")
    approvers = instance.profile.approver_masks[item]
    worst = None
    for mask, size in zip(groups.block_masks, groups.block_sizes):
        rate = Fraction((approvers & mask).bit_count(), size)
        if worst is None or rate < worst:
            worst = rate
            if worst == 0:
                break
    return worst


def product_diverse_approval(item: int, instance: Instance) -> Fraction:
    """Product of within-group approval rates of ``item`` across groups."""
    groups = _require_groups(instance)
    item = _as_index(item, instance.m, ItemIndexError, "item")
    approvers = instance.profile.approver_masks[item]
    result = Fraction(1)
    for mask, size in zip(groups.block_masks, groups.block_sizes):
        count = (approvers & mask).bit_count()
        if count == 0:
            return Fraction(0)
        result *= Fraction(count, size)
    return result


def external_score(item: int, instance: Instance) -> float:
    """Score of ``item`` from the instance's external score table."""
    if instance.external_scores is None:
        raise MissingScoresError("the external rule needs external_scores on the instance")
    item = _as_index(item, instance.m, ItemIndexError, "item")
    return instance.external_scores[item]


ENGAGEMENT = ScoringRule("engagement", "engagement", engagement_score)
MAXIMIN_DIVERSE_APPROVAL = ScoringRule(
    "maximin_diverse_approval", "maximin_diverse_approval", maximin_diverse_approval
)
PRODUCT_DIVERSE_APPROVAL = ScoringRule(
    "product_diverse_approval", "product_diverse_approval", product_diverse_approval
)
EXTERNAL = ScoringRule("external", "external", external_score)

#: Registry used by the CLI; the short aliases are accepted on the command line.
RULES: dict[str, ScoringRule] = {
    "engagement": ENGAGEMENT,
    "maximin_diverse_approval": MAXIMIN_DIVERSE_APPROVAL,
    "product_diverse_approval": PRODUCT_DIVERSE_APPROVAL,
    "external": EXTERNAL,
    "mda": MAXIMIN_DIVERSE_APPROVAL,
    "product": PRODUCT_DIVERSE_APPROVAL,
}


def inverse_engagement_rule() -> ScoringRule:
    """Negative-control rule scoring an item by (n - approval count).

    Deliberately approval-monotonicity-violating; used to exercise the
    checkers, never for selection.
    """

    def evaluate(item: int, instance: Instance) -> int:
        return instance.n - instance.profile.approval_count(item)

    return ScoringRule("inverse_engagement", "custom", evaluate)


def check_approval_dependent(rule: ScoringRule, instance: Instance) -> int | None:
    """Check that items nobody approves score 0 under ``rule``.

    Returns None when the property holds on this instance, otherwise the
    first violating item index.
    """
    for item in range(instance.m):
        if instance.profile.approver_masks[item] == 0:
            if rule.evaluate(item, instance) != 0:
                return item
    return None


@dataclass(frozen=True)
class MonotonicityWitness:
    """A single-approval addition that made the added item's score drop."""

    user: int
    item: int
    score_before: Score
    score_after: Score
    instance_before: Instance
    instance_after: Instance


def check_approval_monotonic(
    rule: ScoringRule, instance: Instance, trials: int = 100, seed: int = 0
) -> MonotonicityWitness | None:
    """Randomized check that adding one approval never lowers that item's score.

    Each trial picks a (user, item) pair the user does not yet approve,
    adds the approval, and compares the item's score before and after.
    Returns None when no violation is found within ``trials`` trials,
    otherwise a witness holding both instances.
    """
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    profile = instance.profile
    full = (1 << profile.m) - 1
    open_users = [u for u in range(profile.n) if profile.approval_masks[u] != full]
    if not open_users:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        u = open_users[int(rng.integers(len(open_users)))]
        missing = [i for i in range(profile.m) if not profile.approval_masks[u] >> i & 1]
        i = missing[int(rng.integers(len(missing)))]
        masks = list(profile.approval_masks)
        masks[u] |= 1 << i
        grown = Instance(
            ApprovalProfile.from_masks(masks, profile.m),
            instance.k,
            instance.groups,
            instance.external_scores,
        )
        before = rule.evaluate(i, instance)
        after = rule.evaluate(i, grown)
        if after < before:
            return MonotonicityWitness(u, i, before, after, instance, grown)
    return None
