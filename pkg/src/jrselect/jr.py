"""Justified representation: cohesion, representation, and verification.

A user group G is cohesive when its members share at least one commonly
approved item, and it is large enough to deserve a seat when
``|G| * k >= n`` (the n/k proportionality threshold, kept in exact integer
arithmetic). An item set S satisfies justified representation (JR) when no
cohesive, large-enough group is left with none of its members approving
anything in S.

``verify_jr`` runs the per-candidate-item scan: S fails iff some item c is
approved by at least n/k users none of whom approve anything in S. That
scan is equivalent to the subset definition because any violating group
can be grown to the full set of unrepresented approvers of its common
item. ``verify_jr_bruteforce`` checks the subset definition literally and
serves as the oracle in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Instance, bits_to_frozenset, item_mask, user_mask
from .errors import (
    EmptyGroupError,
    ProfileTooLargeError,
    UnapprovedItemError,
)

#: Hard cap for the brute-force verifier: 2**20 subsets is the most it will scan.
BRUTEFORCE_MAX_USERS = 20


@dataclass(frozen=True)
class JrWitness:
    """A JR violation: ``group`` is cohesive via ``item``, large enough,
    and entirely unrepresented by the checked set."""

    item: int
    group: frozenset[int]


def meets_group_threshold(count: int, instance: Instance) -> bool:
    """Whether a group of ``count`` users reaches the n/k threshold."""
    return count * instance.k >= instance.n


def unrepresented_mask(items_mask: int, instance: Instance) -> int:
    """Bitmask of users approving nothing in the item mask."""
    mask = 0
    bit = 1
    for approved in instance.profile.approval_masks:
        if approved & items_mask == 0:
            mask |= bit
        bit <<= 1
    return mask


def unrepresented_users(items: Iterable[int], instance: Instance) -> frozenset[int]:
    """Users with no approved item in ``items``."""
    s_mask = item_mask(items, instance.m)
    return bits_to_frozenset(unrepresented_mask(s_mask, instance))


def is_cohesive(group: Iterable[int], instance: Instance) -> bool:
    """Whether the users in ``group`` commonly approve at least one item."""
    g_mask = user_mask(group, instance.n)
    if g_mask == 0:
        raise EmptyGroupError("cohesion is undefined for an empty group")
    return _common_items_mask(g_mask, instance) != 0


def _common_items_mask(group_mask: int, instance: Instance) -> int:
    common = (1 << instance.m) - 1
    mask = group_mask
    while mask and common:
        low = mask & -mask
        common &= instance.profile.approval_masks[low.bit_length() - 1]
        mask ^= low
    return common


def represents(items: Iterable[int], group: Iterable[int], instance: Instance) -> bool:
    """Whether some member of ``group`` approves some item in ``items``."""
    g_mask = user_mask(group, instance.n)
    if g_mask == 0:
        raise EmptyGroupError("representation is undefined for an empty group")
    s_mask = item_mask(items, instance.m)
    mask = g_mask
    while mask:
        low = mask & -mask
        if instance.profile.approval_masks[low.bit_length() - 1] & s_mask:
            return True
        mask ^= low
    return False


def verify_jr(items: Iterable[int], instance: Instance) -> JrWitness | None:
    """Check justified representation of an item set of any size.

    Returns None when the set satisfies JR. Otherwise returns the witness
    for the lowest-indexed violating item: that item together with all of
    its unrepresented approvers (the maximal violating group for it).

    Parameters
    ----------
    items : iterable of int
        The candidate set S; its size need not equal the instance's k.
    instance : Instance
        Supplies the profile and the k used in the n/k threshold.
    """
    s_mask = item_mask(items, instance.m)
    unrep = unrepresented_mask(s_mask, instance)
    if unrep == 0:
        return None
    n, k = instance.n, instance.k
    for c, approvers in enumerate(instance.profile.approver_masks):
        g = approvers & unrep
        if g.bit_count() * k >= n:
            return JrWitness(item=c, group=bits_to_frozenset(g))
    return None


def verify_jr_bruteforce(items: Iterable[int], instance: Instance) -> JrWitness | None:
    """Oracle JR check enumerating user subsets (n <= 20 only).

    Subsets are scanned in ascending bitmask order; the first subset that
    is large enough, cohesive, and fully unrepresented is returned as the
    witness, with the lowest commonly approved item. Agrees with
    :func:`verify_jr` in pass/fail (the witnesses may differ).
    """
    n = instance.n
    if n > BRUTEFORCE_MAX_USERS:
        raise ProfileTooLargeError(
            f"brute-force verification is capped at {BRUTEFORCE_MAX_USERS} users, got {n}"
        )
    s_mask = item_mask(items, instance.m)
    unrep = unrepresented_mask(s_mask, instance)
    k = instance.k
    for g_mask in range(1, 1 << n):
        if g_mask & ~unrep:
            continue
        if g_mask.bit_count() * k < n:
            continue
        common = _common_items_mask(g_mask, instance)
        if common:
            low_item = (common & -common).bit_length() - 1
            return JrWitness(item=low_item, group=bits_to_frozenset(g_mask))
    return None


def _coverage_extension(w_mask: int, instance: Instance) -> list[int]:
    """Greedy max-coverage picks until no item is approved by an
    unrepresented group of n/k users.

    Starting from the committee bitmask ``w_mask``, repeatedly add the item
    approved by the most still-unrepresented users among the items whose
    unrepresented-approver count reaches the n/k threshold, breaking ties
    by ascending item index. Each pick removes at least ceil(n/k) users, so
    the loop ends after at most k picks from an empty start (one fewer when
    seeded with an approved item).
    """
    profile = instance.profile
    n, k = instance.n, instance.k
    v_mask = unrepresented_mask(w_mask, instance)
    picks: list[int] = []
    while v_mask:
        best = -1
        best_count = 0
        for i, approvers in enumerate(profile.approver_masks):
            if w_mask >> i & 1:
                continue
            count = (approvers & v_mask).bit_count()
            if count * k >= n and count > best_count:
                best = i
                best_count = count
        if best < 0:
            break
        picks.append(best)
        w_mask |= 1 << best
        v_mask &= ~profile.approver_masks[best]
    return picks


def jr_set_containing(item: int, instance: Instance) -> frozenset[int]:
    """Grow a size-k JR set that contains ``item``.

    ``item`` must have at least one approver (otherwise
    :class:`UnapprovedItemError` is raised: an unapproved item cannot be
    forced into every JR argument). The construction seeds the committee
    with ``item``, runs the greedy coverage stage on the residual profile,
    and pads with the lowest-indexed unused items. The coverage stage needs
    at most k - 1 picks, so the result always has exactly k items and
    always satisfies JR.
    """
    s_mask = item_mask([item], instance.m)
    if instance.profile.approver_masks[item] == 0:
        raise UnapprovedItemError(f"item {item} has no approver")
    picks = _coverage_extension(s_mask, instance)
    chosen = [item] + picks
    assert len(chosen) <= instance.k, "coverage stage exceeded the committee budget"
    mask = s_mask
    for i in picks:
        mask |= 1 << i
    for i in range(instance.m):
        if len(chosen) == instance.k:
            break
        if not mask >> i & 1:
            chosen.append(i)
            mask |= 1 << i
    return frozenset(chosen)
