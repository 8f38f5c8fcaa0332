"""Canonical worked instances used by the docs, demos, golden files and tests.

Both instances stage the same conflict in two sizes: two like-minded
camps, each sharing one camp item, connected by one bridge user per camp
who also approves a band of crossover items. The crossover items win every
diverse-approval comparison, yet selecting only them leaves everyone but
the bridge users unrepresented, so justified representation forces both
camp items into the committee.
"""

from __future__ import annotations

from .core import GroupPartition, Instance, ApprovalProfile

#: Display labels for the 12-user instance, in user-id order.
USER_LABELS = "ABCDEFGHIJKL"


def bridge_conflict_instance() -> Instance:
    """12 users, 5 items, k = 3.

    Users 0..5 (A..F) form camp 0 and all approve item 0; users 6..11
    (G..L) form camp 1 and all approve item 1; the bridge users F (5) and
    G (6) additionally approve the crossover items 2, 3 and 4. Under
    maximin diverse approval the crossover items score 1/6 each and the
    camp items 0, so the unconstrained optimum is {2, 3, 4} with score
    1/2, every JR committee contains {0, 1}, and the exact price of JR
    is 3.
    """
    approvals: list[list[int]] = []
    for u in range(6):
        approvals.append([0, 2, 3, 4] if u == 5 else [0])
    for u in range(6, 12):
        approvals.append([1, 2, 3, 4] if u == 6 else [1])
    profile = ApprovalProfile(approvals, 5)
    groups = GroupPartition([0] * 6 + [1] * 6)
    return Instance(profile, 3, groups)


def mini_bridge_instance() -> Instance:
    """6 users, 5 items, k = 3.

    Users 0 and 1 approve camp item 0; users 3 and 4 approve camp item 1;
    the bridge users 2 and 5 approve the crossover items 2, 3 and 4 only.
    Camps are {0, 1, 2} and {3, 4, 5}. The crossover items score 1/3 under
    maximin diverse approval, the unconstrained optimum {2, 3, 4} leaves
    4 of the 6 users unrepresented, and both two-user camps reach the
    n/k = 2 threshold, so JR forces items 0 and 1.
    """
    approvals = [[0], [0], [2, 3, 4], [1], [1], [2, 3, 4]]
    profile = ApprovalProfile(approvals, 5)
    groups = GroupPartition([0, 0, 0, 1, 1, 1])
    return Instance(profile, 3, groups)
