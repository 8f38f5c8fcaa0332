"""Committee selection and the price of justified representation.

Three selection methods share one result type: the unconstrained top-k
(``opt_unconstrained``), exact enumeration over JR-satisfying k-sets
(``opt_jr_exact``), and the two-stage greedy coverage heuristic
(``greedy_cc``). The price of an instance under a rule is the unconstrained
optimum divided by the score of the JR-constrained set the chosen method
produced; a zero denominator is reported as an explicit Undefined state
(price None), never as infinity.

The module also ships the three worst-case generators used to probe how
bad that price can get: an external-scores family with unbounded price, a
diverse-approval family meeting the price-k ceiling for approval-dependent
rules, and a cohesive-groups family meeting the k/(k - gamma) ceiling that
holds for arbitrary rules.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import ApprovalProfile, Committee, GroupPartition, Instance, Score
from .errors import BudgetExceededError, ParameterError
from .jr import _coverage_extension, unrepresented_mask, verify_jr
from .scoring import ScoringRule

#: Default cap on the number of k-subsets the exact solver may enumerate.
DEFAULT_ENUMERATION_BUDGET = 10_000_000

METHOD_OPT = "opt_unconstrained"
METHOD_JR_EXACT = "opt_jr_exact"
METHOD_GREEDY = "greedy_cc"


@dataclass(frozen=True)
class SelectionResult:
    """A committee plus how it was produced.

    ``justifying_prefix_size`` is only meaningful for ``greedy_cc``: the
    number of leading picks made by the coverage stage (0 for the other
    methods).
    """

    committee: Committee
    rule: str
    method: str
    justifying_prefix_size: int = 0


@dataclass(frozen=True)
class PriceReport:
    """Score of the unconstrained optimum vs. a JR-constrained committee.

    ``price`` is ``score_opt / score_constrained`` computed exactly
    (Fraction) for counting rules and in floats for external scores; it is
    None when the constrained score is zero, the explicit Undefined state.
    ``exact`` records whether the constrained side came from the exact
    solver (True) or from the greedy heuristic (False).
    """

    rule: str
    method: str
    score_opt: Score
    score_constrained: Score
    price: Score | None
    exact: bool

    @property
    def undefined(self) -> bool:
        return self.price is None


def item_scores(instance: Instance, rule: ScoringRule) -> list[Score]:
    return [rule.evaluate(i, instance) for i in range(instance.m)]


def _ratio(numerator: Score, denominator: Score) -> Score:
    if isinstance(numerator, float) or isinstance(denominator, float):
        return numerator / denominator
    return Fraction(numerator) / Fraction(denominator)


def optimal_set(instance: Instance, rule: ScoringRule) -> SelectionResult:
    """The unconstrained optimum: the k items of highest individual score.

    Ties are broken by ascending item index, so the result is the
    lexicographically smallest among score-optimal committees. The
    returned committee carries its verified JR status.
    """
    scores = item_scores(instance, rule)
    order = sorted(range(instance.m), key=lambda i: (_descending(scores[i]), i))
    chosen = frozenset(order[: instance.k])
    committee = Committee(
        items=chosen,
        score=rule.score_set(chosen, instance),
        satisfies_jr=verify_jr(chosen, instance) is None,
    )
    return SelectionResult(committee, rule.name, METHOD_OPT)


def _descending(score: Score):
    return -score


def optimal_jr_set_exact(
    instance: Instance, rule: ScoringRule, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> SelectionResult:
    """Best JR-satisfying k-set by straight enumeration.

    Enumerates the C(m, k) committees in lexicographic order, skipping
    those that fail JR; among score ties the lexicographically smallest
    item set wins. Raises :class:`BudgetExceededError` up front when
    C(m, k) exceeds ``budget``. A JR-satisfying k-set always exists (the
    greedy coverage argument), so the scan cannot come back empty.
    """
    if budget < 1:
        raise ParameterError("budget must be positive")
    total = math.comb(instance.m, instance.k)
    if total > budget:
        raise BudgetExceededError(
            f"C({instance.m}, {instance.k}) = {total} exceeds the budget of {budget}"
        )
    scores = item_scores(instance, rule)
    best: tuple[int, ...] | None = None
    best_score: Score = 0
    for combo in itertools.combinations(range(instance.m), instance.k):
        score = sum(scores[i] for i in combo)
        if best is not None and not score > best_score:
            continue
        if verify_jr(combo, instance) is not None:
            continue
        best = combo
        best_score = score
    assert best is not None, "no JR committee found; the coverage argument forbids this"
    committee = Committee(items=frozenset(best), score=best_score, satisfies_jr=True)
    return SelectionResult(committee, rule.name, METHOD_JR_EXACT)


def greedy_cc(instance: Instance, rule: ScoringRule) -> SelectionResult:
    """Two-stage greedy selection that always satisfies JR.

    Stage one (coverage): while some item is approved by at least n/k
    users none of whom approve a selected item, add the item covering the
    most such users. Stage two: fill the remaining seats with the
    highest-scoring unselected items under ``rule``. All ties break by
    ascending item index. Stage one removes at least ceil(n/k) users per
    pick, so it ends within k picks and the final committee satisfies JR;
    the number of stage-one picks is reported as
    ``justifying_prefix_size``.
    """
    profile = instance.profile
    n, k, m = instance.n, instance.k, instance.m
    chosen: list[int] = []
    w_mask = 0
    v_mask = unrepresented_mask(0, instance)
    prefix = 0
    while len(chosen) < k:
        best = -1
        best_count = 0
        for i, approvers in enumerate(profile.approver_masks):
            if w_mask >> i & 1:
                continue
            count = (approvers & v_mask).bit_count()
            if count * k >= n and count > best_count:
                best = i
                best_count = count
        if best >= 0:
            prefix += 1
        else:
            best_score: Score | None = None
            for i in range(m):
                if w_mask >> i & 1:
                    continue
                score = rule.evaluate(i, instance)
                if best < 0 or score > best_score:
                    best = i
                    best_score = score
        chosen.append(best)
        w_mask |= 1 << best
        v_mask &= ~profile.approver_masks[best]
    items = frozenset(chosen)
    committee = Committee(
        items=items,
        score=rule.score_set(items, instance),
        satisfies_jr=verify_jr(items, instance) is None,
    )
    return SelectionResult(committee, rule.name, METHOD_GREEDY, justifying_prefix_size=prefix)


def price_of_jr(
    instance: Instance,
    rule: ScoringRule,
    method: str = "exact",
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> PriceReport:
    """Price of imposing JR on this instance under ``rule``.

    ``method`` selects the constrained committee: ``"exact"`` for the
    enumerated optimum (an exact price) or ``"greedy"`` for the greedy
    heuristic (an upper bound on the exact price).
    """
    if method not in ("exact", "greedy"):
        raise ParameterError(f"method must be 'exact' or 'greedy', got {method!r}")
    opt = optimal_set(instance, rule)
    if method == "exact":
        constrained = optimal_jr_set_exact(instance, rule, budget=budget)
    else:
        constrained = greedy_cc(instance, rule)
    num = opt.committee.score
    den = constrained.committee.score
    price = None if den == 0 else _ratio(num, den)
    return PriceReport(
        rule=rule.name,
        method=constrained.method,
        score_opt=num,
        score_constrained=den,
        price=price,
        exact=(method == "exact"),
    )


# ---------------------------------------------------------------------------
# Worst-case generators
# ---------------------------------------------------------------------------


def unbounded_price_instance(k: int, epsilon: float, c: float) -> Instance:
    """External-scores family whose price grows without bound as epsilon -> 0.

    k singleton groups each uniquely approve one item scored ``epsilon``;
    one extra unapproved item is scored ``c > epsilon``. Every JR committee
    must contain all k approved items (each singleton group reaches the
    n/k = 1 threshold), so its score is k * epsilon while the unconstrained
    optimum swaps one epsilon item for the c item: the exact price is
    (c + (k - 1) * epsilon) / (k * epsilon).
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    epsilon = float(epsilon)
    c = float(c)
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive")
    if not c > epsilon:
        raise ParameterError("c must exceed epsilon for the conflict to bite")
    approvals = [[i] for i in range(k)]
    profile = ApprovalProfile(approvals, k + 1)
    groups = GroupPartition(list(range(k)))
    scores = [epsilon] * k + [c]
    return Instance(profile, k, groups, scores)


def diverse_approval_worst_case(n: int, k: int) -> Instance:
    """Consensus+shared family: the maximin-diverse-approval price ceiling.

    gamma = n*k/(n + k) groups of n/k + 1 users each. Every member of group
    g approves the group's consensus item (item g); the first member of
    each group additionally approves all k shared items (items
    gamma..gamma+k-1). Consensus items have maximin score 0, shared items
    k/(n + k), so the unconstrained optimum takes the k shared items while
    JR forces all gamma consensus items: the exact price is k/(k - gamma),
    which equals k exactly when gamma = k - 1 (i.e. n = k*(k - 1)).

    Requires (n + k) | n*k, gamma | n (integral group size) and gamma > 1;
    anything else raises :class:`ParameterError`.
    """
    if n < 1 or k < 1:
        raise ParameterError("n and k must be at least 1")
    if (n * k) % (n + k) != 0:
        raise ParameterError(f"(n + k) = {n + k} does not divide n*k = {n * k}")
    gamma = (n * k) // (n + k)
    if gamma <= 1:
        raise ParameterError(f"derived gamma = {gamma} must exceed 1; the construction degenerates")
    if n % gamma != 0:
        raise ParameterError(f"gamma = {gamma} does not divide n = {n}; group size is fractional")
    size = n // gamma  # equals n/k + 1
    m = gamma + k
    if k > m:
        raise ParameterError(f"k = {k} exceeds the item count {m}")
    shared = list(range(gamma, gamma + k))
    approvals: list[list[int]] = []
    assignment: list[int] = []
    for g in range(gamma):
        for member in range(size):
            if member == 0:
                approvals.append([g] + shared)
            else:
                approvals.append([g])
            assignment.append(g)
    profile = ApprovalProfile(approvals, m)
    return Instance(profile, k, GroupPartition(assignment))


def cohesive_groups_worst_case(n: int, k: int, gamma: int, c: float = 1.0) -> Instance:
    """Cohesive-groups family meeting the k/(k - gamma) price ceiling.

    gamma groups of n/gamma users each; every group unanimously approves
    exactly one distinct consensus item and nothing else. External scores
    put 0 on the gamma consensus items and ``c`` on k further items, so the
    unconstrained optimum scores k*c while any JR committee spends gamma
    seats on zero-scored consensus items: the exact price under the
    external rule is k/(k - gamma).

    Requires 1 <= gamma < k (so the JR committee keeps a positive score)
    and gamma | n.
    """
    if k < 2:
        raise ParameterError("k must be at least 2")
    if not 1 <= gamma < k:
        raise ParameterError(f"gamma = {gamma} must satisfy 1 <= gamma < k = {k}")
    if n < gamma or n % gamma != 0:
        raise ParameterError(f"gamma = {gamma} must divide n = {n}")
    c = float(c)
    if not c > 0:
        raise ParameterError("c must be positive")
    m = gamma + k
    group_size = n // gamma
    approvals = [[u // group_size] for u in range(n)]
    assignment = [u // group_size for u in range(n)]
    scores = [0.0] * gamma + [c] * k
    profile = ApprovalProfile(approvals, m)
    return Instance(profile, k, GroupPartition(assignment), scores)
