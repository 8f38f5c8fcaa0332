"""End-to-end acceptance checks.

Each test prints exactly one summary line, ``criterion N: PASS (...)``,
``criterion N: FAIL (...)`` or ``criterion N: SKIP (...)``, so

    pytest tests/test_acceptance.py -v -s

doubles as the acceptance report. The checks, in order:

1.  Exact rational bookkeeping on the canonical bridge instance.
2.  The linear-scan representation verifier agrees with subset
    enumeration on an exhaustive small-instance sweep plus 10^4 random
    instances.
3.  The greedy selector always returns representation-satisfying sets.
4.  Seeded committee completion succeeds for every approved item across
    the exhaustive sweep.
5.  The rate-rule worst-case family meets the price ceiling k exactly;
    random exact prices under approval-dependent rules never exceed k.
6.  The cohesive-group worst-case family meets k/(k - gamma) exactly;
    random covered instances never exceed that ceiling under any rule.
7.  The ranking sampler matches its closed-form distribution
    (chi-square, both the single-draw and the vectorized batch path).
8.  The top-displacement probability bound dominates Monte-Carlo
    estimates across a 12-point parameter grid.
9.  The desk-scale dispersion sweep reproduces the qualitative price
    pattern: near-optimal greedy at low dispersion, the rate-based rule
    pricing representation at least as high as engagement, and sampled
    prices respecting the finite analytic ceiling.
10. Corpus experiment over the public question files (skipped offline).
"""

import functools
import itertools
import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from jrselect import (
    ENGAGEMENT,
    EXTERNAL,
    MAXIMIN_DIVERSE_APPROVAL,
    ApprovalProfile,
    GroupPartition,
    Instance,
    MallowsConfig,
    NetworkError,
    bridge_conflict_instance,
    build_instance,
    cohesive_groups_worst_case,
    diverse_approval_worst_case,
    fetch_dataset,
    greedy_cc,
    jr_set_containing,
    mallows_pmf,
    optimal_set,
    price_of_jr,
    question_instances_from_files,
    run_price_sweep,
    sample_mallows_bottom_up,
    top_displacement_bound,
    verify_jr,
    verify_jr_bruteforce,
)
from jrselect.mallows import _sample_rankings

from helpers import random_instance

#: Source of the public corpus used by criterion 10; the test is a no-op
#: without network access.
DATASET_URL = "https://github.com/akonya/polarized-issues-data/archive/refs/heads/main.zip"


def _criterion(num):
    """Print one ``criterion N: ...`` line no matter how the test ends."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except AssertionError as exc:
                print(f"criterion {num}: FAIL ({str(exc).splitlines()[0]})")
                raise
            except Exception as exc:  # noqa: BLE001 - reported, then re-raised
                print(f"criterion {num}: FAIL ({type(exc).__name__}: {exc})")
                raise
            print(f"criterion {num}: PASS ({detail})")

        return wrapper

    return decorate


def _exhaustive_instances():
    """Every instance with n <= 6 users, m <= 4 items and k in {1, 2, 3}.

    Ballots are enumerated as multisets; that covers all profiles because
    representation verdicts ignore user identity (a relabeling-invariance
    property the unit suite checks directly).
    """
    for m in range(1, 5):
        ballots = range(1 << m)
        for n in range(1, 7):
            for multiset in itertools.combinations_with_replacement(ballots, n):
                profile = ApprovalProfile.from_masks(multiset, m)
                for k in (1, 2, 3):
                    if k <= m:
                        yield Instance(profile, k)


@_criterion(1)
def test_bridge_instance_exact_rationals():
    start = time.perf_counter()
    instance = bridge_conflict_instance()
    best = optimal_set(instance, MAXIMIN_DIVERSE_APPROVAL)
    assert best.committee.items == frozenset({2, 3, 4}), (
        f"unconstrained optimum {sorted(best.committee.items)} != [2, 3, 4]"
    )
    assert best.committee.score == Fraction(1, 2), f"optimal score {best.committee.score} != 1/2"
    for combo in itertools.combinations(range(instance.m), instance.k):
        passes = verify_jr(combo, instance) is None
        assert passes == ({0, 1} <= set(combo)), (
            f"committee {combo} verdict {passes}; only supersets of {{0, 1}} may pass"
        )
    report = price_of_jr(instance, MAXIMIN_DIVERSE_APPROVAL, method="exact")
    assert isinstance(report.price, Fraction), f"price is {type(report.price).__name__}, not Fraction"
    assert report.price == Fraction(instance.k), f"price {report.price} != k = {instance.k}"
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s, budget 1s"
    return (
        "optimum {2,3,4} with score 1/2, passing sets are exactly the supersets of {0,1}, "
        f"price {report.price} = k, {elapsed:.3f}s"
    )


@_criterion(2)
def test_verifier_agrees_with_enumeration():
    start = time.perf_counter()
    exhaustive_pairs = 0
    for instance in _exhaustive_instances():
        for combo in itertools.combinations(range(instance.m), instance.k):
            fast = verify_jr(combo, instance) is None
            slow = verify_jr_bruteforce(combo, instance) is None
            assert fast == slow, (
                f"disagreement: masks={list(instance.profile.approval_masks)} "
                f"k={instance.k} committee={combo} fast={fast} slow={slow}"
            )
            exhaustive_pairs += 1
    rng = np.random.default_rng(202)
    random_pairs = 0
    for _ in range(10_000):
        instance = random_instance(rng, n_hi=8, m_hi=6)
        for combo in itertools.combinations(range(instance.m), instance.k):
            fast = verify_jr(combo, instance) is None
            slow = verify_jr_bruteforce(combo, instance) is None
            assert fast == slow, (
                f"disagreement: masks={list(instance.profile.approval_masks)} "
                f"k={instance.k} committee={combo} fast={fast} slow={slow}"
            )
            random_pairs += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"took {elapsed:.0f}s, budget 120s"
    return (
        f"{exhaustive_pairs} exhaustive + {random_pairs} random committee checks, "
        f"zero disagreements, {elapsed:.0f}s"
    )


@_criterion(3)
def test_greedy_output_always_satisfies_representation():
    start = time.perf_counter()
    rng = np.random.default_rng(303)
    for trial in range(10_000):
        with_groups = trial % 2 == 1
        instance = random_instance(rng, n_hi=50, m_hi=30, groups=with_groups)
        rule = MAXIMIN_DIVERSE_APPROVAL if with_groups else ENGAGEMENT
        result = greedy_cc(instance, rule)
        witness = verify_jr(result.committee.items, instance)
        assert witness is None, (
            f"greedy committee {sorted(result.committee.items)} fails on "
            f"masks={list(instance.profile.approval_masks)} k={instance.k} "
            f"(witness item {witness.item})"
        )
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.0f}s, budget 60s"
    return f"10000 random instances (n <= 50, m <= 30), zero failures, {elapsed:.0f}s"


@_criterion(4)
def test_seeded_completion_covers_every_approved_item():
    start = time.perf_counter()
    completions = 0
    for instance in _exhaustive_instances():
        for item in range(instance.m):
            if instance.profile.approver_masks[item] == 0:
                continue
            chosen = jr_set_containing(item, instance)
            assert item in chosen, f"completion for item {item} dropped it: {sorted(chosen)}"
            assert len(chosen) == instance.k, f"completion size {len(chosen)} != k = {instance.k}"
            assert verify_jr(chosen, instance) is None, (
                f"completion {sorted(chosen)} for item {item} fails on "
                f"masks={list(instance.profile.approval_masks)} k={instance.k}"
            )
            completions += 1
    elapsed = time.perf_counter() - start
    return f"{completions} seeded completions across the exhaustive sweep, all valid, {elapsed:.0f}s"


@_criterion(5)
def test_rate_rule_price_ceiling_is_met_and_never_exceeded():
    tight = []
    for n, k in ((12, 4), (6, 3), (20, 5)):
        instance = diverse_approval_worst_case(n, k)
        report = price_of_jr(instance, MAXIMIN_DIVERSE_APPROVAL, method="exact")
        assert report.price == Fraction(k), f"(n={n}, k={k}) price {report.price} != {k}"
        tight.append(f"(n={n},k={k})->{report.price}")
    rng = np.random.default_rng(505)
    undefined = 0
    for _ in range(1000):
        instance = random_instance(rng, n_hi=8, m_hi=8, groups=True)
        for rule in (ENGAGEMENT, MAXIMIN_DIVERSE_APPROVAL):
            report = price_of_jr(instance, rule, method="exact")
            if report.price is None:
                undefined += 1
                continue
            assert report.price <= instance.k, (
                f"price {report.price} > k = {instance.k} under {rule.name} on "
                f"masks={list(instance.profile.approval_masks)}"
            )
    return (
        f"tight {', '.join(tight)}; 2000 exact prices on 1000 random instances "
        f"all <= k ({undefined} undefined)"
    )


def _random_cohesive_instance(rng):
    """Instance whose users split into gamma camps sharing consensus items.

    Camp c unanimously approves item c (plus random extras); camps have
    equal size and gamma < k, so each camp clears the seat threshold and
    the camps cover every user.
    """
    k = int(rng.integers(2, 6))
    gamma = int(rng.integers(1, k))
    m = int(rng.integers(k, 10))
    size = int(rng.integers(1, 4))
    n = gamma * size
    extras = rng.random((n, m)) < float(rng.uniform(0.1, 0.6))
    approvals = []
    labels = []
    for user in range(n):
        camp = user // size
        approved = {camp} | {int(i) for i in np.flatnonzero(extras[user])}
        approvals.append(sorted(approved))
        labels.append(camp)
    scores = [float(x) for x in rng.random(m)]
    instance = build_instance(
        n, m, k, approvals, groups=GroupPartition(labels), external_scores=scores
    )
    return instance, gamma


@_criterion(6)
def test_cohesive_cover_price_ceiling_is_met_and_never_exceeded():
    tight = []
    for n, k, gamma in ((12, 4, 2), (10, 5, 1), (12, 6, 3)):
        instance = cohesive_groups_worst_case(n, k, gamma)
        report = price_of_jr(instance, EXTERNAL, method="exact")
        assert report.price == k / (k - gamma), (
            f"(k={k}, gamma={gamma}) price {report.price} != {k / (k - gamma)}"
        )
        tight.append(f"(k={k},g={gamma})->{report.price}")
    rng = np.random.default_rng(606)
    rules = (ENGAGEMENT, MAXIMIN_DIVERSE_APPROVAL, EXTERNAL)
    undefined = 0
    for trial in range(1000):
        instance, gamma = _random_cohesive_instance(rng)
        rule = rules[trial % len(rules)]
        report = price_of_jr(instance, rule, method="exact")
        if report.price is None:
            undefined += 1
            continue
        ceiling = Fraction(instance.k, instance.k - gamma)
        # float prices get a hair of slack for accumulated rounding
        limit = ceiling + Fraction(1, 10**9) if isinstance(report.price, float) else ceiling
        assert report.price <= limit, (
            f"price {report.price} > {ceiling} under {rule.name} with gamma={gamma} on "
            f"masks={list(instance.profile.approval_masks)} k={instance.k}"
        )
    return (
        f"tight {', '.join(tight)}; 1000 random covered instances never exceed "
        f"k/(k-gamma) ({undefined} undefined)"
    )


@_criterion(7)
def test_sampler_matches_closed_form_distribution():
    start = time.perf_counter()
    m = 4
    sigma = tuple(range(m))
    perms = list(itertools.permutations(range(m)))
    draws = 100_000
    rng = np.random.default_rng(707)
    details = []
    for phi in (0.3, 0.7, 1.0):
        config = MallowsConfig(phi, sigma)
        expected = np.array([mallows_pmf(pi, config) for pi in perms]) * draws
        counts = Counter(sample_mallows_bottom_up(config, rng) for _ in range(draws))
        observed = np.array([counts[pi] for pi in perms], dtype=float)
        expected *= observed.sum() / expected.sum()
        pvalue = chisquare(observed, expected).pvalue
        assert pvalue > 1e-3, f"phi={phi}: single-draw chi-square p={pvalue:.2e}"
        details.append(f"phi={phi}: p={pvalue:.3f}")
    # The vectorized batch path feeds instance sampling; hold it to the
    # same bar at one dispersion.
    config = MallowsConfig(0.7, sigma)
    expected = np.array([mallows_pmf(pi, config) for pi in perms]) * draws
    counts = Counter(tuple(r) for r in _sample_rankings(config, draws, rng))
    observed = np.array([counts[pi] for pi in perms], dtype=float)
    expected *= observed.sum() / expected.sum()
    batch_p = chisquare(observed, expected).pvalue
    assert batch_p > 1e-3, f"batch path chi-square p={batch_p:.2e}"
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.0f}s, budget 30s"
    return f"{'; '.join(details)}; batch phi=0.7: p={batch_p:.3f}; {elapsed:.0f}s"


@_criterion(8)
def test_displacement_bound_dominates_monte_carlo():
    draws = 10_000
    rng = np.random.default_rng(808)
    checked = 0
    worst_margin = -math.inf
    for phi in (0.3, 0.7, 1.0):
        for m, tau in ((6, 2), (10, 5)):
            config = MallowsConfig(phi, tuple(range(m)))
            rankings = _sample_rankings(config, draws, rng)
            for s in (1, 2):
                top = set(range(s))
                hits = sum(1 for ranking in rankings if top.isdisjoint(ranking[:tau]))
                estimate = hits / draws
                bound = top_displacement_bound(phi, m, tau, s)
                slack = 3.0 * math.sqrt(estimate * (1.0 - estimate) / draws)
                worst_margin = max(worst_margin, estimate - bound)
                assert estimate <= bound + slack, (
                    f"phi={phi} m={m} tau={tau} s={s}: estimate {estimate:.4f} > "
                    f"bound {bound:.4f} + slack {slack:.4f}"
                )
                checked += 1
    return (
        f"{checked} grid points at {draws} draws each, estimate <= bound + 3 standard "
        f"errors everywhere (worst estimate-bound gap {worst_margin:+.4f})"
    )


@_criterion(9)
def test_dispersion_sweep_reproduces_price_pattern():
    start = time.perf_counter()
    grid = [round(0.10 + 0.05 * i, 10) for i in range(19)]
    sims = 100
    common = dict(
        phi_grid=grid, n=100, m=100, k=10, tau=25, sims=sims, delta=0.05,
        seed=20260822, keep_prices=True,
    )
    engagement = run_price_sweep(rule=ENGAGEMENT, **common)
    rate_based = run_price_sweep(rule=MAXIMIN_DIVERSE_APPROVAL, **common)

    # (a) tight camps leave the greedy selector nearly optimal.
    low_phi_mean = float(engagement.mean_price[0])
    assert low_phi_mean <= 1.05, f"engagement mean at phi=0.1 is {low_phi_mean:.4f} > 1.05"

    # (b) the rate-based rule prices representation at least as high as
    # engagement wherever both means are estimated from every draw. A
    # point where most draws are undefined (disjoint camps zero out every
    # rate) only yields a conditional mean pinned near 1, which carries
    # no comparable signal; those points are reported but not scored.
    full = [
        i for i in range(len(grid))
        if engagement.undefined_counts[i] == 0 and rate_based.undefined_counts[i] == 0
    ]
    assert full, "no grid point yields fully defined prices under both rules"
    wins = sum(
        1 for i in full
        if float(rate_based.mean_price[i]) >= float(engagement.mean_price[i])
    )
    both_defined = [
        i for i in range(len(grid))
        if not math.isnan(float(engagement.mean_price[i]))
        and not math.isnan(float(rate_based.mean_price[i]))
    ]
    any_wins = sum(
        1 for i in both_defined
        if float(rate_based.mean_price[i]) >= float(engagement.mean_price[i])
    )
    share = wins / len(full)
    assert share >= 0.70, (
        f"rate-based mean >= engagement mean at only {wins}/{len(full)} fully defined points"
    )

    # (c) sampled prices respect the analytic ceiling where it is finite,
    # up to the promised failure level plus three standard errors.
    allowance = 0.05 + 3.0 * math.sqrt(0.05 * 0.95 / sims)
    worst_share = 0.0
    for report in (engagement, rate_based):
        for i, ceiling in enumerate(report.bound):
            if math.isinf(ceiling):
                continue
            prices = report.prices[i]
            if not prices:
                continue
            exceed = sum(1 for price in prices if float(price) > ceiling) / len(prices)
            worst_share = max(worst_share, exceed)
            assert exceed <= allowance, (
                f"phi={grid[i]} under {report.rule}: {exceed:.3f} of sampled prices "
                f"exceed the ceiling (allowed {allowance:.3f})"
            )
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0, f"took {elapsed:.0f}s, budget 600s"
    return (
        f"(a) mean {low_phi_mean:.4f} <= 1.05 at phi=0.1; "
        f"(b) rate rule >= engagement at {wins}/{len(full)} fully defined points "
        f"({any_wins}/{len(both_defined)} counting mostly-undefined points); "
        f"(c) worst ceiling-violation share {worst_share:.3f} <= {allowance:.3f}; {elapsed:.0f}s"
    )


@_criterion(10)
def test_corpus_experiment(tmp_path):
    try:
        paths = fetch_dataset(DATASET_URL, tmp_path / "cache")
    except NetworkError as exc:
        print(f"criterion 10: SKIP (no network access: {exc})")
        pytest.skip(f"corpus unavailable offline: {exc}")
    instances = question_instances_from_files(paths, k=8, cutoff=0.5)
    if not instances:
        print("criterion 10: SKIP (corpus fetched but no question layout recognized)")
        pytest.skip("no question instances recognized in the fetched corpus")
    engagement_prices = []
    rate_prices = []
    oversized = {}
    for name in sorted(instances):
        instance = instances[name]
        result = greedy_cc(instance, ENGAGEMENT)
        if result.justifying_prefix_size > 2:
            oversized[name] = result.justifying_prefix_size
        report = price_of_jr(instance, ENGAGEMENT, method="greedy")
        if report.price is not None:
            engagement_prices.append(float(report.price))
        if instance.groups is not None:
            rate = price_of_jr(instance, MAXIMIN_DIVERSE_APPROVAL, method="greedy")
            if rate.price is not None:
                rate_prices.append(float(rate.price))
    assert engagement_prices, "no defined engagement prices across the corpus questions"
    eng_mean = sum(engagement_prices) / len(engagement_prices)
    assert abs(eng_mean - 1.05) <= 0.05, (
        f"mean engagement price {eng_mean:.3f} outside 1.05 +/- 0.05"
    )
    assert rate_prices, "no question carries group labels; the rate-based mean is unavailable"
    rate_mean = sum(rate_prices) / len(rate_prices)
    assert abs(rate_mean - 1.06) <= 0.05, (
        f"mean rate-based price {rate_mean:.3f} outside 1.06 +/- 0.05"
    )
    assert not oversized, f"justifying prefix exceeds 2 on {oversized}"
    return (
        f"{len(instances)} questions: engagement mean {eng_mean:.3f}, "
        f"rate mean {rate_mean:.3f}, all justifying prefixes <= 2"
    )
