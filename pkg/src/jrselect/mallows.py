"""Mallows preference sampling and the dispersion-based price analysis.

Rankings are order vectors: ``pi[r]`` is the item placed at rank r (rank 0
is the top). The Mallows distribution over rankings pi with reference
sigma and dispersion phi in [0, 1] has probability
``phi ** kendall_tau(pi, sigma) / Z(phi, m)``; phi = 0 concentrates on
sigma and phi = 1 is uniform. Sampling uses the bottom-up repeated
insertion scheme: reference items are inserted from the lowest-ranked to
the highest, each at position j (0-based) with probability proportional to
phi**j, which makes the insertion offsets sum to the Kendall distance.

A mixture of such models with shared approval depth tau turns into a
selection instance: each user draws a component, samples a ranking, and
approves its top tau items; the realized components become the group
partition. ``run_price_sweep`` drives the polarized two-component mixture
across a dispersion grid and records the greedy price of justified
representation next to the analytic high-probability bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import ApprovalProfile, GroupPartition, Instance, Score
from .errors import ParameterError, PermutationError, ValidationError
from .scoring import ScoringRule
from .solve import greedy_cc, optimal_set

#: Tolerance for mixture weights summing to one.
WEIGHT_TOLERANCE = 1e-12


def _check_phi(phi: float) -> float:
    phi = float(phi)
    if not 0.0 <= phi <= 1.0:
        raise ParameterError(f"dispersion phi = {phi} outside [0, 1]")
    return phi


def _check_permutation(ranking: Sequence[int], m: int | None = None) -> tuple[int, ...]:
    ranking = tuple(int(r) for r in ranking)
    if not ranking:
        raise PermutationError("a ranking needs at least one item")
    size = len(ranking) if m is None else m
    if len(ranking) != size or sorted(ranking) != list(range(size)):
        raise PermutationError(f"{ranking!r} is not a permutation of range({size})")
    return ranking


@dataclass(frozen=True)
class MallowsConfig:
    """One Mallows component: dispersion ``phi`` and reference order ``sigma``."""

    phi: float
    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phi", _check_phi(self.phi))
        object.__setattr__(self, "sigma", _check_permutation(self.sigma))

    @property
    def m(self) -> int:
        return len(self.sigma)


@dataclass(frozen=True)
class MallowsMixtureConfig:
    """A finite Mallows mixture plus the approval depth tau.

    All components must rank the same m items; the weights must be
    non-negative and sum to 1 within ``WEIGHT_TOLERANCE``; tau must lie in
    [1, m].
    """

    components: tuple[MallowsConfig, ...]
    lambdas: tuple[float, ...]
    tau: int

    def __post_init__(self):
        components = tuple(self.components)
        lambdas = tuple(float(w) for w in self.lambdas)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "lambdas", lambdas)
        if not components:
            raise ParameterError("a mixture needs at least one component")
        if len(lambdas) != len(components):
            raise ParameterError("one weight per component is required")
        if any(w < 0 for w in lambdas):
            raise ParameterError("mixture weights must be non-negative")
        if abs(sum(lambdas) - 1.0) > WEIGHT_TOLERANCE:
            raise ParameterError(f"mixture weights sum to {sum(lambdas)}, not 1")
        m = components[0].m
        if any(c.m != m for c in components):
            raise ParameterError("all components must rank the same item set")
        if not 1 <= self.tau <= m:
            raise ParameterError(f"tau = {self.tau} outside [1, m = {m}]")

    @property
    def m(self) -> int:
        return self.components[0].m

    @property
    def gamma(self) -> int:
        return len(self.components)


def kendall_tau(pi: Sequence[int], sigma: Sequence[int]) -> int:
    """Number of item pairs ordered differently by the two rankings."""
    pi = _check_permutation(pi)
    sigma = _check_permutation(sigma, len(pi))
    rank_in_sigma = [0] * len(sigma)
    for pos, item in enumerate(sigma):
        rank_in_sigma[item] = pos
    sequence = [rank_in_sigma[item] for item in pi]
    return _count_inversions(sequence)


def _count_inversions(seq: list[int]) -> int:
    # merge-sort inversion count, O(m log m)
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    count = _count_inversions(left) + _count_inversions(right)
    i = j = out = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            seq[out] = left[i]
            i += 1
        else:
            seq[out] = right[j]
            j += 1
            count += len(left) - i
        out += 1
    seq[out:] = left[i:] + right[j:]
    return count


def mallows_normalizer(phi: float, m: int) -> float:
    """Z(phi, m) = prod_{i=1..m} (1 + phi + ... + phi**(i-1))."""
    phi = _check_phi(phi)
    if m < 1:
        raise ParameterError("m must be at least 1")
    z = 1.0
    term = 0.0
    power = 1.0
    for _ in range(m):
        term += power
        z *= term
        power *= phi
    return z


def mallows_pmf(pi: Sequence[int], config: MallowsConfig) -> float:
    """Exact probability of ``pi`` under ``config``: phi**d / Z."""
    d = kendall_tau(pi, config.sigma)
    if config.phi == 0.0:
        return 1.0 if d == 0 else 0.0
    return config.phi**d / mallows_normalizer(config.phi, config.m)


@lru_cache(maxsize=128)
def _insertion_tables(phi: float, m: int) -> tuple[np.ndarray, ...]:
    """Cumulative insertion weights (1, phi, phi**2, ...) per prefix length."""
    weights = phi ** np.arange(m, dtype=np.float64)
    tables = []
    for length in range(1, m + 1):
        cum = np.cumsum(weights[:length])
        cum.flags.writeable = False
        tables.append(cum)
    return tuple(tables)


def sample_mallows_bottom_up(config: MallowsConfig, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw one ranking by bottom-up repeated insertion.

    Step t (t = 0..m-1) inserts the reference item of rank m-1-t into the
    partial order at position j in {0..t} with probability proportional to
    phi**j, sampled by inverse transform on the exact cumulative weights
    (uniform over positions when phi = 1, always the top when phi = 0).
    """
    m = config.m
    tables = _insertion_tables(config.phi, m)
    pi: list[int] = []
    for t in range(m):
        cum = tables[t]
        j = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        if j > t:
            j = t
        pi.insert(j, config.sigma[m - 1 - t])
    return tuple(pi)


def _sample_rankings(config: MallowsConfig, count: int, rng: np.random.Generator) -> list[list[int]]:
    """Vectorized batch of bottom-up insertion samples (one rng block)."""
    m = config.m
    tables = _insertion_tables(config.phi, m)
    uniforms = rng.random((count, m))
    positions = np.empty((count, m), dtype=np.int64)
    for t in range(m):
        cum = tables[t]
        np.searchsorted(cum, uniforms[:, t] * cum[-1], side="right").clip(max=t, out=positions[:, t])
    sigma = config.sigma
    rankings = []
    for row in positions:
        pi: list[int] = []
        for t in range(m):
            pi.insert(row[t], sigma[m - 1 - t])
        rankings.append(pi)
    return rankings


def sample_mixture_instance(
    config: MallowsMixtureConfig, n: int, k: int, rng: np.random.Generator
) -> Instance:
    """Draw an n-user selection instance from a Mallows mixture.

    Each user draws a component from the mixture weights, samples a
    ranking from it, and approves its top ``config.tau`` items. The group
    partition records the realized component of each user; components that
    received no user are dropped and the remaining blocks keep the
    component order, so the partition never has an empty block.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    gamma = config.gamma
    weights = np.asarray(config.lambdas, dtype=np.float64)
    weights = weights / weights.sum()
    labels = rng.choice(gamma, size=n, p=weights)
    masks = [0] * n
    for g in range(gamma):
        users = np.flatnonzero(labels == g)
        if users.size == 0:
            continue
        rankings = _sample_rankings(config.components[g], users.size, rng)
        for u, ranking in zip(users, rankings):
            mask = 0
            for item in ranking[: config.tau]:
                mask |= 1 << item
            masks[int(u)] = mask
    present = sorted({int(g) for g in labels})
    relabel = {g: idx for idx, g in enumerate(present)}
    assignment = [relabel[int(g)] for g in labels]
    profile = ApprovalProfile.from_masks(masks, config.m)
    return Instance(profile, k, GroupPartition(assignment))


def top_displacement_bound(phi: float, m: int, tau: int, s: int) -> float:
    """Upper bound on the chance that no top-s reference item is sampled
    into the top tau.

    Exact zero when s >= m - tau + 1 (there are too few non-top-s items to
    fill the first tau ranks); otherwise
    ``phi**(tau*s) * (1 - phi**(m - tau))**s / (1 - phi**m)**s`` for
    phi < 1 and ``(1 - tau/m)**s`` for phi = 1.
    """
    phi = _check_phi(phi)
    if m < 1 or not 1 <= tau <= m:
        raise ParameterError(f"tau = {tau} outside [1, m = {m}]")
    if s < 1:
        raise ParameterError("s must be at least 1")
    if s >= m - tau + 1:
        return 0.0
    if phi == 1.0:
        return (1.0 - tau / m) ** s
    return phi ** (tau * s) * (1.0 - phi ** (m - tau)) ** s / (1.0 - phi**m) ** s


def mixture_price_bound(
    k: int, gamma: int, phi_max: float, m: int, tau: int, delta: float
) -> float:
    """High-probability price ceiling for mixture-sampled instances.

    With probability at least 1 - delta over the draw, the exact price of
    JR is at most ``k / (k - q)`` where ``q = gamma * s`` and s is the
    smallest count of per-component top reference items that some user
    approves with high enough probability:
    ``s = max(1, ceil(log(k/delta) / D))`` with
    ``D = log((1 - phi**m) / (phi**tau * (1 - phi**(m - tau))))`` for
    phi < 1 and ``D = log(m / (m - tau))`` for phi = 1. Returns
    ``math.inf`` (the Unbounded marker) when q >= k; as phi -> 0, s -> 1
    and the bound tends to k/(k - gamma).
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    if gamma < 1:
        raise ParameterError("gamma must be at least 1")
    phi_max = _check_phi(phi_max)
    if m < 1 or not 1 <= tau <= m:
        raise ParameterError(f"tau = {tau} outside [1, m = {m}]")
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta = {delta} outside (0, 1)")
    q = gamma * bound_blowup_size(k, phi_max, m, tau, delta)
    if q >= k:
        return math.inf
    return k / (k - q)


def bound_blowup_size(k: int, phi: float, m: int, tau: int, delta: float) -> int:
    """Per-component committee blow-up s entering the price ceiling.

    Smallest s with k * p**s <= delta where p is the top-tau displacement
    rate, floored at 1. Assumes arguments already validated.
    """
    if phi == 0.0:
        return 1
    if phi == 1.0:
        if tau == m:
            return 1
        rate = math.log(m / (m - tau))
    else:
        rate = math.log((1.0 - phi**m) / (phi**tau * (1.0 - phi ** (m - tau))))
    return max(1, math.ceil(math.log(k / delta) / rate))


@dataclass(frozen=True)
class SimulationReport:
    """Per-dispersion greedy price statistics plus the analytic bound.

    ``mean_price[i]`` and ``max_price[i]`` are over the instances at
    ``phi_grid[i]`` whose greedy committee scored above zero; instances
    with a zero greedy score have an undefined price and are only counted
    in ``undefined_counts[i]`` (a grid point where every instance is
    undefined reports NaN). ``bound[i]`` is ``math.inf`` where the analytic
    ceiling is unbounded. ``prices`` keeps the per-instance defined prices
    when the sweep was asked to retain them, else None.
    """

    rule: str
    n: int
    m: int
    k: int
    tau: int
    delta: float
    sims: int
    seed: int
    phi_grid: tuple[float, ...]
    mean_price: tuple[float, ...]
    max_price: tuple[float, ...]
    bound: tuple[float, ...]
    undefined_counts: tuple[int, ...]
    blowup_sizes: tuple[int, ...]
    gamma: int = 2
    prices: tuple[tuple[float, ...], ...] | None = None


def polarized_mixture(phi: float, m: int, tau: int) -> MallowsMixtureConfig:
    """Equal-weight two-component mixture with opposite reference orders."""
    identity = tuple(range(m))
    reverse = tuple(range(m - 1, -1, -1))
    return MallowsMixtureConfig(
        components=(MallowsConfig(phi, identity), MallowsConfig(phi, reverse)),
        lambdas=(0.5, 0.5),
        tau=tau,
    )


def run_price_sweep(
    phi_grid: Sequence[float],
    n: int,
    m: int,
    k: int,
    tau: int,
    sims: int,
    delta: float,
    rule: ScoringRule,
    seed: int,
    reference_rankings: tuple[Sequence[int], Sequence[int]] | None = None,
    keep_prices: bool = False,
) -> SimulationReport:
    """Greedy price of JR across a dispersion grid of polarized mixtures.

    For every phi in ``phi_grid``, draws ``sims`` instances from the
    equal-weight two-component mixture (opposite reference rankings unless
    ``reference_rankings`` overrides them), each with its own RNG stream
    derived from (seed, phi index, instance index), and records the price
    ``score(opt) / score(greedy)`` under ``rule``. Zero greedy scores are
    counted as Undefined and excluded from the mean and max. The analytic
    ceiling at level ``delta`` is evaluated at each grid point.
    """
    if sims < 1:
        raise ParameterError("sims must be at least 1")
    if reference_rankings is None:
        sigma_a: Sequence[int] = tuple(range(m))
        sigma_b: Sequence[int] = tuple(range(m - 1, -1, -1))
    else:
        sigma_a, sigma_b = reference_rankings
    grid = tuple(float(phi) for phi in phi_grid)
    means: list[float] = []
    maxima: list[float] = []
    bounds: list[float] = []
    undefined: list[int] = []
    blowups: list[int] = []
    kept: list[tuple[float, ...]] = []
    for phi_index, phi in enumerate(grid):
        mixture = MallowsMixtureConfig(
            components=(MallowsConfig(phi, tuple(sigma_a)), MallowsConfig(phi, tuple(sigma_b))),
            lambdas=(0.5, 0.5),
            tau=tau,
        )
        prices: list[Score] = []
        missing = 0
        for sim_index in range(sims):
            rng = np.random.Generator(
                np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(phi_index, sim_index)))
            )
            instance = sample_mixture_instance(mixture, n, k, rng)
            top = optimal_set(instance, rule).committee.score
            greedy = greedy_cc(instance, rule).committee.score
            if greedy == 0:
                missing += 1
                continue
            if isinstance(top, float) or isinstance(greedy, float):
                prices.append(top / greedy)
            else:
                prices.append(Fraction(top) / Fraction(greedy))
        if prices:
            means.append(float(sum(prices) / len(prices)))
            maxima.append(float(max(prices)))
        else:
            means.append(math.nan)
            maxima.append(math.nan)
        bounds.append(mixture_price_bound(k, 2, phi, m, tau, delta))
        blowups.append(bound_blowup_size(k, phi, m, tau, float(delta)))
        undefined.append(missing)
        if keep_prices:
            kept.append(tuple(float(p) for p in prices))
    return SimulationReport(
        rule=rule.name,
        n=n,
        m=m,
        k=k,
        tau=tau,
        delta=float(delta),
        sims=sims,
        seed=seed,
        phi_grid=grid,
        mean_price=tuple(means),
        max_price=tuple(maxima),
        bound=tuple(bounds),
        undefined_counts=tuple(undefined),
        blowup_sizes=tuple(blowups),
        gamma=2,
        prices=tuple(kept) if keep_prices else None,
    )
