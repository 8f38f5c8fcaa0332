"""Random instance builders shared across the test modules."""

import numpy as np

from jrselect import GroupPartition, build_instance


def random_partition(rng, n, gamma_hi=4):
    """Partition of n users into a random number of non-empty blocks."""
    gamma = int(rng.integers(1, min(n, gamma_hi) + 1))
    assignment = list(range(gamma)) + [int(g) for g in rng.integers(0, gamma, size=n - gamma)]
    order = rng.permutation(n)
    return GroupPartition([assignment[i] for i in order])


def random_instance(
    rng,
    n_hi=8,
    m_hi=6,
    k=None,
    groups=False,
    scores=False,
    density=None,
    n_lo=1,
    m_lo=1,
):
    """Instance with uniform sizes and Bernoulli approvals.

    Empty approval sets are allowed; they never form cohesive groups so
    every routine must cope with them.
    """
    n = int(rng.integers(n_lo, n_hi + 1))
    m = int(rng.integers(m_lo, m_hi + 1))
    if k is None:
        k = int(rng.integers(1, m + 1))
    if density is None:
        density = float(rng.uniform(0.2, 0.8))
    matrix = rng.random((n, m)) < density
    approvals = [[int(i) for i in np.flatnonzero(row)] for row in matrix]
    partition = random_partition(rng, n) if groups else None
    external = [float(x) for x in rng.random(m)] if scores else None
    return build_instance(n, m, k, approvals, groups=partition, external_scores=external)


def all_profiles(n, m):
    """Every approval profile on n users and m items, as approval lists.

    There are 2**(n*m) of them; callers keep n*m small.
    """
    for code in range(2 ** (n * m)):
        approvals = []
        for u in range(n):
            row = (code >> (u * m)) & ((1 << m) - 1)
            approvals.append([i for i in range(m) if row >> i & 1])
        yield approvals
