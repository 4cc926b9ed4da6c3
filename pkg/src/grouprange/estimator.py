"""Unbiased weighted-range estimation of the scale parameter.

Given an admissible partition (n_1, ..., n_m) of n, split an ordered
sample of n observations into contiguous blocks of those sizes and
take each block's range R_i.  The estimator

    sigma_hat = sum_i a_i * R_i,
    a_i = (d_{n_i} / k_sq_{n_i}) / sum_l (d_{n_l}**2 / k_sq_{n_l})

is the minimum-variance unbiased estimator among weighted sums of the
block ranges: unbiasedness is the exact identity sum_i a_i d_{n_i} = 1,
and

    Var(sigma_hat) = sigma**2 / sum_l C_{n_l}

so the variance factor is the reciprocal of the allocation objective.
Weights depend only on the block's size, not its position, and the
estimate is invariant under permutations within a block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coefficients import CoefficientTable
from .partitions import Partition

__all__ = ["EstimatorPlan", "make_plan", "estimate", "theoretical_variance"]


@dataclass(frozen=True)
class EstimatorPlan:
    """Exact weights for one partition.

    ``weights`` holds one (block size, weight) pair per subsample in
    canonical order (descending block sizes), aligned with how
    ``estimate`` slices the sample.  ``variance_factor`` is
    Var(sigma_hat) / sigma**2, exact.
    """

    partition: Partition
    weights: tuple[tuple[int, Fraction], ...]
    variance_factor: Fraction


def make_plan(partition: Partition, table: CoefficientTable) -> EstimatorPlan:
    """Exact estimator weights and variance factor for a partition."""
    total = Fraction(0)
    for j, mult in partition.frequencies:
        total += table.c(j) * mult  # raises if j is not covered
    weights = tuple((j, (table.d(j) / table.k_sq(j)) / total) for j in partition.parts)
    # unbiasedness is an algebraic identity; recheck it exactly
    assert sum(a * table.d(j) for j, a in weights) == 1
    return EstimatorPlan(partition, weights, 1 / total)


def estimate(sample: Sequence[float], plan: EstimatorPlan) -> float:
    """Weighted sum of block ranges over a sample of length plan.partition.n.

    Blocks are consumed contiguously in the plan's (descending) order;
    the caller controls which observations land in which block.
    """
    n = plan.partition.n
    if len(sample) != n:
        raise ValueError(f"sample has {len(sample)} observations, plan needs {n}")
    total = 0.0
    position = 0
    for size, weight in plan.weights:
        block = sample[position : position + size]
        position += size
        total += float(weight) * (max(block) - min(block))
    return total


def theoretical_variance(plan: EstimatorPlan, sigma: float) -> float:
    """Var(sigma_hat) = sigma**2 * variance_factor for true scale sigma."""
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    return float(plan.variance_factor) * float(sigma) ** 2
