"""
Closed-form sample-size targets, error bounds and the stopping-rule estimator.

Every tracker sizes its RR set pools from the constants below:

    upsilon(eps, delta)  = 4 (e - 2) ln(2 / delta) / eps^2
    upsilon1(eps, delta) = 1 + (1 + eps) upsilon(eps, delta)

All values are computed in double precision; ceilings are only taken by the
target helpers through `guarded_ceil`.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from influencescope.core.errors import (InvariantViolation,
                                       SamplingExhaustedError)

logger = logging.getLogger(__name__)

# relative slack removed before a ceiling, so that float drift just above an
# integer does not bump a target by one
CEIL_GUARD = 1e-9

EpsDelta = namedtuple('EpsDelta', ['eps', 'delta'])
SizeTargets = namedtuple('SizeTargets', ['d1_target', 'm2_ratio'])


def check_eps_delta(eps, delta, tracker=False):
    """
    Validate an (eps, delta) pair.

    Arguments:
        eps (float): relative error, must be positive
        delta (float): failure probability, must lie in (0, 1)
        tracker (bool): additionally enforce eps <= 1/3 and delta <= 1/4,
            which the top-k error bound needs
    """
    if not eps > 0:
        raise ValueError(f'eps must be positive, but got {eps}')
    if not 0 < delta < 1:
        raise ValueError(f'delta must be in (0, 1), but got {delta}')
    if tracker and (eps > 1 / 3 or delta > 1 / 4):
        raise ValueError(
            f'trackers require eps <= 1/3 and delta <= 1/4, but got eps={eps}, delta={delta}'
        )
    return EpsDelta(float(eps), float(delta))


def guarded_ceil(value):
    return int(math.ceil(value - CEIL_GUARD * abs(value)))


def upsilon(eps, delta):
    eps, delta = check_eps_delta(eps, delta)
    return 4 * (math.e - 2) * math.log(2 / delta) / eps**2


def upsilon1(eps, delta):
    return 1 + (1 + eps) * upsilon(eps, delta)


def log_binomial(n, k):
    """
    ln C(n, k) as a sum of logarithms, never through factorials.
    """
    if not 0 <= k <= n:
        raise ValueError(f'log_binomial needs 0 <= k <= n, but got n={n}, k={k}')
    if k == 0:
        return 0.0
    upper = np.log(np.arange(n - k + 1, n + 1, dtype=np.float64))
    lower = np.log(np.arange(1, k + 1, dtype=np.float64))
    return float(math.fsum(upper) - math.fsum(lower))


def topk_degree_target(eps, delta, n):
    """
    The invariant D_1^k = ceil(upsilon1(eps, delta / n)) kept by the top-k tracker.
    """
    if n < 1:
        raise ValueError(f'the graph needs at least one vertex, but got n={n}')
    return guarded_ceil(upsilon1(eps, delta / n))


def im_targets(eps, delta, n, k_max, mode='practical'):
    """
    Sizing of the influence maximization tracker.

    Arguments:
        eps (float): relative error of the sizing
        delta (float): failure probability (ignored by the practical mode,
            which fixes it to 2 / (3 n^2))
        n (int): number of vertices
        k_max (int): largest seed set size a query may ask for
        mode (str): 'practical' keeps one pool with
            D* = ceil(ceil(upsilon1(eps / (2 - 1/e), 2 / (3 n^2))) / 2);
            'theoretical' keeps D_1* = ceil(upsilon1(eps, 2 delta / (3 n)))
            and M_2 = M_1 ln(3N / (2 delta)) / ln(2n / delta), N = C(n, k_max)

    Returns:
        SizeTargets
    """
    if n < 1:
        raise ValueError(f'the graph needs at least one vertex, but got n={n}')
    if k_max < 1 or k_max > n / 2:
        raise ValueError(
            f'k_max must satisfy 1 <= k_max <= n/2, but got k_max={k_max}, n={n}'
        )
    if mode == 'practical':
        inner = guarded_ceil(
            upsilon1(eps / (2 - 1 / math.e), 2 / (3 * float(n)**2)))
        return SizeTargets(d1_target=int(math.ceil(inner / 2)), m2_ratio=1.0)
    elif mode == 'theoretical':
        check_eps_delta(eps, delta)
        d1_target = guarded_ceil(upsilon1(eps, 2 * delta / (3 * n)))
        log_n_sets = log_binomial(n, k_max)
        ratio = (log_n_sets + math.log(3 / (2 * delta))) / math.log(
            2 * n / delta)
        return SizeTargets(d1_target=d1_target, m2_ratio=ratio)
    else:
        raise ValueError(
            f"mode must be chosen from ['practical', 'theoretical'], but got {mode}"
        )


def topk_error_bound(eps, delta, n):
    """
    Largest relative error (I^k - I_u) / I^k of a false positive returned by
    the top-k tracker.
    """
    check_eps_delta(eps, delta, tracker=True)
    if n < 1:
        raise ValueError(f'the graph needs at least one vertex, but got n={n}')
    b = 4 * (math.e - 2) * math.log(2 * n / delta)
    bound = 1 - ((1 - eps**2 / b) * (1 - eps)**2 / (1 + eps) - eps)
    if bound > 61 / 15 * eps + CEIL_GUARD:
        raise InvariantViolation(f'error bound {bound} exceeds 61/15 * eps')
    return bound


def im_approximation_ratio(eps):
    """
    Approximation constant 1 - 1/e - (2 - 1/e) eps of the IM tracker.
    """
    return 1 - 1 / math.e - (2 - 1 / math.e) * eps


def baseline_cost_target(n, m):
    """
    Pool cost 32 (m + n) log2(n) maintained by the cost-driven sizing policy;
    only used to report how many more traversals that policy would pay.
    """
    if n < 2:
        return 0.0
    return 32.0 * (m + n) * math.log2(n)


def stopping_rule_estimate(sampler, eps, delta, max_draws=None):
    """
    Estimate the mean of a Bernoulli source with relative error eps.

    Draws are taken until the number of positive outcomes reaches
    ceil(upsilon1(eps, delta)); the estimate is that count divided by the
    number of draws.

    Arguments:
        sampler: an iterable of {0, 1} outcomes, or a zero-argument callable
            returning one outcome per call
        eps (float): relative error
        delta (float): failure probability
        max_draws (int): optional hard cap on the number of draws

    Returns:
        (estimate, num_draws)
    """
    target = guarded_ceil(upsilon1(eps, delta))
    if callable(sampler):
        draws = iter(sampler, None)
    else:
        draws = iter(sampler)

    num_positive, num_draws = 0, 0
    while num_positive < target:
        if max_draws is not None and num_draws >= max_draws:
            raise SamplingExhaustedError(
                f'reached the cap of {max_draws} draws with {num_positive}/{target} positives',
                num_samples=num_draws,
                num_positive=num_positive)
        try:
            outcome = next(draws)
        except StopIteration:
            raise SamplingExhaustedError(
                f'sampler exhausted after {num_draws} draws with {num_positive}/{target} positives',
                num_samples=num_draws,
                num_positive=num_positive)
        num_draws += 1
        if outcome:
            num_positive += 1

    return target / num_draws, num_draws
