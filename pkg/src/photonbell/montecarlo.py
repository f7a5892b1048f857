"""Ideal-detector simulation of polarization coincidence records.

Random streams
--------------
Every stream is Philox4x64-10 (numpy's ``Philox`` bit generator) keyed by
``seed + 2**64 * stream_id`` with the counter starting at zero.  Uniform
variates are built here from the raw 64-bit words as ``(word >> 11) * 2**-53``,
so the stream does not depend on numpy's distribution code.  A run with
``shards`` shards draws shard ``j`` of setting ``i`` from
``stream_id = (i << 32) | j``; the shard count is therefore part of the
reproducibility key and is recorded in each estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .amplitude import ProcessKind
from .bell import AngleQuad, s_statistic
from .closed_form import quadruple
from .errors import InputValidationError
from .kinematics import check_beta

GENERATOR = "philox4x64-10"
MAX_SEED = 2**64 - 1

ALIGNED = 0
ORTHOGONAL = 1


class OutcomePair(NamedTuple):
    """Per-photon result: ``ALIGNED`` (passed the analyzer) or ``ORTHOGONAL``."""

    first: int
    second: int

    @property
    def code(self) -> int:
        return 2 * self.first + self.second


def decode(codes) -> list[OutcomePair]:
    return [OutcomePair(int(c) >> 1, int(c) & 1) for c in codes]


def _check_seed(seed) -> int:
    seed = int(seed)
    if not (0 <= seed <= MAX_SEED):
        raise InputValidationError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def uniform_stream(seed: int, stream_id: int, n: int) -> np.ndarray:
    """``n`` uniforms on [0, 1) from the keyed Philox stream."""
    bitgen = np.random.Philox(key=_check_seed(seed) + (int(stream_id) << 64))
    words = bitgen.random_raw(n)
    return (words >> np.uint64(11)).astype(np.float64) * (1.0 / 2**53)


def _shard_sizes(n: int, shards: int) -> list[int]:
    base, extra = divmod(n, shards)
    return [base + (1 if j < extra else 0) for j in range(shards)]


def sample_outcomes(
    process, beta: float, chi1: float, chi2: float, n: int, seed: int, *, setting: int = 0, shards: int = 1
) -> np.ndarray:
    """Draw ``n`` outcome codes ``2*first + second`` by inverse CDF on the four-outcome law.

    Code 0 is (aligned, aligned), 1 (aligned, orthogonal), 2 (orthogonal,
    aligned), 3 (orthogonal, orthogonal).
    """
    process = ProcessKind.parse(process)
    beta = check_beta(beta)
    if int(n) < 1:
        raise InputValidationError(f"n must be >= 1, got {n!r}")
    if int(shards) < 1:
        raise InputValidationError(f"shards must be >= 1, got {shards!r}")
    probs = quadruple(process, beta, chi1, chi2)
    cdf = np.cumsum(probs)[:3]
    parts = []
    for j, size in enumerate(_shard_sizes(int(n), int(shards))):
        if size:
            u = uniform_stream(seed, (int(setting) << 32) | j, size)
            parts.append(np.searchsorted(cdf, u, side="right").astype(np.uint8))
    return np.concatenate(parts)


def frequencies(codes: np.ndarray) -> np.ndarray:
    counts = np.bincount(codes, minlength=4).astype(float)
    return counts / counts.sum()


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate of the Bell-CH statistic.

    ``p_hat`` holds the four joint terms in S order and ``marginals`` the two
    single-photon terms; ``frequencies`` has one four-outcome histogram per
    setting (each sums to 1).  ``se`` are binomial standard errors of the six
    terms and ``s_se`` their propagated combination.
    """

    n: int
    p_hat: tuple[float, float, float, float]
    marginals: tuple[float, float]
    s_hat: float
    se: tuple[float, ...]
    s_se: float
    s_exact: float
    frequencies: tuple[tuple[float, float, float, float], ...]
    process: ProcessKind
    beta: float
    quad: AngleQuad
    seed: int
    shards: int
    generator: str = GENERATOR


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n) if n >= 2 else math.inf


def estimate_s(process, beta: float, q: AngleQuad, n_per_setting: int, seed: int, *, shards: int = 1) -> McEstimate:
    """Run four joint and two single-photon settings and form the S estimate.

    Settings 0-3 are ``(c1, c2), (c1, c2'), (c1', c2), (c1', c2')`` and score
    (aligned, aligned).  Setting 4 runs ``(c1', c2)`` and scores only photon 1;
    setting 5 runs ``(c1, c2)`` and scores only photon 2.  Each setting uses its
    own stream, so the six estimates are independent.
    """
    process = ProcessKind.parse(process)
    beta = check_beta(beta)
    q = AngleQuad(*q)
    seed = _check_seed(seed)
    n = int(n_per_setting)
    if n < 100:
        raise InputValidationError(f"n_per_setting must be >= 100, got {n_per_setting!r}")
    c1, c2, c1p, c2p = q
    settings = [(c1, c2), (c1, c2p), (c1p, c2), (c1p, c2p), (c1p, c2), (c1, c2)]
    freqs = []
    for i, (a, b) in enumerate(settings):
        codes = sample_outcomes(process, beta, a, b, n, seed, setting=i, shards=shards)
        freqs.append(frequencies(codes))
    p_hat = tuple(float(f[0]) for f in freqs[:4])
    m_first = float(freqs[4][0] + freqs[4][1])
    m_second = float(freqs[5][0] + freqs[5][2])
    terms = (p_hat[0], -p_hat[1], p_hat[2], p_hat[3], -m_first, -m_second)
    se = tuple(_binomial_se(abs(t), n) for t in terms)
    s_hat = sum(terms)
    return McEstimate(
        n=n,
        p_hat=p_hat,
        marginals=(m_first, m_second),
        s_hat=s_hat,
        se=se,
        s_se=math.sqrt(sum(e * e for e in se)),
        s_exact=s_statistic(process, beta, q).s,
        frequencies=tuple(tuple(float(x) for x in f) for f in freqs),
        process=process,
        beta=beta,
        quad=q,
        seed=seed,
        shards=int(shards),
    )
