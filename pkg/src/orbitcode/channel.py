"""Gaussian channel simulation for orbit codes.

Noise is circularly symmetric complex Gaussian: real and imaginary parts of
every component are i.i.d. N(0, sigma^2), so E||n||^2 = 2 * dim * sigma^2.
SNR is quoted against the unit-energy codeword:

    snr_db = -20 log10(sigma * sqrt(2 * dim))

Trials are reproducible and order independent: trial t draws from a Philox
stream keyed by the run seed with the counter advanced to block t, so any
sharding of the trial range over workers produces the same per-trial draws
and the merged statistics are bitwise identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codes import GroupCode
from .decoding import fast_monomial_decode, subgroup_decode


def sigma_from_snr(snr_db: float, dim: int) -> float:
    """Noise scale giving the requested SNR against a unit-norm codeword."""
    return 10.0 ** (-snr_db / 20.0) / math.sqrt(2.0 * dim)


def snr_from_sigma(sigma: float, dim: int) -> float:
    if sigma <= 0:
        raise ValueError("sigma must be positive to quote an SNR")
    return -20.0 * math.log10(sigma * math.sqrt(2.0 * dim))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial.

    Counter-based: the Philox key carries the run seed and the 256-bit
    counter starts at block ``trial << 64``, which spaces trials far beyond
    any single trial's consumption.  Worker processes therefore never need
    to coordinate; trial index alone fixes the draw.
    """
    bitgen = np.random.Philox(key=np.uint64(seed), counter=int(trial) << 64)
    return np.random.Generator(bitgen)


def awgn(dim: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Complex noise vector, each real component N(0, sigma^2)."""
    return rng.normal(scale=sigma, size=2 * dim).view(np.complex128)


@dataclass(frozen=True)
class ChannelConfig:
    """One simulation run: noise level (sigma directly or via snr_db),
    base seed, and number of trials."""

    trials: int
    seed: int = 0
    sigma: float | None = None
    snr_db: float | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if (self.sigma is None) == (self.snr_db is None):
            raise ValueError("give exactly one of sigma and snr_db")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    def sigma_for(self, dim: int) -> float:
        if self.sigma is not None:
            return self.sigma
        return sigma_from_snr(self.snr_db, dim)

    def snr_for(self, dim: int) -> float:
        if self.snr_db is not None:
            return self.snr_db
        return snr_from_sigma(self.sigma, dim)


@dataclass
class SimStats:
    """Counts from a batch of trials.  Merging shards is exact integer
    addition, so worker count cannot change any reported number."""

    snr_db: float
    sigma: float
    seed: int
    trials: int = 0
    errors: int = 0
    factor_diff_hist: dict[int, int] = field(default_factory=dict)
    comparisons_total: int = 0
    ties: int = 0

    @property
    def wer(self) -> float:
        return self.errors / self.trials if self.trials else 0.0

    @property
    def one_factor_fraction(self) -> float:
        """Share of errors that corrupt exactly one canonical factor."""
        if self.errors == 0:
            return 0.0
        return self.factor_diff_hist.get(1, 0) / self.errors

    @property
    def mean_comparisons(self) -> float:
        return self.comparisons_total / self.trials if self.trials else 0.0

    def record(self, factor_diff: int, comparisons: int, tied: bool):
        self.trials += 1
        if factor_diff > 0:
            self.errors += 1
        self.factor_diff_hist[factor_diff] = \
            self.factor_diff_hist.get(factor_diff, 0) + 1
        self.comparisons_total += comparisons
        if tied:
            self.ties += 1

    def merge(self, other: "SimStats") -> "SimStats":
        if (self.seed, self.sigma, self.snr_db) != \
                (other.seed, other.sigma, other.snr_db):
            raise ValueError("cannot merge stats from different configurations")
        out = SimStats(snr_db=self.snr_db, sigma=self.sigma, seed=self.seed)
        out.trials = self.trials + other.trials
        out.errors = self.errors + other.errors
        keys = set(self.factor_diff_hist) | set(other.factor_diff_hist)
        out.factor_diff_hist = {
            k: self.factor_diff_hist.get(k, 0) + other.factor_diff_hist.get(k, 0)
            for k in sorted(keys)
        }
        out.comparisons_total = self.comparisons_total + other.comparisons_total
        out.ties = self.ties + other.ties
        return out

    def csv_row(self) -> str:
        return (f"{self.snr_db:.4f},{self.wer:.8f},"
                f"{self.one_factor_fraction:.8f},{self.mean_comparisons:.4f},"
                f"{self.trials},{self.seed}")

    def to_json(self) -> dict:
        return {
            "snr_db": self.snr_db,
            "sigma": self.sigma,
            "seed": self.seed,
            "trials": self.trials,
            "errors": self.errors,
            "wer": self.wer,
            "one_factor_fraction": self.one_factor_fraction,
            "mean_comparisons": self.mean_comparisons,
            "ties": self.ties,
            "factor_diff_hist": {str(k): v for k, v in
                                 sorted(self.factor_diff_hist.items())},
        }


CSV_HEADER = "snr_db,wer,one_factor_fraction,mean_comparisons,trials,seed"


def _same_message(code: GroupCode, sent, decoded) -> bool:
    """Equality modulo the stabilizer of the initial vector."""
    if sent == decoded:
        return True
    group = code.group
    return code.move(group.mul(group.inv(sent), decoded)) <= code.tau


def _factor_diff(chain, sent, decoded) -> int:
    """Number of stages whose canonical factors differ."""
    a = chain.factorize(sent)
    b = chain.factorize(decoded)
    return sum(1 for c, d in zip(a, b) if c != d)


def simulate(code: GroupCode, chain, config: ChannelConfig,
             decoder: str = "staged",
             trial_range: range | None = None) -> SimStats:
    """Run trials of draw-message / add-noise / decode / compare.

    ``decoder`` is "staged" (the subgroup decoder over the chain's stages)
    or "fast" (the phase-rounding monomial decoder; group must support it).
    ``trial_range`` selects which trial indices this call runs, defaulting
    to range(config.trials); disjoint ranges on different workers merge to
    the same totals as a single sequential run.
    """
    group = code.group
    dim = group.dim
    sigma = config.sigma_for(dim)
    stats = SimStats(snr_db=config.snr_for(dim), sigma=sigma, seed=config.seed)
    if trial_range is None:
        trial_range = range(config.trials)
    staged_cost = sum(len(stage.leaders) for stage in chain.stages)
    for t in trial_range:
        rng = trial_rng(config.seed, t)
        g = group.random_element(rng)
        y = code.encode(g) + awgn(dim, sigma, rng)
        if decoder == "fast":
            res = fast_monomial_decode(group, y)
            decoded, comparisons, tied = res.element, res.comparisons, False
        elif decoder == "staged":
            res = subgroup_decode(group, chain.stages, code.x0, y, code.tau)
            decoded, comparisons, tied = res.element, staged_cost, res.tied
        else:
            raise ValueError(f"unknown decoder {decoder!r}")
        if _same_message(code, g, decoded):
            diff = 0
        else:
            diff = _factor_diff(chain, g, decoded)
        stats.record(diff, comparisons, tied)
    return stats


def merge_stats(parts) -> SimStats:
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to merge")
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    return out


def shard_ranges(trials: int, workers: int) -> list[range]:
    """Split range(trials) into contiguous near-equal pieces."""
    workers = max(1, min(workers, trials))
    step = trials // workers
    extra = trials % workers
    ranges = []
    start = 0
    for i in range(workers):
        size = step + (1 if i < extra else 0)
        ranges.append(range(start, start + size))
        start += size
    return ranges


def _run_shard(args) -> SimStats:
    code, chain, config, decoder, shard = args
    return simulate(code, chain, config, decoder, shard)


def simulate_parallel(code: GroupCode, chain, config: ChannelConfig,
                      decoder: str = "staged", workers: int = 1) -> SimStats:
    """Shard the trial range over processes and merge.

    Per-trial counter seeding makes the result identical to a sequential
    run for any worker count.
    """
    shards = shard_ranges(config.trials, workers)
    if len(shards) <= 1:
        return simulate(code, chain, config, decoder)
    import concurrent.futures

    tasks = [(code, chain, config, decoder, shard) for shard in shards]
    with concurrent.futures.ProcessPoolExecutor(len(shards)) as pool:
        parts = list(pool.map(_run_shard, tasks))
    return merge_stats(parts)
