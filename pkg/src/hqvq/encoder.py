"""Two-stage hybrid nearest-codevector encoder with full query metering.

Stage 1 targets inputs sitting within half the minimum codevector spacing of
some codevector: a single fixed-length amplified search finds the (provably
unique) solution with near-certain probability, and one classical distance
check verifies it.  Stage 2 targets inputs within the configured threshold:
the search is embedded in a growing-cutoff schedule for an unknown number of
solutions; any verified hit is finished by a classical scan of that
codevector's neighbor list, which provably contains the global optimum.
Anything else falls back to the exhaustive classical search.  Every path is
exact; randomness only affects cost, never the returned index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .codebook import Codebook, distances_to_codebook, full_search
from .grover import QueryMeter, marked_set_from_distances, measure
from .neighborhood import NeighborhoodTable


class EncodePath(enum.Enum):
    SUB1 = "sub1"
    SUB2 = "sub2"
    CLASSICAL_FALLBACK = "fallback"


class Region(enum.Enum):
    """Input classification by oracle nearest distance (diagnostic only)."""

    S = "s"
    T_MINUS_S = "t_minus_s"
    I_MINUS_T = "i_minus_t"


@dataclass(frozen=True)
class EncoderConfig:
    """Knobs for the hybrid encoder.

    ``delta_hat`` is the stage-2 verification threshold (must be at least half
    the codebook's minimum pairwise distance; checked against the table at
    encode time).  ``bbht_growth`` scales the iteration cutoff after each
    failed stage-2 round.  ``bbht_budget_factor`` bounds the total stage-2
    search iterations per vector at ceil(factor * sqrt(N)); the schedule alone
    has no stopping rule when no solution exists.
    """

    delta_hat: float
    bbht_growth: float = 6.0 / 5.0
    bbht_budget_factor: float = 3.0
    master_seed: int = 0

    def __post_init__(self):
        if not self.delta_hat > 0:
            raise ValueError("delta_hat must be > 0")
        if not self.bbht_growth > 1:
            raise ValueError("bbht_growth must be > 1")
        if not self.bbht_budget_factor > 0:
            raise ValueError("bbht_budget_factor must be > 0")


@dataclass(frozen=True)
class EncodeOutcome:
    index: int
    dist: float
    path: EncodePath
    meter: QueryMeter


def sub1_iterations(n: int) -> int:
    """Fixed stage-1 iteration count: floor(pi/4 * sqrt(N))."""
    return math.floor(math.pi / 4.0 * math.sqrt(n))


def sub2_budget(n: int, budget_factor: float) -> int:
    return math.ceil(budget_factor * math.sqrt(n))


def encode_sub1(
    x,
    codebook: Codebook,
    rng: np.random.Generator,
    meter: QueryMeter,
    dvec: np.ndarray | None = None,
) -> int | None:
    """Single amplified search at threshold delta0/2, then classical verification.

    Returns the measured index when its verified distance is strictly below
    delta0/2 (it is then the unique global optimum), else None.  ``dvec``
    optionally supplies the precomputed distances the simulator's oracle
    needs; it is never charged to the meter.
    """
    if dvec is None:
        dvec = distances_to_codebook(x, codebook)
    half_delta0 = codebook.delta0 / 2.0
    marked = marked_set_from_distances(dvec, half_delta0)
    i0 = measure(marked, sub1_iterations(codebook.n), rng, meter)
    d0 = float(dvec[i0])
    meter.classical_distance_evals += 1
    if d0 < half_delta0:
        return i0
    return None


def encode_sub2(
    x,
    codebook: Codebook,
    table: NeighborhoodTable,
    cfg: EncoderConfig,
    rng: np.random.Generator,
    meter: QueryMeter,
    dvec: np.ndarray | None = None,
    trace: list | None = None,
) -> int | None:
    """Randomized-cutoff search rounds, each finished by a neighbor-list scan.

    Every round draws j uniformly from {0..floor(m)}, measures after j
    iterations, and classically checks the outcome h.  A verified h
    (d(x, c[h]) < delta_hat) is finished by scanning the neighbors of h: by
    the triangle inequality any codevector outside that list is farther than
    delta_hat, so the scan's argmin is the global optimum.  Rounds stop and
    None is returned (caller falls back) once the next draw would push the
    per-call iteration total past the budget.
    """
    if table.radius_threshold != 2.0 * cfg.delta_hat:
        raise ValueError(
            f"neighborhood table radius {table.radius_threshold} does not match "
            f"2 * delta_hat = {2.0 * cfg.delta_hat}"
        )
    if dvec is None:
        dvec = distances_to_codebook(x, codebook)
    n = codebook.n
    sqrt_n = math.sqrt(n)
    budget = sub2_budget(n, cfg.bbht_budget_factor)
    marked = marked_set_from_distances(dvec, cfg.delta_hat)

    m = 1.0
    spent = 0
    # safety net: the budget only advances on nonzero draws, so bound rounds too
    max_rounds = 64 + 16 * max(1, n.bit_length())
    for _ in range(max_rounds):
        j = int(rng.integers(0, math.floor(m) + 1))
        if spent + j > budget:
            return None
        h = measure(marked, j, rng, meter)
        spent += j
        y0 = float(dvec[h])
        meter.classical_distance_evals += 1
        if trace is not None:
            trace.append({"j": j, "h": h, "y0": y0})
        if y0 < cfg.delta_hat:
            neighbors = table.lists[h]
            meter.classical_distance_evals += len(neighbors)
            local = np.argmin(dvec[neighbors])
            return int(neighbors[local])
        m = min(cfg.bbht_growth * m, sqrt_n)
    return None


def encode(
    x,
    codebook: Codebook,
    table: NeighborhoodTable,
    cfg: EncoderConfig,
    rng: np.random.Generator,
    dvec: np.ndarray | None = None,
    trace: list | None = None,
) -> EncodeOutcome:
    """Full hybrid encode: stage 1, then stage 2, then classical fallback."""
    if dvec is None:
        dvec = distances_to_codebook(x, codebook)
    meter = QueryMeter()
    i = encode_sub1(x, codebook, rng, meter, dvec=dvec)
    if i is not None:
        return EncodeOutcome(index=i, dist=float(dvec[i]), path=EncodePath.SUB1, meter=meter)
    i = encode_sub2(x, codebook, table, cfg, rng, meter, dvec=dvec, trace=trace)
    if i is not None:
        return EncodeOutcome(index=i, dist=float(dvec[i]), path=EncodePath.SUB2, meter=meter)
    i, d = full_search(x, codebook)
    meter.classical_distance_evals += codebook.n
    return EncodeOutcome(index=i, dist=d, path=EncodePath.CLASSICAL_FALLBACK, meter=meter)


def classify_region(x, codebook: Codebook, delta_hat: float) -> Region:
    """Region of the input by its oracle nearest distance (uses full search)."""
    _, d = full_search(x, codebook)
    return region_of(d, codebook.delta0, delta_hat)


def region_of(nearest_dist: float, delta0: float, delta_hat: float) -> Region:
    if nearest_dist < delta0 / 2.0:
        return Region.S
    if nearest_dist < delta_hat:
        return Region.T_MINUS_S
    return Region.I_MINUS_T


def choose_delta_hat(codebook: Codebook, training_sample, percentile: float = 99.0) -> float:
    """Pick the stage-2 threshold so it covers the given share of real inputs.

    Returns the nearest-rank percentile of the sample's nearest-codevector
    distances, clamped to stay strictly above delta0/2.
    """
    if not 0 < percentile <= 100:
        raise ValueError("percentile must be in (0, 100]")
    sample = np.asarray(training_sample, dtype=np.float64)
    if sample.ndim != 2 or sample.shape[0] < 1:
        raise ValueError("training sample must be a non-empty (M, k) array")
    codebook.check_dim(sample[0])
    _, dists = kernels.nearest_many(sample, codebook.vectors)
    dists = np.sort(dists)
    rank = math.ceil(percentile / 100.0 * dists.size)  # nearest-rank, 1-based
    value = float(dists[max(rank, 1) - 1])
    floor_value = float(np.nextafter(codebook.delta0 / 2.0, math.inf))
    return max(floor_value, value)
