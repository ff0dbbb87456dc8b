"""Training-set balancing: synthetic minority oversampling + majority undersampling.

Binary attributes make numeric interpolation degenerate, so each synthetic
vector copies every attribute independently from a source drawn uniformly
among the seed and its k nearest minority neighbors (Hamming distance).
With the default 100% over- and 200% under-sampling rates the output is an
exact 50/50 split of minority and majority vectors.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Sequence

from lowrisk.discretize import LABEL_FAULTY, ItemVector
from lowrisk.errors import ImbalanceUnachievableWarning, InsufficientMinorityError


@dataclass(frozen=True)
class BalanceConfig:
    percent_over: int = 100
    percent_under: int = 200
    k_neighbors: int = 5
    rng_seed: int = 0

    def __post_init__(self):
        if self.percent_over <= 0 or self.percent_under <= 0:
            raise ValueError("over- and under-sampling rates must be positive")
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be at least 1")


def _nearest_neighbors(vectors: Sequence[ItemVector], k: int) -> list[list[int]]:
    """Indices of each vector's k nearest peers by Hamming distance;
    ties break on index order."""
    masks = []
    for v in vectors:
        mask = 0
        for idx, on in enumerate(v.items):
            if on:
                mask |= 1 << idx
        masks.append(mask)
    n = len(vectors)
    out = []
    for i in range(n):
        mi = masks[i]
        dists = [((mi ^ masks[j]).bit_count(), j) for j in range(n) if j != i]
        dists.sort()
        out.append([j for _, j in dists[:k]])
    return out


def balance(training: Sequence[ItemVector], cfg: BalanceConfig) -> list[ItemVector]:
    """Balance a training set to a 50/50 class split (at default rates).

    The minority class is oversampled by percent_over (synthetic vectors in
    addition to the originals); the majority class is uniformly undersampled
    without replacement to percent_under percent of the synthetic count.
    When the majority pool is smaller than that target, the deficit is
    resampled with replacement so the output split still holds. Fully
    deterministic given cfg.rng_seed.
    """
    minority = [v for v in training if v.label_item == LABEL_FAULTY]
    majority = [v for v in training if v.label_item != LABEL_FAULTY]
    if len(minority) > len(majority):
        minority, majority = majority, minority
    m = len(minority)
    if m < cfg.k_neighbors + 1:
        raise InsufficientMinorityError(
            f"need at least {cfg.k_neighbors + 1} minority vectors, got {m}"
        )
    if not majority:
        raise InsufficientMinorityError("no majority vectors to sample from")

    rng = random.Random(cfg.rng_seed)
    n_synthetic = (cfg.percent_over * m) // 100
    per_seed, extra = divmod(n_synthetic, m)
    extra_seeds = set(rng.sample(range(m), extra)) if extra else set()
    neighbors = _nearest_neighbors(minority, cfg.k_neighbors)

    synthetic: list[ItemVector] = []
    for idx, seed_vec in enumerate(minority):
        rounds = per_seed + (1 if idx in extra_seeds else 0)
        sources = [seed_vec] + [minority[j] for j in neighbors[idx]]
        for _ in range(rounds):
            items = tuple(
                sources[rng.randrange(len(sources))].items[a]
                for a in range(len(seed_vec.items))
            )
            synthetic.append(ItemVector(items, seed_vec.label_item))

    n_majority = (cfg.percent_under * len(synthetic)) // 100
    if n_majority > len(majority):
        warnings.warn(
            f"majority pool ({len(majority)}) smaller than requested sample "
            f"({n_majority}); resampling the deficit with replacement",
            ImbalanceUnachievableWarning,
            stacklevel=2,
        )
        sampled = list(majority)
        sampled.extend(
            majority[rng.randrange(len(majority))] for _ in range(n_majority - len(majority))
        )
    else:
        sampled = [majority[i] for i in sorted(rng.sample(range(len(majority)), n_majority))]
    return list(minority) + synthetic + sampled
