"""Systematic-scan Gibbs sampler over attack assignments.

Each sweep resamples every free variable in lexicographic order from its full
conditional (prior factor times the likelihood of all observations, with all
other bits at their freshest values). One assignment is recorded per sweep;
samples after the burn-in form the histogram. Seeding uses numpy
SeedSequence, with per-chain substreams so multi-chain runs stay reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import model
from .errors import DegenerateEvidenceError, InputError
from .inference import (
    AttackVariableSpace,
    Assignment,
    Observation,
    PosteriorDistribution,
    acceptability_likelihood,
)


@dataclass(frozen=True)
class GibbsConfig:
    iterations: int = 10_000
    burn_in: int = 1_000
    seed: int = 0
    chains: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise InputError("iterations must be positive")
        if not 0 <= self.burn_in < self.iterations:
            raise InputError("burn-in must satisfy 0 <= B < I")
        if self.chains < 1:
            raise InputError("chains must be positive")


@dataclass
class SampleHistogram:
    """Occurrence counts of assignments sampled after burn-in, plus a
    per-iteration flag marking sweeps that produced a previously unseen
    assignment (flags from multiple chains are concatenated in chain order)."""

    counts: dict[Assignment, int] = field(default_factory=dict)
    new_flags: list[int] = field(default_factory=list)
    iterations: int = 0
    burn_in: int = 0
    chains: int = 1

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_posterior(self) -> PosteriorDistribution:
        total = self.total
        entries = {att: c / total for att, c in self.counts.items()}
        return PosteriorDistribution(entries=entries, kind="sampled")


def gibbs_conditional(m: int, current: Assignment, obs: list[Observation],
                      space: AttackVariableSpace,
                      cfg: model.ModelConfig) -> tuple[float, float]:
    """Normalized (p0, p1) for variable m given all other bits of ``current``."""
    if m in {i for i, _ in space.clamps}:
        raise InputError(f"variable {m} is clamped and cannot be resampled")
    lam = space.priors[m]
    logp = [math.log(1 - lam) if lam < 1 else -math.inf,
            math.log(lam) if lam > 0 else -math.inf]
    for b in (0, 1):
        if logp[b] == -math.inf:
            continue
        att_b = current[:m] + (b,) + current[m + 1:]
        for o in obs:
            p = acceptability_likelihood(o.label, o.subset, att_b, space, cfg)
            if p == 0.0:
                logp[b] = -math.inf
                break
            logp[b] += o.weight * math.log(p)
    if logp[0] == -math.inf and logp[1] == -math.inf:
        raise DegenerateEvidenceError(
            f"both values of variable {m} have zero conditional mass")
    if logp[0] == -math.inf:
        return 0.0, 1.0
    if logp[1] == -math.inf:
        return 1.0, 0.0
    p1 = 1.0 / (1.0 + math.exp(logp[0] - logp[1]))
    return 1.0 - p1, p1


def _run_chain(obs, space, cfg, iterations, burn_in, rng):
    free = space.free_indices
    clamp = space.clamp_map
    state = [clamp.get(i, 0) for i in range(len(space.variables))]
    init = rng.integers(0, 2, size=len(free))
    for i, b in zip(free, init):
        state[i] = int(b)

    counts: dict[Assignment, int] = {}
    seen: set[Assignment] = set()
    new_flags: list[int] = []
    for it in range(1, iterations + 1):
        for m in free:
            current = tuple(state)
            _, p1 = gibbs_conditional(m, current, obs, space, cfg)
            state[m] = 1 if rng.random() < p1 else 0
        sample = tuple(state)
        if sample in seen:
            new_flags.append(0)
        else:
            seen.add(sample)
            new_flags.append(1)
        if it > burn_in:
            counts[sample] = counts.get(sample, 0) + 1
    return counts, new_flags


def run_gibbs(obs: list[Observation], space: AttackVariableSpace,
              cfg: model.ModelConfig, g: GibbsConfig) -> SampleHistogram:
    """Algorithm: random initial assignment, I full sweeps, histogram over
    the post-burn-in samples. Identical seed and inputs give identical output."""
    hist = SampleHistogram(iterations=g.iterations, burn_in=g.burn_in,
                           chains=g.chains)
    streams = np.random.SeedSequence(g.seed).spawn(g.chains)
    for ss in streams:
        rng = np.random.default_rng(ss)
        counts, flags = _run_chain(obs, space, cfg, g.iterations, g.burn_in, rng)
        for att, c in counts.items():
            hist.counts[att] = hist.counts.get(att, 0) + c
        hist.new_flags.extend(flags)
    return hist


def convergence_trace(hist: SampleHistogram) -> list[int]:
    """Cumulative count of distinct assignments seen through each iteration."""
    out = []
    total = 0
    for f in hist.new_flags:
        total += f
        out.append(total)
    return out
