"""Differential evolution over curve scalars, maximizing bit entropy.

Classic rand/1/bin DE, specialized to the scalar range [1, n-1]:

* mutation acts on integers mod n: v = (k_r1 + m_r * (k_r2 - k_r3)) mod n,
  with the scaling done in exact rational arithmetic (m_r is a Fraction;
  the scaled difference is rounded to the nearest integer, ties away from
  zero) — doubles cannot represent 256-bit differences;
* crossover acts on the fixed-width binary representations: each position
  independently takes the mutant bit with probability c_r, and position
  j_rand is always taken;
* selection is greedy and strict: the trial replaces its parent only when
  its entropy is strictly higher.  Entropy comparisons are done on exact
  integer bit-counts (lower |ones - zeros| means higher entropy at fixed
  width), so selection never hinges on float rounding.

A trial that decodes outside [1, n-1] simply loses selection; nothing is
re-randomized, so the population always stays valid.

All randomness comes from per-(generation, index) substreams derived from
the run seed, which makes results independent of evaluation order and of
the number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from ecscalar import kernels
from ecscalar.bitcodec import BitString, shannon_entropy, to_bits
from ecscalar.curve import CurveParams
from ecscalar.rng import SplitMix64, bernoulli_threshold, substream

__all__ = [
    "DEConfig",
    "GenerationStat",
    "Individual",
    "OptResult",
    "PopulationTooSmallError",
    "crossover",
    "initialize",
    "mutate",
    "optimize",
    "parse_mutation_factor",
    "random_scalar",
    "select",
    "step_generation",
]

# Generation slot reserved for drawing the initial population.
_INIT_GENERATION = 0


class PopulationTooSmallError(ValueError):
    """Mutation needs three distinct partners besides the target."""


def parse_mutation_factor(value: Fraction | str | float | int) -> Fraction:
    """Coerce a mutation factor to an exact Fraction.

    Strings accept both "4/5" and "0.8"; floats are read through their
    shortest decimal form, so 0.8 means exactly 4/5 rather than the nearest
    binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class DEConfig:
    """Knobs of one optimizer run; hashable and JSON-round-trippable.

    The mutation factor is stored as an exact rational.  ``seed`` is the
    64-bit master seed every substream derives from; two runs with equal
    configs produce identical results.
    """

    population_size: int = 50
    mutation_factor: Fraction = Fraction(4, 5)
    crossover_rate: float = 0.9
    max_generations: int = 100
    seed: int = 0
    early_stop: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "mutation_factor", parse_mutation_factor(self.mutation_factor)
        )
        if self.population_size < 4:
            raise ValueError(
                f"population_size must be >= 4, got {self.population_size}"
            )
        if not 0 < self.mutation_factor < 1:
            raise ValueError(
                f"mutation_factor must be in (0, 1), got {self.mutation_factor}"
            )
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError(
                f"crossover_rate must be in [0, 1], got {self.crossover_rate}"
            )
        if self.max_generations < 1:
            raise ValueError(
                f"max_generations must be >= 1, got {self.max_generations}"
            )
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must be an unsigned 64-bit integer")

    def as_dict(self) -> dict:
        """Echo form used in manifests and config files."""
        return {
            "population_size": self.population_size,
            "mutation_factor": str(self.mutation_factor),
            "crossover_rate": self.crossover_rate,
            "max_generations": self.max_generations,
            "seed": self.seed,
            "early_stop": self.early_stop,
        }


@dataclass(frozen=True)
class Individual:
    """One candidate scalar with its cached fitness."""

    scalar: int
    width: int
    fitness: float

    @classmethod
    def from_scalar(cls, scalar: int, width: int) -> "Individual":
        return cls(scalar, width, shannon_entropy(to_bits(scalar, width)))

    @property
    def imbalance(self) -> int:
        """|ones - zeros| of the width-bit representation (exact)."""
        return abs(2 * self.scalar.bit_count() - self.width)


class GenerationStat(NamedTuple):
    generation: int
    best_entropy: float
    mean_entropy: float


@dataclass(frozen=True)
class OptResult:
    k_opt: int
    best_entropy: float
    history: tuple[GenerationStat, ...]
    generations_run: int
    config: DEConfig
    width: int
    population: tuple[int, ...] = field(repr=False, default=())


def _draw_scalar(stream: SplitMix64, n: int) -> int:
    # Rejection sampling on bit_length(n)-bit draws keeps [1, n-1] uniform.
    bits = n.bit_length()
    while True:
        v = stream.next_bits(bits)
        if 1 <= v <= n - 1:
            return v


def random_scalar(curve: CurveParams, rng: SplitMix64) -> int:
    """Uniform scalar in [1, n-1]; the plain-PRNG baseline for benchmarks."""
    return _draw_scalar(rng, curve.n)


def initialize(config: DEConfig, n: int, width: int | None = None) -> list[Individual]:
    """Draw the initial population, one substream per slot.

    Individual i comes from substream (seed, 0, i), so the initial
    population is a pure function of the config.
    """
    if n < 5:
        raise ValueError(f"scalar range [1, n-1] too small: n = {n}")
    w = width if width is not None else n.bit_length()
    out = []
    for i in range(config.population_size):
        stream = substream(config.seed, _INIT_GENERATION, i)
        out.append(Individual.from_scalar(_draw_scalar(stream, n), w))
    return out


def _round_ratio(num: int, den: int) -> int:
    """Nearest integer of num/den (den > 0), ties rounded away from zero."""
    q, r = divmod(abs(num), den)
    if 2 * r >= den:
        q += 1
    return q if num >= 0 else -q


def mutate(
    population: Sequence[Individual],
    i: int,
    m_r: Fraction,
    n: int,
    rng: SplitMix64,
) -> int:
    """rand/1 mutant for slot i: (k_r1 + m_r*(k_r2 - k_r3)) mod n.

    r1, r2, r3 are drawn distinct and different from i.  The result may be 0
    (all mutants are legal crossover input); invalid trials are weeded out
    later by selection.
    """
    m = len(population)
    if m < 4:
        raise PopulationTooSmallError(
            f"population of {m} cannot supply 3 distinct partners"
        )
    r1 = rng.next_below(m)
    while r1 == i:
        r1 = rng.next_below(m)
    r2 = rng.next_below(m)
    while r2 in (i, r1):
        r2 = rng.next_below(m)
    r3 = rng.next_below(m)
    while r3 in (i, r1, r2):
        r3 = rng.next_below(m)
    diff = population[r2].scalar - population[r3].scalar
    scaled = _round_ratio(m_r.numerator * diff, m_r.denominator)
    return (population[r1].scalar + scaled) % n


def crossover(
    target: BitString,
    mutant: BitString,
    c_r: float,
    rng: SplitMix64,
    impl=None,
) -> BitString:
    """Binomial crossover: per-position Bernoulli(c_r) choice of mutant bit,
    with position j_rand forced from the mutant.

    Draws j_rand plus exactly ``width`` mask draws from ``rng``; the mask
    generation runs in the compiled kernel when available.
    """
    if target.width != mutant.width:
        raise ValueError(
            f"width mismatch: target {target.width}, mutant {mutant.width}"
        )
    width = target.width
    j_rand = rng.next_below(width)
    mask, rng.state = kernels.crossover_fill(
        rng.state, width, bernoulli_threshold(c_r), j_rand, impl=impl
    )
    trial = (mutant.value & mask) | (target.value & ~mask)
    return BitString(trial, width)


def select(parent: Individual, trial: Individual) -> Individual:
    """Greedy selection; the trial must be strictly better, ties keep the
    parent.  Compared on exact integer imbalance, which orders entropies
    without touching floats."""
    if parent.width != trial.width:
        raise ValueError("cannot compare individuals of different widths")
    return trial if trial.imbalance < parent.imbalance else parent


def _propose(
    scalars: Sequence[Individual],
    i: int,
    config: DEConfig,
    n: int,
    width: int,
    generation: int,
    impl,
) -> Individual | None:
    """Trial for slot i, or None when it decodes outside [1, n-1]."""
    stream = substream(config.seed, generation, i)
    v = mutate(scalars, i, config.mutation_factor, n, stream)
    trial_bits = crossover(
        to_bits(scalars[i].scalar, width),
        to_bits(v, width),
        config.crossover_rate,
        stream,
        impl=impl,
    )
    if not 1 <= trial_bits.value <= n - 1:
        return None
    return Individual.from_scalar(trial_bits.value, width)


def step_generation(
    population: Sequence[Individual],
    config: DEConfig,
    n: int,
    width: int,
    generation: int,
    executor: ThreadPoolExecutor | None = None,
    impl=None,
) -> list[Individual]:
    """One synchronous DE generation: all trials are built against a snapshot
    of the current population, then selection runs slot by slot."""
    snapshot = tuple(population)

    def build(i: int) -> Individual | None:
        return _propose(snapshot, i, config, n, width, generation, impl)

    if executor is None:
        trials = [build(i) for i in range(len(snapshot))]
    else:
        trials = list(executor.map(build, range(len(snapshot))))
    return [
        parent if trial is None else select(parent, trial)
        for parent, trial in zip(snapshot, trials)
    ]


def _stat(generation: int, population: Sequence[Individual]) -> GenerationStat:
    fits = [ind.fitness for ind in population]
    return GenerationStat(generation, max(fits), sum(fits) / len(fits))


def optimize(
    config: DEConfig,
    curve: CurveParams,
    width: int | None = None,
    workers: int = 1,
    impl=None,
) -> OptResult:
    """Run the full search and return the best scalar found.

    ``width`` defaults to bit_length(n), which makes every scalar in
    [1, n-1] representable; overrides below that are rejected.  With
    ``early_stop`` the loop exits as soon as some individual reaches the
    maximal entropy achievable at this width (perfect balance for even
    widths).  ``workers`` only distributes the trial evaluations; results
    are identical for any worker count.
    """
    n = curve.n
    w = width if width is not None else n.bit_length()
    if w < n.bit_length():
        raise ValueError(
            f"width {w} cannot represent scalars up to n-1 "
            f"(need >= {n.bit_length()})"
        )
    # Lowest reachable |ones - zeros| at this width: 0 when even, 1 when odd.
    target_imbalance = w % 2

    population = initialize(config, n, w)
    history = [_stat(0, population)]
    generations_run = 0

    def converged() -> bool:
        return config.early_stop and any(
            ind.imbalance == target_imbalance for ind in population
        )

    executor = None
    try:
        if workers > 1:
            executor = ThreadPoolExecutor(max_workers=workers)
        if not converged():
            for t in range(1, config.max_generations + 1):
                population = step_generation(
                    population, config, n, w, t, executor, impl
                )
                generations_run = t
                history.append(_stat(t, population))
                if converged():
                    break
    finally:
        if executor is not None:
            executor.shutdown()

    best = min(population, key=lambda ind: ind.imbalance)
    return OptResult(
        k_opt=best.scalar,
        best_entropy=best.fitness,
        history=tuple(history),
        generations_run=generations_run,
        config=config,
        width=w,
        population=tuple(ind.scalar for ind in population),
    )
