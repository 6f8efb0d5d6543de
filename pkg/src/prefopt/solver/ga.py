"""Intergenerational genetic search for the best-fit decision vector.

The search maximizes the aggregated preference score Z. Because Z is
z-normalized over the candidates under comparison, its value is context
dependent; the solver therefore keeps a reference set with the best
solution of every generation and re-scores everything jointly each
generation, so comparisons stay meaningful over time. The normalization
context is the archive of every distinct feasible candidate evaluated so
far (a superset of population and reference set): a converged population
alone would shrink the per-column spread and bias the ranking, while the
archive approaches the statistics of the full solution space. In key
mode the search runs as a biased random-key GA (elites, mutants, biased
offspring); in mixed mode it evolves the decision vector directly with
rejection of infeasible offspring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..aggregation import ScoreTable, afine_aggregate, z_normalize
from ..errors import InfeasibilityExhaustedError, InstanceError
from ..model import CandidateEvaluation, ProblemDefinition, evaluate_candidate
from .encoding import KeyEncoding, genotype_key

MAX_REJECTION_ATTEMPTS = 100
INIT_SAMPLE_FACTOR = 200  # sampling budget per population slot before giving up


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    max_generations: int = 100
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    elite_fraction: float = 0.2
    mutant_fraction: float = 0.15
    elite_bias: float = 0.7          # probability an offspring key comes from the elite parent
    rng_seed: int = 0
    stall_generations: int = 25
    initial_solutions: Optional[tuple] = None
    prune_kappa: float = 3.0         # selective re-evaluation cutoff, in std units
    refset_capacity: int = 50

    def __post_init__(self):
        if self.population_size < 4:
            raise InstanceError("population_size must be at least 4")
        if self.max_generations < 1 or self.stall_generations < 1:
            raise InstanceError("generation counts must be positive")
        for name in ("crossover_rate", "mutation_rate", "elite_fraction",
                     "mutant_fraction", "elite_bias"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InstanceError(f"{name} must lie in [0, 1], got {v}")
        if self.elite_fraction + self.mutant_fraction >= 1.0:
            raise InstanceError("elite_fraction + mutant_fraction must stay below 1")
        if self.prune_kappa < 0:
            raise InstanceError("prune_kappa must be nonnegative")


@dataclass
class Individual:
    genotype: object
    x: object
    evaluation: CandidateEvaluation

    @property
    def feasible(self) -> bool:
        return self.evaluation.feasible

    @property
    def acceptable(self) -> bool:
        return self.evaluation.acceptable


@dataclass(frozen=True)
class RefMember:
    x: object
    evaluation: CandidateEvaluation
    generation: int


class ReferenceSet:
    """Best-ranked solution of each generation, deduplicated by decision vector."""

    def __init__(self, capacity: int, key_fn):
        self.capacity = capacity
        self.key_fn = key_fn
        self.members: list[RefMember] = []

    def add(self, member: RefMember, best_key=None) -> None:
        key = self.key_fn(member.x)
        if any(self.key_fn(m.x) == key for m in self.members):
            return
        self.members.append(member)
        if len(self.members) > self.capacity:
            # evict the oldest member that is not the current best
            for i, m in enumerate(self.members):
                if best_key is None or self.key_fn(m.x) != best_key:
                    del self.members[i]
                    break
            else:
                del self.members[0]


def prune_noncompetitive(z_values: Sequence[float], kappa: float) -> tuple[list[int], float]:
    """Indices surviving the selective re-evaluation cutoff mean - kappa*std.

    Statistics run over the finite scores only; candidates without a score
    (infeasible, Z = -inf) never survive unless nothing has a score.
    """
    z = np.asarray(z_values, dtype=float)
    if len(z) == 0 or not np.isfinite(kappa):
        return list(range(len(z))), -np.inf
    finite = z[np.isfinite(z)]
    if len(finite) == 0:
        return list(range(len(z))), -np.inf
    cutoff = float(finite.mean() - kappa * finite.std())
    return [i for i, v in enumerate(z) if v >= cutoff], cutoff


@dataclass(frozen=True)
class TraceRow:
    generation: int
    best_Z: float
    mean_Z: float
    feasible_count: int


@dataclass(frozen=True)
class RunResult:
    best_x: object
    best_Z: float
    best_evaluation: CandidateEvaluation
    trace: tuple[TraceRow, ...]
    evaluations: int
    generations: int
    terminated_by: str  # "max_generations" | "stall"


def write_trace_csv(trace: Sequence[TraceRow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("generation,best_Z,mean_Z,feasible_count\n")
        for row in trace:
            cells = ("" if not np.isfinite(v) else repr(float(v))
                     for v in (row.best_Z, row.mean_Z))
            fh.write(f"{row.generation},{','.join(cells)},{row.feasible_count}\n")


class IntergenerationalGA:
    """One search run; deterministic for a fixed (problem, config, seed)."""

    def __init__(self, problem: ProblemDefinition, config: GaConfig, encoding):
        self.problem = problem
        self.config = config
        self.encoding = encoding
        self.rng = np.random.default_rng(config.rng_seed)
        self.refset = ReferenceSet(config.refset_capacity, problem.encode_x)
        self.trace: list[TraceRow] = []
        self.evaluations = 0
        self._cache: dict[tuple, CandidateEvaluation] = {}
        # archive of distinct feasible candidates: the z-normalization context
        self._archive_index: dict[tuple, int] = {}
        self._archive: list[tuple[object, CandidateEvaluation]] = []
        self._archive_p: list[list[float]] = []
        self.generation = 0
        self.best_key = None
        self.best_streak = 0
        self.population = self._initial_population()

    # -- evaluation ------------------------------------------------------------

    def _evaluate(self, x) -> CandidateEvaluation:
        key = self.problem.encode_x(x)
        hit = self._cache.get(key)
        if hit is None:
            hit = evaluate_candidate(self.problem, x)
            self._cache[key] = hit
            self.evaluations += 1
            if hit.feasible:
                self._archive_index[key] = len(self._archive)
                self._archive.append((x, hit))
                self._archive_p.append([hit.p_values[c] for c in self.problem.columns])
        return hit

    def _make_individual(self, genotype) -> Individual:
        x = self.encoding.decode(genotype)
        return Individual(genotype, x, self._evaluate(x))

    # -- initialization ----------------------------------------------------------

    def _initial_population(self) -> list[Individual]:
        population: list[Individual] = []
        for x in (self.config.initial_solutions or ()):
            # validate the seed as given; the key decoder would silently
            # repair an infeasible one into a different schedule
            seed_eval = self._evaluate(x)
            if not seed_eval.feasible:
                names = seed_eval.feasibility.names()
                raise InstanceError(f"initial solution violates hard constraints: {names}")
            population.append(self._make_individual(self.encoding.encode(x)))
        need = self.config.population_size - len(population)
        if need < 0:
            raise InstanceError("more initial solutions than population slots")
        rejected = 0
        attempts_left = INIT_SAMPLE_FACTOR * self.config.population_size
        violation_names: dict[str, int] = {}
        while need > 0:
            if attempts_left <= 0:
                raise InfeasibilityExhaustedError(
                    "could not sample a feasible initial population",
                    diagnostics={"rejected": rejected, "violations": violation_names},
                )
            attempts_left -= 1
            ind = self._make_individual(self.encoding.sample(self.rng))
            if ind.feasible or isinstance(self.encoding, KeyEncoding):
                population.append(ind)
                need -= 1
            else:
                rejected += 1
                for name in ind.evaluation.feasibility.names():
                    violation_names[name] = violation_names.get(name, 0) + 1
        return population

    # -- ranking ------------------------------------------------------------------

    def _archive_Z(self) -> np.ndarray:
        """Z per archived candidate, z-normalized jointly over the archive."""
        if len(self._archive_p) >= 2:
            table = ScoreTable(self.problem.columns, np.array(self._archive_p))
            return afine_aggregate(z_normalize(table), self.problem.weight_matrix())
        return np.zeros(len(self._archive_p))

    def _z_of(self, ind: Individual, archive_z: np.ndarray) -> float:
        if not ind.feasible:
            return -np.inf
        return float(archive_z[self._archive_index[self.problem.encode_x(ind.x)]])

    def _population_order(self, archive_z: np.ndarray) -> list[int]:
        def sort_key(i):
            ind = self.population[i]
            return (-self._z_of(ind, archive_z), self.problem.encode_x(ind.x),
                    genotype_key(ind.genotype))
        return sorted(range(len(self.population)), key=sort_key)

    def _archive_best(self, archive_z: np.ndarray) -> int | None:
        """Index of the best feasible-acceptable archived candidate; ties go to
        the lexicographically smallest decision encoding."""
        best = None
        best_rank = None
        for key, idx in self._archive_index.items():
            _, ev = self._archive[idx]
            if not ev.acceptable:
                continue
            rank = (-archive_z[idx], key)
            if best_rank is None or rank < best_rank:
                best, best_rank = idx, rank
        return best

    # -- one generation -------------------------------------------------------------

    def step(self) -> TraceRow:
        """Rank the current population within the jointly normalized archive,
        store the generation best in the reference set, and refresh the trace."""
        archive_z = self._archive_Z()
        order = self._population_order(archive_z)

        feasible_count = sum(1 for ind in self.population if ind.feasible)
        pop_z = [self._z_of(ind, archive_z) for ind in self.population if ind.feasible]
        mean_z = float(np.mean(pop_z)) if pop_z else float("nan")

        # generation best: best-ranked acceptable member of the current population
        gen_best_idx = next(
            (i for i in order
             if self.population[i].feasible and self.population[i].acceptable), None)
        best_idx = self._archive_best(archive_z)
        best_z = float(archive_z[best_idx]) if best_idx is not None else float("nan")

        if best_idx is not None:
            key = self.problem.encode_x(self._archive[best_idx][0])
            if key == self.best_key:
                self.best_streak += 1
            else:
                self.best_key = key
                self.best_streak = 1
        if gen_best_idx is not None:
            ind = self.population[gen_best_idx]
            self.refset.add(RefMember(ind.x, ind.evaluation, self.generation),
                            best_key=self.best_key)

        row = TraceRow(self.generation, best_z, mean_z, feasible_count)
        self.trace.append(row)
        self._last_ranked = (archive_z, order)
        return row

    def _breed(self) -> list[Individual]:
        archive_z, order = self._last_ranked
        keep, _ = prune_noncompetitive(
            [self._z_of(self.population[i], archive_z) for i in order],
            self.config.prune_kappa)
        surviving = [order[i] for i in keep]
        if not surviving:
            surviving = list(order)  # degenerate: keep ranking, prune nothing
        pruned = len(order) - len(surviving)

        if isinstance(self.encoding, KeyEncoding):
            return self._breed_keys(surviving, pruned)
        return self._breed_mixed(surviving, pruned)

    def _breed_keys(self, surviving: list[int], pruned: int) -> list[Individual]:
        cfg = self.config
        n = cfg.population_size
        n_elite = max(1, int(cfg.elite_fraction * n))
        n_mutant = int(cfg.mutant_fraction * n) + pruned
        n_mutant = min(n_mutant, n - n_elite)
        n_offspring = n - n_elite - n_mutant

        elites = [self.population[i] for i in surviving[:n_elite]]
        others = [self.population[i] for i in surviving[n_elite:]]
        next_pop = list(elites)
        for _ in range(n_mutant):
            next_pop.append(self._make_individual(self.encoding.sample(self.rng)))
        for _ in range(n_offspring):
            elite = elites[int(self.rng.integers(len(elites)))]
            if others:
                other = others[int(self.rng.integers(len(others)))]
                partner_keys = other.genotype
            else:
                partner_keys = self.encoding.sample(self.rng)
            mask = self.rng.random(self.encoding.length) < cfg.elite_bias
            child = np.where(mask, elite.genotype, partner_keys)
            next_pop.append(self._make_individual(child))
        return next_pop

    def _feasible_variant(self, make_genotype) -> Optional[Individual]:
        for _ in range(MAX_REJECTION_ATTEMPTS):
            ind = self._make_individual(make_genotype())
            if ind.feasible:
                return ind
        return None

    def _breed_mixed(self, surviving: list[int], pruned: int) -> list[Individual]:
        cfg = self.config
        n = cfg.population_size
        n_elite = max(1, int(cfg.elite_fraction * n))
        n_mutant = int(cfg.mutant_fraction * n) + pruned
        n_mutant = min(n_mutant, n - n_elite)
        n_offspring = n - n_elite - n_mutant

        elites = [self.population[i] for i in surviving[:n_elite]]
        pool = [self.population[i] for i in surviving]
        next_pop = list(elites)

        def mutated_elite() -> Individual:
            elite = elites[int(self.rng.integers(len(elites)))]
            repaired = self._feasible_variant(
                lambda: self.encoding.mutate(elite.genotype, self.rng, 1.0))
            return repaired if repaired is not None else elite

        for _ in range(n_mutant):
            fresh = self._feasible_variant(lambda: self.encoding.sample(self.rng))
            next_pop.append(fresh if fresh is not None else mutated_elite())

        def tournament() -> Individual:
            i = int(self.rng.integers(len(pool)))
            j = int(self.rng.integers(len(pool)))
            return pool[min(i, j)]  # pool is rank-sorted

        def offspring_genotype():
            p1, p2 = tournament(), tournament()
            child = p1.genotype
            if self.rng.random() < cfg.crossover_rate:
                child = self.encoding.crossover(p1.genotype, p2.genotype, self.rng)
            return self.encoding.mutate(child, self.rng, cfg.mutation_rate)

        for _ in range(n_offspring):
            child = self._feasible_variant(offspring_genotype)
            next_pop.append(child if child is not None else mutated_elite())
        return next_pop

    # -- full run ----------------------------------------------------------------

    def run(self) -> RunResult:
        terminated_by = "max_generations"
        for gen in range(self.config.max_generations):
            self.generation = gen
            self.step()
            if self.best_key is not None and self.best_streak >= self.config.stall_generations:
                terminated_by = "stall"
                break
            if gen < self.config.max_generations - 1:
                self.population = self._breed()
        return self._final_result(terminated_by)

    def _final_result(self, terminated_by: str) -> RunResult:
        archive_z, _ = self._last_ranked
        best_idx = self._archive_best(archive_z)
        if best_idx is None:
            raise InfeasibilityExhaustedError(
                "no feasible-acceptable candidate found within budget",
                diagnostics={
                    "generations": self.generation + 1,
                    "feasible_seen": len(self._archive),
                    "evaluations": self.evaluations,
                },
            )
        x, evaluation = self._archive[best_idx]
        return RunResult(
            best_x=x,
            best_Z=float(archive_z[best_idx]),
            best_evaluation=evaluation,
            trace=tuple(self.trace),
            evaluations=self.evaluations,
            generations=self.generation + 1,
            terminated_by=terminated_by,
        )


def solve(problem: ProblemDefinition, config: GaConfig, encoding) -> RunResult:
    """Search for the feasible, acceptable candidate with maximum aggregated
    preference, ranked within the union of final population and reference set."""
    return IntergenerationalGA(problem, config, encoding).run()
