"""Monte Carlo residual minimization, region walks, Haar scans, alpha continuation."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels, linalg, measures, sampler

OBJECTIVES = ("ss", "monogamy2")
# fixed partition size so scan results never depend on the worker count
SCAN_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class SearchConfig:
    alpha: float = 2.0
    objective: str = "ss"
    layout: measures.PairingLayout = measures.CANONICAL_LAYOUT
    delta0: float = 0.5
    counter_max: int = 1000
    delta_min: float = 1e-4
    rng: sampler.RngSeed = sampler.RngSeed(0, 0)
    seed_state: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", measures.normalize_alpha(self.alpha))
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        # delta0 below delta_min is legal: the run evaluates its seed and stops
        if not (self.delta0 > 0.0 and self.delta_min > 0.0):
            raise ValueError("delta0 and delta_min must both be positive")
        if self.counter_max < 1:
            raise ValueError(f"counter_max must be >= 1, got {self.counter_max}")
        if self.seed_state is not None:
            state = linalg.as_state(self.seed_state)
            if state.shape[0] != 16:
                raise ValueError("seed_state must be a 4-qubit state")
            object.__setattr__(self, "seed_state", state)


@dataclass(frozen=True, eq=False)
class TraceEntry:
    """One accepted state; the seed is entry 0 with states_since_accept = 0."""

    step: int
    delta: float
    state: np.ndarray
    ss_residual: float
    monogamy_residual: float
    states_since_accept: int


@dataclass(frozen=True, eq=False)
class RunRecord:
    config: SearchConfig
    trace: tuple
    final_state: np.ndarray
    final_residuals: measures.ResidualReport
    total_states_generated: int
    final_delta: float


@dataclass(frozen=True)
class ContinuationSchedule:
    alphas: tuple
    delta0: float = 1e-2
    delta_min: float = 1e-8

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas:
            raise ValueError("schedule needs at least one alpha")
        if any(a <= 1.0 for a in alphas):
            raise ValueError(f"every schedule alpha must exceed 1, got {alphas}")
        if any(x <= y for x, y in zip(alphas, alphas[1:])):
            raise ValueError(f"schedule alphas must be strictly decreasing, got {alphas}")
        if not (self.delta0 > 0.0 and self.delta_min > 0.0):
            raise ValueError("delta0 and delta_min must both be positive")
        object.__setattr__(self, "alphas", alphas)


def _objective(name: str):
    return _kernels.ss_value if name == "ss" else _kernels.monogamy_value


def _trace_entry(step, delta, state, layout, alpha, since, value, objective) -> TraceEntry:
    # the minimized objective keeps its accepted value bit-for-bit; only the
    # complementary residual is computed fresh
    if objective == "ss":
        ss = value
        mono = (
            value
            - _kernels.pair_term(state, layout[0], layout[3], alpha)
            - _kernels.pair_term(state, layout[1], layout[2], alpha)
        )
    else:
        mono = value
        ss = _kernels.ss_value(state, layout, alpha)
    return TraceEntry(step, delta, state, ss, mono, since)


def minimize_residual(config: SearchConfig) -> RunRecord:
    """Stochastic descent: candidates within trace distance delta of the seed,
    strict improvements accepted, delta halved after counter_max consecutive
    rejections, termination once delta drops below delta_min."""
    gen = sampler.generator(config.rng)
    layout = config.layout.as_tuple()
    alpha = config.alpha
    objective = _objective(config.objective)
    current = (
        config.seed_state if config.seed_state is not None else sampler.haar_random_state(4, gen)
    )
    best = objective(current, layout, alpha)
    trace = [_trace_entry(0, config.delta0, current, layout, alpha, 0, best, config.objective)]
    delta = config.delta0
    counter = 0
    step = 0
    since_accept = 0
    while delta >= config.delta_min:
        step += 1
        since_accept += 1
        candidate = sampler.perturb_within(current, delta, gen)
        value = objective(candidate, layout, alpha)
        if value < best:
            current = candidate
            best = value
            trace.append(
                _trace_entry(step, delta, candidate, layout, alpha, since_accept, value, config.objective)
            )
            since_accept = 0
            counter = 0
        else:
            counter += 1
            if counter >= config.counter_max:
                delta *= 0.5
                counter = 0
    return RunRecord(
        config=config,
        trace=tuple(trace),
        final_state=current,
        final_residuals=measures.residual_report(current, config.layout, alpha),
        total_states_generated=step,
        final_delta=delta,
    )


def random_walk_region(
    start,
    delta: float,
    steps: int,
    alpha=2.0,
    layout: measures.PairingLayout = measures.CANONICAL_LAYOUT,
    rng: sampler.RngSeed = sampler.RngSeed(0, 0),
) -> list:
    """Free walk inside the violation region.

    Proposes `steps` candidates; a candidate is visited (moved to and reported)
    only if its ss residual stays below the violation threshold. The start
    state's report always comes first.
    """
    a = measures.normalize_alpha(alpha)
    state = linalg.as_state(start)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    report = measures.residual_report(state, layout, a)
    if report.ss_residual >= measures.VIOLATION_THRESHOLD:
        raise ValueError(
            f"start state is not in the violation region (ss residual {report.ss_residual})"
        )
    lt = layout.as_tuple()
    gen = sampler.generator(rng)
    reports = [report]
    current = state
    for _ in range(steps):
        candidate = sampler.perturb_within(current, delta, gen)
        if _kernels.ss_value(candidate, lt, a) < measures.VIOLATION_THRESHOLD:
            current = candidate
            reports.append(measures.residual_report(candidate, layout, a))
    return reports


def alpha_continuation(schedule: ContinuationSchedule, initial: RunRecord) -> list:
    """Re-minimize at each alpha of the schedule, seeding every stage with the
    previous optimum; stage k runs on the sibling stream (seed, stream_id+k+1)."""
    if initial.final_residuals.ss_residual >= measures.VIOLATION_THRESHOLD:
        raise ValueError("initial run is not in violation; nothing to continue")
    records = []
    state = initial.final_state
    for k, alpha in enumerate(schedule.alphas):
        config = SearchConfig(
            alpha=alpha,
            objective=initial.config.objective,
            layout=initial.config.layout,
            delta0=schedule.delta0,
            counter_max=initial.config.counter_max,
            delta_min=schedule.delta_min,
            rng=sampler.derive(initial.config.rng, k + 1),
            seed_state=state,
        )
        record = minimize_residual(config)
        records.append(record)
        state = record.final_state
    return records


@dataclass(frozen=True, eq=False)
class ScanSummary:
    n_states: int
    alpha: float
    layout: measures.PairingLayout
    rng: sampler.RngSeed
    violations: int
    min_residual: float
    argmin_index: int
    argmin_state: np.ndarray


def evaluate_scan_chunk(states: np.ndarray, layout, alpha: float):
    """Residuals for one block of already-normalized states; scan's evaluator."""
    values = _kernels.batched_ss(states, layout, alpha)
    argmin = int(np.argmin(values))
    violations = int(np.sum(values < measures.VIOLATION_THRESHOLD))
    return values, argmin, violations


def _scan_chunk_task(args):
    chunk_index, size, alpha, layout_tuple, rng = args
    gen = sampler.generator(sampler.derive(rng, chunk_index + 1))
    z = gen.standard_normal((size, 16)) + 1j * gen.standard_normal((size, 16))
    states = z / np.linalg.norm(z, axis=1, keepdims=True)
    values, argmin, violations = evaluate_scan_chunk(states, layout_tuple, alpha)
    return chunk_index, violations, float(values[argmin]), argmin, states[argmin].copy()


def haar_scan(
    n_states: int,
    alpha=2.0,
    layout: measures.PairingLayout = measures.CANONICAL_LAYOUT,
    rng: sampler.RngSeed = sampler.RngSeed(0, 0),
    workers: int = 1,
) -> ScanSummary:
    """Evaluate the ss residual on n_states Haar draws.

    States are drawn in fixed-size chunks with per-chunk sibling streams, so
    the summary is identical for every worker count.
    """
    if n_states < 1:
        raise ValueError(f"n_states must be >= 1, got {n_states}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    a = measures.normalize_alpha(alpha)
    lt = layout.as_tuple()
    sizes = [SCAN_CHUNK] * (n_states // SCAN_CHUNK)
    if n_states % SCAN_CHUNK:
        sizes.append(n_states % SCAN_CHUNK)
    tasks = [(ci, size, a, lt, rng) for ci, size in enumerate(sizes)]
    if workers == 1 or len(tasks) == 1:
        results = [_scan_chunk_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk_task, tasks))
    results.sort(key=lambda r: r[0])
    violations = sum(r[1] for r in results)
    best = min(results, key=lambda r: (r[2], r[0] * SCAN_CHUNK + r[3]))
    return ScanSummary(
        n_states=n_states,
        alpha=a,
        layout=layout,
        rng=rng,
        violations=violations,
        min_residual=best[2],
        argmin_index=best[0] * SCAN_CHUNK + best[3],
        argmin_state=best[4],
    )
