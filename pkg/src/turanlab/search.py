"""Exact and heuristic extremal search.

The exact engine walks subsets of the lexicographically ordered candidate
edges: each node is a feasible edge set, children add one later candidate.
Constraints are downward closed, so after each addition the remaining
candidates are filtered to those still individually addable (forward
checking), and ``len(chosen) + len(remaining)`` bounds every descendant.

Determinism: the reported witness is always the optimal edge set whose
sorted candidate-index tuple is lexicographically least. With several
workers the tree is split on its top branches and results are merged by
(edge count, index tuple), so output does not depend on the worker count.
"""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from . import constructions as C
from .detectors import ForbiddenConstraint
from .hgio import dumps
from .hypercore import CanonicalFormBudgetExceeded, Hypergraph, canonical_form, mask_of, vertices_of

THREADS_ENV = "TURANLAB_THREADS"


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchProblem:
    n: int
    r: int
    constraints: tuple[ForbiddenConstraint, ...] = ()
    mode: str = "exact"
    lower_bound_seed: Hypergraph | None = None
    isomorph_reduce: bool = True
    node_limit: int | None = None
    time_limit: float | None = None
    max_candidates: int = 35
    workers: int | None = None
    rng_seed: int = 0
    iterations: int = 2000
    canon_max_n: int = 10

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "heuristic"):
            raise SearchError(f"mode must be 'exact' or 'heuristic', got {self.mode!r}")
        if self.r < 1 or self.n < 0:
            raise SearchError("need r >= 1 and n >= 0")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        seed = self.lower_bound_seed
        if seed is not None and (seed.n, seed.r) != (self.n, self.r):
            raise SearchError("seed must have the problem's n and r")

    def feasible(self, H: Hypergraph) -> bool:
        return all(c.satisfied(H) for c in self.constraints)


@dataclass
class SearchResult:
    optimum: int
    witnesses: list[Hypergraph]
    nodes_explored: int
    elapsed: float
    proof_of_optimality: bool
    mode: str = "exact"
    rng_seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self, problem: SearchProblem | None = None) -> dict:
        out = {
            "optimum": self.optimum,
            "proof_of_optimality": self.proof_of_optimality,
            "mode": self.mode,
            "witnesses": [dumps(W) for W in self.witnesses],
            "nodes": self.nodes_explored,
            "elapsed": round(self.elapsed, 6),
            "rng_seed": self.rng_seed,
        }
        if problem is not None:
            out["n"] = problem.n
            out["r"] = problem.r
            out["constraints"] = [c.label for c in problem.constraints]
        out.update(self.extra)
        return out


def _allowed(problem: SearchProblem, masks: Sequence[int], adj: Sequence[int], e: int) -> bool:
    return all(c.allows_addition(problem.n, problem.r, masks, adj, e) for c in problem.constraints)


def _add_adj(adj: Sequence[int], e: int) -> list[int]:
    out = list(adj)
    for v in vertices_of(e):
        out[v] |= e & ~(1 << v)
    return out


class _BudgetExhausted(Exception):
    pass


@dataclass
class _Task:
    chosen: tuple[int, ...]
    adj: list[int]
    remaining: list[int]
    branch_limit: int | None = None  # only the first k children of the root


class _Engine:
    def __init__(self, problem: SearchProblem, candidates: list[int], enumerate_all: bool, floor: int, deadline: float | None):
        self.p = problem
        self.cand = candidates
        self.enumerate_all = enumerate_all
        self.best = floor
        self.found: list[tuple[int, ...]] = []
        self.nodes = 0
        self.deadline = deadline

    def record(self, chosen: tuple[int, ...]) -> None:
        k = len(chosen)
        if k > self.best:
            self.best = k
            self.found = [chosen]
        elif k == self.best and self.enumerate_all and k > 0:
            self.found.append(chosen)

    def cut(self, k: int, remaining: int) -> bool:
        return k + remaining < self.best if self.enumerate_all else k + remaining <= self.best

    def children(self, chosen, adj, remaining, limit=None):
        masks = [self.cand[i] for i in chosen]
        for pos, i in enumerate(remaining if limit is None else remaining[:limit]):
            if self.cut(len(chosen) + 1, len(remaining) - pos - 1):
                return
            e = self.cand[i]
            new_adj = _add_adj(adj, e)
            new_masks = masks + [e]
            rest = [j for j in remaining[pos + 1 :] if _allowed(self.p, new_masks, new_adj, self.cand[j])]
            yield (*chosen, i), new_adj, rest

    def dfs(self, chosen, adj, remaining, limit=None) -> None:
        self.nodes += 1
        if self.p.node_limit is not None and self.nodes > self.p.node_limit:
            raise _BudgetExhausted
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExhausted
        self.record(chosen)
        for child in self.children(chosen, adj, remaining, limit):
            self.dfs(*child)


def _run_task(problem, candidates, enumerate_all, floor, deadline, task: _Task):
    eng = _Engine(problem, candidates, enumerate_all, floor, deadline)
    exhausted = False
    try:
        eng.dfs(task.chosen, task.adj, task.remaining, task.branch_limit)
    except _BudgetExhausted:
        exhausted = True
    return eng.best, eng.found, eng.nodes, exhausted


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get(THREADS_ENV)
    n = requested if requested is not None else (int(cap) if cap else 1)
    if cap:
        n = min(n, int(cap))
    return max(1, n)


def _exact(problem: SearchProblem, enumerate_all: bool) -> SearchResult:
    if problem.mode != "exact":
        raise SearchError("exact search needs mode='exact'")
    ncand = comb(problem.n, problem.r)
    if ncand > problem.max_candidates:
        raise SearchError(
            f"C({problem.n},{problem.r}) = {ncand} candidate edges exceeds the exact-search budget {problem.max_candidates}"
        )
    start = time.monotonic()
    deadline = start + problem.time_limit if problem.time_limit is not None else None
    candidates = [mask_of(c) for c in combinations(range(problem.n), problem.r)]
    seed = problem.lower_bound_seed
    if seed is not None and not problem.feasible(seed):
        raise SearchError("lower-bound seed violates the constraints")
    floor = max(len(seed) - 1, 0) if seed is not None else 0

    empty_adj = [0] * problem.n
    root_remaining = [i for i, e in enumerate(candidates) if _allowed(problem, [], empty_adj, e)]
    limit = 1 if problem.isomorph_reduce and root_remaining[:1] == [0] else None

    # split the tree into independent tasks; the root itself is handled here
    root = _Engine(problem, candidates, enumerate_all, floor, deadline)
    root.record(())
    workers = worker_count(problem.workers)
    tasks: list[_Task] = []
    frontier = [_Task((), empty_adj, root_remaining, limit)]
    depth = 0
    while workers > 1 and depth < 2 and len(frontier) < 4 * workers:
        nxt = []
        for t in frontier:
            for chosen, adj, rest in root.children(t.chosen, t.adj, t.remaining, t.branch_limit):
                root.nodes += 1
                root.record(chosen)
                nxt.append(_Task(chosen, adj, rest))
        frontier, depth = nxt, depth + 1
    tasks = frontier

    results = []
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_task, problem, candidates, enumerate_all, root.best, deadline, t) for t in tasks]
            results = [f.result() for f in futs]
    else:
        results = [_run_task(problem, candidates, enumerate_all, root.best, deadline, t) for t in tasks]
    # _run_task re-records each task root, which the split already counted
    nodes = root.nodes + sum(r[2] for r in results) - (len(tasks) if depth else 0)
    exhausted = any(r[3] for r in results)

    best = max([root.best, len(seed) if seed is not None else 0] + [r[0] for r in results])
    found = sorted({f for f in [*root.found, *(f for r in results for f in r[1])] if len(f) == best})

    witnesses: list[Hypergraph] = []
    if found:
        sets = found if enumerate_all else found[:1]
        witnesses = [Hypergraph.from_masks(problem.n, problem.r, (candidates[i] for i in s)) for s in sets]
    elif seed is not None and len(seed) == best:
        witnesses = [seed]
    elif best == 0:
        witnesses = [Hypergraph(problem.n, problem.r)]

    extra: dict = {}
    if enumerate_all and witnesses:
        try:
            classes: dict[bytes, Hypergraph] = {}
            for W in witnesses:
                classes.setdefault(canonical_form(W, problem.canon_max_n), W)
            witnesses = list(classes.values())
            extra["isomorphism_classes"] = len(witnesses)
        except CanonicalFormBudgetExceeded:
            extra["isomorphism_classes"] = None
        extra["labelled_optima"] = len(found)

    for W in witnesses:
        if not problem.feasible(W):
            raise RuntimeError(f"search produced an infeasible witness: {W.edge_tuples()}")

    return SearchResult(
        optimum=best,
        witnesses=witnesses,
        nodes_explored=nodes,
        elapsed=time.monotonic() - start,
        proof_of_optimality=not exhausted,
        mode="exact",
        extra=extra,
    )


def exact_max_edges(problem: SearchProblem) -> SearchResult:
    """Exact ex_r(n, constraints) with the lexicographically least witness."""
    return _exact(problem, enumerate_all=False)


def enumerate_extremal(problem: SearchProblem) -> SearchResult:
    """All optimal hypergraphs, one per isomorphism class."""
    return _exact(problem, enumerate_all=True)


# -- heuristic lower bounds ----------------------------------------------------


def default_seed(problem: SearchProblem) -> Hypergraph:
    """The best applicable named construction, or the empty hypergraph.

    Only returned if it satisfies every constraint of ``problem``.
    """
    n, r = problem.n, problem.r
    kinds = {c.kind: c for c in problem.constraints}
    options: list[Hypergraph] = []
    s = kinds["matching-atmost"].s if "matching-atmost" in kinds else None
    for kind in ("k-family", "expansion"):
        if kind not in kinds:
            continue
        l = kinds[kind].l
        try:
            if s is None:
                options.append(C.generalized_turan(n, l, r).hypergraph)
            elif r == 2:
                options.append(C.alon_frankl_graph(n, l, s).hypergraph)
                if n >= 2 * s + 1:
                    options.append(C.pad_vertices(C.turan_graph(2 * s + 1, l).hypergraph, n))
            else:
                options.append(C.main_extremal(n, l, s, r).hypergraph)
                if kind == "expansion":
                    options.append(C.conjecture_witness(n, l, s, r).hypergraph)
        except C.ConstructionError:
            pass
    if "fano" in kinds and r == 3 and s is not None and s < n:
        options.append(C.fano_extremal(n, s).hypergraph)
    if s is not None and n >= r:
        options.append(C.frankl_star(n, r, min(s, n)))
    for H in sorted(options, key=len, reverse=True):
        if problem.feasible(H):
            return H
    return Hypergraph(n, r)


def heuristic_lower_bound(
    problem: SearchProblem,
    seed: Hypergraph | None = None,
    iterations: int | None = None,
    rng_seed: int | None = None,
) -> SearchResult:
    """Simulated-annealing local search over feasible edge sets.

    Moves add a random feasible edge or drop a random edge; drops are
    accepted with probability exp(-1/T) under geometric cooling, and the
    walk restarts from the best set after a stagnation window. The result is
    never smaller than the seed.
    """
    start = time.monotonic()
    n, r = problem.n, problem.r
    iterations = problem.iterations if iterations is None else iterations
    rng_seed = problem.rng_seed if rng_seed is None else rng_seed
    rng = random.Random(rng_seed)
    if seed is None:
        seed = default_seed(problem)
    if (seed.n, seed.r) != (n, r):
        raise SearchError("seed must have the problem's n and r")
    if not problem.feasible(seed):
        raise SearchError("heuristic seed violates the constraints")

    candidates = [mask_of(c) for c in combinations(range(n), r)]
    state = list(seed.edges)
    in_state = set(state)
    adj = [0] * n
    for e in state:
        adj = _add_adj(adj, e)
    best = list(state)
    temp0, cooling, patience = 1.0, 0.995, max(50, iterations // 10)
    temp, last_gain = temp0, 0

    def rebuild(edges: list[int]) -> list[int]:
        a = [0] * n
        for e in edges:
            a = _add_adj(a, e)
        return a

    for it in range(iterations):
        if state and rng.random() < 0.25:
            if rng.random() < math.exp(-1.0 / max(temp, 1e-9)):
                e = state.pop(rng.randrange(len(state)))
                in_state.discard(e)
                adj = rebuild(state)
        elif len(in_state) < len(candidates):
            e = rng.choice(candidates)
            if e not in in_state and _allowed(problem, state, adj, e):
                state.append(e)
                in_state.add(e)
                adj = _add_adj(adj, e)
        if len(state) > len(best):
            best, last_gain = list(state), it
        temp *= cooling
        if it - last_gain > patience:
            state, in_state, temp, last_gain = list(best), set(best), temp0, it
            adj = rebuild(state)

    W = Hypergraph.from_masks(n, r, best)
    if not problem.feasible(W):
        raise RuntimeError("heuristic produced an infeasible hypergraph")
    return SearchResult(
        optimum=len(W),
        witnesses=[W],
        nodes_explored=iterations,
        elapsed=time.monotonic() - start,
        proof_of_optimality=False,
        mode="heuristic",
        rng_seed=rng_seed,
        extra={"seed_edges": len(seed)},
    )
