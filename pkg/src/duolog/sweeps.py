"""Exhaustive bounded sweeps.

Two tricks keep the stated bounds tractable without weakening them:

* Truth-vector closure.  A formula's interpretation on a fixed model is a
  truth vector determined compositionally by its subformulas' vectors, so
  the set of vectors realized by all formulas of depth <= d is computed by
  closing the leaf vectors under the connective clauses d times.  Checking
  a vector-level property over that closure is equivalent to checking it
  formula by formula, and each new vector keeps a representative formula
  for error reporting.  Connectives are applied through the real evaluator
  (via pseudo-atom environments), so the production clauses are exercised.

* Profile deduplication.  An axiom instance's validity on a model depends
  on the instantiating formulas only through their truth vectors, so the
  instantiation pool is deduplicated per model before sweeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .semantics import KripkeModel, Variant, get_variant, truth_set
from .syntax import (
    AND,
    Atom,
    BOX,
    Box,
    Formula,
    IMP,
    OR,
    SUP,
    is_classical_formula,
    make_binary,
    render_formula,
)
from .systems import ProofSystem, get_system


def formula_pool(
    leaves: Sequence[Formula], connectives: Iterable[str], depth: int
) -> list[Formula]:
    """Every formula of depth <= ``depth`` over the given leaves."""
    conns = tuple(connectives)
    binary = [c for c in conns if c != BOX]
    pool: list[Formula] = list(leaves)
    seen = set(pool)
    last = list(pool)
    for _ in range(depth):
        new = []
        for c in binary:
            for a in pool:
                for b in pool:
                    f = make_binary(c, a, b)
                    if f not in seen:
                        seen.add(f)
                        new.append(f)
        if BOX in conns:
            for a in pool:
                f = Box(a)
                if f not in seen:
                    seen.add(f)
                    new.append(f)
        pool.extend(new)
        last = new
    return pool


# ---------------------------------------------------------------------------
# Vector closure

_MVA, _MVB = Atom("A"), Atom("B")
_TEMPLATES = {c: make_binary(c, _MVA, _MVB) for c in (AND, OR, IMP, SUP)}
_BOX_TEMPLATE = Box(_MVA)

Vec = frozenset


def apply_connective(
    m: KripkeModel, variant: str | Variant, conn: str, a: Vec, b: Optional[Vec] = None
) -> Vec:
    """One connective clause applied to truth vectors, through the evaluator."""
    if conn == BOX:
        return truth_set(m, _BOX_TEMPLATE, variant, env={"A": a})
    return truth_set(m, _TEMPLATES[conn], variant, env={"A": a, "B": b})


@dataclass
class ClosureCheck:
    """Counterexample record from a closure sweep."""

    formula: Formula
    detail: str


def vector_closure(
    m: KripkeModel,
    variant: str | Variant,
    leaves: Sequence[tuple[Formula, Vec]],
    connectives: Iterable[str],
    depth: int,
) -> dict[Vec, Formula]:
    """Reachable truth vectors of formulas of depth <= ``depth``, with a
    representative formula each."""
    v = get_variant(variant)
    conns = tuple(connectives)
    reached: dict[Vec, Formula] = {}
    for f, vec in leaves:
        reached.setdefault(vec, f)
    for _ in range(depth):
        fresh: dict[Vec, Formula] = {}
        items = list(reached.items())
        for c in conns:
            if c == BOX:
                for vec, f in items:
                    out = apply_connective(m, v, c, vec)
                    if out not in reached and out not in fresh:
                        fresh[out] = Box(f)
                continue
            for vec_a, fa in items:
                for vec_b, fb in items:
                    out = apply_connective(m, v, c, vec_a, vec_b)
                    if out not in reached and out not in fresh:
                        fresh[out] = make_binary(c, fa, fb)
        if not fresh:
            break
        reached.update(fresh)
    return reached


def parallel_closure(
    leaf_rows: Sequence[tuple[Formula, tuple]],
    combine: Callable[[str, tuple, tuple], tuple],
    connectives: Iterable[str],
    depth: int,
    check: Callable[[Formula, tuple], Optional[str]],
    box_combine: Callable[[tuple], tuple] | None = None,
) -> Optional[ClosureCheck]:
    """Close tuples of vectors (one entry per co-evaluated reading) under
    per-connective combiners, running ``check`` on every reachable tuple.

    Returns the first counterexample, or None when the sweep is clean.
    """
    conns = tuple(connectives)
    reached: dict[tuple, Formula] = {}
    for f, row in leaf_rows:
        bad = check(f, row)
        if bad is not None:
            return ClosureCheck(f, bad)
        reached.setdefault(row, f)
    for _ in range(depth):
        fresh: dict[tuple, Formula] = {}
        items = list(reached.items())
        for c in conns:
            if c == BOX:
                for row, f in items:
                    out = box_combine(row)
                    if out in reached or out in fresh:
                        continue
                    g = Box(f)
                    bad = check(g, out)
                    if bad is not None:
                        return ClosureCheck(g, bad)
                    fresh[out] = g
                continue
            for row_a, fa in items:
                for row_b, fb in items:
                    out = combine(c, row_a, row_b)
                    if out in reached or out in fresh:
                        continue
                    g = make_binary(c, fa, fb)
                    bad = check(g, out)
                    if bad is not None:
                        return ClosureCheck(g, bad)
                    fresh[out] = g
        if not fresh:
            break
        reached.update(fresh)
    return None


# ---------------------------------------------------------------------------
# Axiom soundness sweeps


@dataclass
class SweepFailure:
    system: str
    axiom: str
    assignment: dict[str, Formula]
    model: KripkeModel

    def describe(self) -> str:
        parts = ", ".join(f"{mv} := {render_formula(f)}" for mv, f in sorted(self.assignment.items()))
        return f"{self.axiom}[{parts}] fails on a {len(self.model.worlds)}-world model"


def _pool_leaves(variant: Variant, atom_names: Sequence[str]) -> list[Formula]:
    return [Atom(a) for a in atom_names]


def instantiation_pool(system: ProofSystem, atom_names: Sequence[str], depth: int) -> list[Formula]:
    variant = get_variant(system.variant_name)
    conns = sorted(variant.fragment.binary) + ([BOX] if variant.fragment.allow_box else [])
    return formula_pool(_pool_leaves(variant, atom_names), conns, depth)


def _is_valid_vector(m: KripkeModel, v: Variant, vec: Vec) -> bool:
    if v.global_consequence or m.base is None:
        return vec == m.world_set
    return m.base in vec


def axiom_soundness_failures(
    system: str | ProofSystem,
    models: Iterable[KripkeModel],
    atom_names: Sequence[str] = ("p", "q"),
    inst_depth: int = 2,
    classical_atoms: Sequence[str] = (),
) -> tuple[int, list[SweepFailure]]:
    """Check every axiom of ``system`` against every model, instantiating
    metavariables with all formulas of depth <= ``inst_depth`` over
    ``atom_names`` (deduplicated per model by truth vector).

    Returns (number of instance checks after deduplication, failures).
    """
    sysd = get_system(system)
    v = get_variant(sysd.variant_name)
    pool = instantiation_pool(sysd, atom_names, inst_depth)
    classical = frozenset(classical_atoms)
    classical_pool = [f for f in pool if is_classical_formula(f, classical)]
    atom_pool = [f for f in pool if isinstance(f, Atom)]
    checked = 0
    failures: list[SweepFailure] = []
    for m in models:
        profiles: dict[Vec, Formula] = {}
        for f in pool:
            profiles.setdefault(truth_set(m, f, v), f)
        table = {
            None: profiles,
            "classical": _dedupe(m, v, classical_pool),
            "atom": _dedupe(m, v, atom_pool),
        }
        for schema in sysd.axioms:
            conds = dict(schema.conditions)
            mvs = sorted(schema.metavariables())
            domains = [sorted(table[conds.get(mv)].items(), key=_vec_key(m)) for mv in mvs]
            for combo in itertools.product(*domains):
                checked += 1
                env = {mv: vec for mv, (vec, _) in zip(mvs, combo)}
                out = truth_set(m, schema.pattern, v, env=env)
                if not _is_valid_vector(m, v, out):
                    assignment = {mv: f for mv, (_, f) in zip(mvs, combo)}
                    failures.append(SweepFailure(sysd.name, schema.name, assignment, m))
    return checked, failures


def _dedupe(m, v, pool) -> dict[Vec, Formula]:
    out: dict[Vec, Formula] = {}
    for f in pool:
        out.setdefault(truth_set(m, f, v), f)
    return out


def _vec_key(m: KripkeModel):
    index = {w: i for i, w in enumerate(m.worlds)}

    def key(item):
        vec, _ = item
        return tuple(sorted(index[w] for w in vec))

    return key
