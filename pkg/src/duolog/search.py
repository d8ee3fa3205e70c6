"""Bounded enumeration of finite models and countermodel search.

Frames are enumerated up to isomorphism by generating every reflexive and
transitive relation on n <= max_worlds labeled worlds and keeping the
lexicographically least representative of each isomorphism class.  Each
frame is crossed with every persistent valuation over the requested atoms
(plus a bot extension or classical-atom constraints where the variant calls
for them).  Enumeration order is deterministic, so the first countermodel
is reproducible; parallel runs collect candidates and return the least.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .semantics import (
    KripkeModel,
    Variant,
    build_model,
    get_variant,
    truth_set,
    _require_language,
)
from .syntax import Formula, atoms as formula_atoms


@dataclass(frozen=True)
class SearchBounds:
    variant: str | Variant = "s"
    max_worlds: int = 3
    atoms: Optional[tuple[str, ...]] = None
    rooted: Optional[bool] = None  # default: whatever the variant requires
    classical_atoms: tuple[str, ...] = ()

    def resolve(self, formulas: Sequence[Formula] = ()) -> "_Resolved":
        v = get_variant(self.variant)
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be positive")
        if self.atoms is not None:
            names = tuple(self.atoms)
        else:
            names = tuple(sorted(set().union(*(formula_atoms(f) for f in formulas)) if formulas else ()))
        rooted = v.requires_base if self.rooted is None else self.rooted
        if v.requires_base and not rooted:
            raise ValueError(f"variant {v.name!r} requires rooted models")
        return _Resolved(v, self.max_worlds, names, rooted, tuple(self.classical_atoms))


@dataclass(frozen=True)
class _Resolved:
    variant: Variant
    max_worlds: int
    atoms: tuple[str, ...]
    rooted: bool
    classical_atoms: tuple[str, ...]


@dataclass(frozen=True)
class SearchResult:
    valid: bool
    model: Optional[KripkeModel] = None
    world: Optional[str] = None
    models_checked: int = 0

    def __bool__(self) -> bool:
        return self.valid


# ---------------------------------------------------------------------------
# Frames


def _transitive(n: int, rel: frozenset[tuple[int, int]]) -> bool:
    return all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c)


def _canonical(n: int, rel: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    best = None
    for perm in itertools.permutations(range(n)):
        image = frozenset((perm[a], perm[b]) for (a, b) in rel)
        key = tuple(sorted(image))
        if best is None or key < best[0]:
            best = (key, image)
    return best[1]


def preorders(n: int) -> list[frozenset[tuple[int, int]]]:
    """All preorders on n labeled points, one representative per
    isomorphism class, deterministically ordered."""
    diagonal = frozenset((i, i) for i in range(n))
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen = set()
    out = []
    for bits in itertools.product((0, 1), repeat=len(off)):
        rel = diagonal | frozenset(p for p, bit in zip(off, bits) if bit)
        if not _transitive(n, rel):
            continue
        canon = _canonical(n, rel)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return sorted(out, key=lambda rel: tuple(sorted(rel)))


def enumerate_frames(max_worlds: int, rooted: bool) -> Iterator[tuple[tuple[str, ...], list, Optional[str]]]:
    for n in range(1, max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        for rel in preorders(n):
            pairs = [(worlds[a], worlds[b]) for (a, b) in rel if a != b]
            if rooted:
                least = [i for i in range(n) if all((i, j) in rel for j in range(n))]
                if not least:
                    continue
                yield worlds, pairs, worlds[min(least)]
            else:
                yield worlds, pairs, None


def _upsets(worlds: tuple[str, ...], up: dict[str, frozenset[str]]) -> list[frozenset[str]]:
    out = []
    for bits in itertools.product((0, 1), repeat=len(worlds)):
        s = frozenset(w for w, bit in zip(worlds, bits) if bit)
        if all(up[w] <= s for w in s):
            out.append(s)
    return out


def enumerate_models(bounds: SearchBounds, formulas: Sequence[Formula] = ()) -> Iterator[KripkeModel]:
    resolved = bounds.resolve(formulas)
    yield from _enumerate_resolved(resolved)


def _enumerate_resolved(r: _Resolved) -> Iterator[KripkeModel]:
    v = r.variant
    classical = frozenset(r.classical_atoms)
    for worlds, pairs, base in enumerate_frames(r.max_worlds, r.rooted):
        probe = build_model(worlds, pairs, base=base)
        ups = _upsets(worlds, probe.up)
        wset = probe.world_set
        domains = []
        for atom in r.atoms:
            if atom in classical:
                domains.append([frozenset(), wset])
            else:
                domains.append(ups)
        if v.bottom_in_valuation:
            if base is not None:
                domains.append([s for s in ups if base not in s])
            else:
                domains.append(ups)
        for combo in itertools.product(*domains):
            if v.bottom_in_valuation:
                valuation = dict(zip(r.atoms, combo[:-1]))
                bots = combo[-1]
            else:
                valuation = dict(zip(r.atoms, combo))
                bots = frozenset()
            yield build_model(
                worlds,
                pairs,
                base=base,
                valuation=valuation,
                bot_worlds=bots,
                classical_atoms=classical & set(r.atoms),
                variant=v,
            )


# ---------------------------------------------------------------------------
# Bounded validity / consequence


def _refuting_world(m: KripkeModel, premises, conclusion, v: Variant) -> Optional[str]:
    """World witnessing a failure of the consequence on this model, if any."""
    if v.global_consequence:
        for p in premises:
            if truth_set(m, p, v) != m.world_set:
                return None
        ts = truth_set(m, conclusion, v)
        for w in m.worlds:
            if w not in ts:
                return w
        return None
    for p in premises:
        if m.base not in truth_set(m, p, v):
            return None
    if m.base not in truth_set(m, conclusion, v):
        return m.base
    return None


def bounded_consequence(
    premises: Sequence[Formula],
    conclusion: Formula,
    bounds: SearchBounds,
    jobs: int = 1,
) -> SearchResult:
    resolved = bounds.resolve(tuple(premises) + (conclusion,))
    v = resolved.variant
    for f in tuple(premises) + (conclusion,):
        _require_language(f, v)
    if jobs > 1:
        return _parallel_search(resolved, tuple(premises), conclusion, jobs)
    checked = 0
    for m in _enumerate_resolved(resolved):
        checked += 1
        w = _refuting_world(m, premises, conclusion, v)
        if w is not None:
            return SearchResult(False, m, w, checked)
    return SearchResult(True, models_checked=checked)


def bounded_valid(f: Formula, bounds: SearchBounds, jobs: int = 1) -> SearchResult:
    return bounded_consequence((), f, bounds, jobs=jobs)


def _probe_chunk(args):
    resolved, premises, conclusion, start, stop = args
    for index, m in enumerate(itertools.islice(_enumerate_resolved(resolved), start, stop)):
        w = _refuting_world(m, premises, conclusion, resolved.variant)
        if w is not None:
            return (start + index, w)
    return None


def _parallel_search(resolved, premises, conclusion, jobs: int) -> SearchResult:
    total = sum(1 for _ in _enumerate_resolved(resolved))
    chunk = max(1, -(-total // jobs))
    tasks = [
        (resolved, premises, conclusion, start, min(start + chunk, total))
        for start in range(0, total, chunk)
    ]
    hits = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for hit in pool.map(_probe_chunk, tasks):
            if hit is not None:
                hits.append(hit)
    if not hits:
        return SearchResult(True, models_checked=total)
    index, world = min(hits)
    model = next(itertools.islice(_enumerate_resolved(resolved), index, index + 1))
    return SearchResult(False, model, world, total)


# ---------------------------------------------------------------------------
# Isomorphism


def models_isomorphic(m1: KripkeModel, m2: KripkeModel) -> bool:
    """Brute-force isomorphism check preserving order, base, valuation of
    each named atom (absent atoms count as false everywhere), bot, and the
    classical-atom set."""
    if len(m1.worlds) != len(m2.worlds):
        return False
    if m1.classical_atoms != m2.classical_atoms:
        return False
    atoms = set(m1.valuation) | set(m2.valuation)
    for perm in itertools.permutations(m2.worlds):
        f = dict(zip(m1.worlds, perm))
        if m1.base is not None or m2.base is not None:
            if m1.base is None or m2.base is None or f[m1.base] != m2.base:
                continue
        if {(f[a], f[b]) for (a, b) in m1.order} != set(m2.order):
            continue
        if frozenset(f[w] for w in m1.bot_worlds) != m2.bot_worlds:
            continue
        if all(
            frozenset(f[w] for w in m1.valuation.get(atom, frozenset()))
            == m2.valuation.get(atom, frozenset())
            for atom in atoms
        ):
            return True
    return False
