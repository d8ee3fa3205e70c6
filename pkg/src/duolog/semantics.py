"""Finite Kripke models and the truth clauses of every logic variant.

A model is a finite preorder of worlds with a persistent valuation and an
optional distinguished base world.  The variants differ in how the classical
conditional ``=>`` is read, whether ``bot`` is a constant falsum or an
ordinary persistent entry of the valuation, and whether consequence is
evaluated at the base or at every world.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .syntax import (
    And,
    Atom,
    Bottom,
    Box,
    ClsImp,
    Formula,
    IntImp,
    Or,
    L_BOT,
    L_BOT_BOX,
    L_BOT_SUP,
    L_CIPC,
    LanguageFragment,
    fragment_violation,
)


class ModelError(ValueError):
    """A model description violates the invariants of its variant."""


class EvalError(ValueError):
    """Formula, world, or variant mismatch during evaluation."""


# ---------------------------------------------------------------------------
# Variants


@dataclass(frozen=True)
class Variant:
    """Which truth clauses and consequence notion apply."""

    name: str
    fragment: LanguageFragment
    requires_base: bool
    global_consequence: bool
    bottom_in_valuation: bool


S = Variant("s", L_BOT_SUP, True, False, False)
T = Variant("t", L_BOT_SUP, True, False, False)
SMINUS_BOT = Variant("sminus-bot", L_BOT_SUP, False, True, False)
SBOT_W = Variant("sbot-w", L_BOT_SUP, True, False, True)
L4 = Variant("l4", L_BOT_BOX, False, True, False)
MPC = Variant("mpc", L_BOT, False, True, True)
CIPC_A = Variant("cipc-a", L_CIPC, False, True, False)
CIPC_B = Variant("cipc-b", L_CIPC, True, False, False)
CIPC_C = Variant("cipc-c", L_CIPC, False, True, False)

VARIANTS: dict[str, Variant] = {
    v.name: v for v in (S, T, SMINUS_BOT, SBOT_W, L4, MPC, CIPC_A, CIPC_B, CIPC_C)
}


def get_variant(name: str | Variant) -> Variant:
    if isinstance(name, Variant):
        return name
    try:
        return VARIANTS[name]
    except KeyError:
        raise EvalError(f"unknown variant {name!r}; expected one of {sorted(VARIANTS)}") from None


# ---------------------------------------------------------------------------
# Models


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """Validated finite preordered model.

    ``order`` is stored as its reflexive-transitive closure; ``up``/``down``
    give the principal up- and down-sets of each world.  ``valuation`` maps
    each atom to the set of worlds where it is true.
    """

    worlds: tuple[str, ...]
    order: frozenset[tuple[str, str]]
    base: Optional[str]
    valuation: Mapping[str, frozenset[str]]
    bot_worlds: frozenset[str] = frozenset()
    classical_atoms: frozenset[str] = frozenset()
    up: Mapping[str, frozenset[str]] = field(default_factory=dict)
    down: Mapping[str, frozenset[str]] = field(default_factory=dict)

    @property
    def world_set(self) -> frozenset[str]:
        return frozenset(self.worlds)

    def leq(self, w1: str, w2: str) -> bool:
        return (w1, w2) in self.order


def _closure(worlds: Sequence[str], pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    succ = {w: {w} for w in worlds}
    for a, b in pairs:
        succ[a].add(b)
    changed = True
    while changed:
        changed = False
        for w in worlds:
            extra = set()
            for x in succ[w]:
                extra |= succ[x]
            if not extra <= succ[w]:
                succ[w] |= extra
                changed = True
    return frozenset((a, b) for a in worlds for b in succ[a])


def build_model(
    worlds: Sequence[str],
    order: Iterable[tuple[str, str]] = (),
    base: Optional[str] = None,
    valuation: Mapping[str, Iterable[str]] | None = None,
    bot_worlds: Iterable[str] = (),
    classical_atoms: Iterable[str] = (),
    variant: str | Variant | None = None,
) -> KripkeModel:
    """Close ``order`` reflexively and transitively, then validate.

    ``order`` lists generator pairs.  When ``variant`` is given the
    variant-specific invariants are checked as well: a required base, the
    base or classical-atom constraints, and whether a ``bot`` valuation is
    meaningful at all.
    """
    worlds = tuple(worlds)
    if not worlds:
        raise ModelError("a model needs at least one world")
    if len(set(worlds)) != len(worlds):
        raise ModelError("duplicate world ids")
    wset = frozenset(worlds)
    for a, b in order:
        if a not in wset or b not in wset:
            raise ModelError(f"order pair ({a!r}, {b!r}) mentions an unknown world")
    closed = _closure(worlds, order)
    up = {w: frozenset(x for x in worlds if (w, x) in closed) for w in worlds}
    down = {w: frozenset(x for x in worlds if (x, w) in closed) for w in worlds}

    if base is not None:
        if base not in wset:
            raise ModelError(f"base {base!r} is not a world")
        not_above = [w for w in worlds if w not in up[base]]
        if not_above:
            raise ModelError(f"base {base!r} is not a least element: {not_above[0]!r} is not above it")

    val: dict[str, frozenset[str]] = {}
    for atom, trues in (valuation or {}).items():
        ext = frozenset(trues)
        if not ext <= wset:
            raise ModelError(f"valuation of {atom!r} mentions unknown worlds")
        val[atom] = ext
    for atom, ext in val.items():
        for w in ext:
            for x in up[w]:
                if x not in ext:
                    raise ModelError(
                        f"persistence violated: {atom!r} true at {w!r} but not at {x!r} above it"
                    )

    bots = frozenset(bot_worlds)
    if not bots <= wset:
        raise ModelError("bot valuation mentions unknown worlds")
    for w in bots:
        for x in up[w]:
            if x not in bots:
                raise ModelError(f"persistence violated for bot: true at {w!r} but not at {x!r}")

    classical = frozenset(classical_atoms)
    for atom in classical:
        ext = val.get(atom, frozenset())
        if ext and ext != wset:
            raise ModelError(f"classical atom {atom!r} must be true everywhere or nowhere")

    if variant is not None:
        v = get_variant(variant)
        if v.requires_base and base is None:
            raise ModelError(f"variant {v.name!r} requires a base world")
        if bots and not v.bottom_in_valuation:
            raise ModelError(f"variant {v.name!r} treats bot as constant false; bot_worlds must be empty")
        if v is SBOT_W and base in bots:
            raise ModelError("bot must be false at the base world")

    return KripkeModel(worlds, closed, base, val, bots, classical, up, down)


# ---------------------------------------------------------------------------
# JSON model format


def model_to_dict(m: KripkeModel) -> dict:
    return {
        "worlds": list(m.worlds),
        "order": sorted([a, b] for (a, b) in m.order if a != b),
        "base": m.base,
        "valuation": {w: sorted(p for p, ext in m.valuation.items() if w in ext) for w in m.worlds},
        "bot_true_at": sorted(m.bot_worlds),
        "classical_atoms": sorted(m.classical_atoms),
    }


def model_from_dict(data: Mapping, variant: str | Variant | None = None) -> KripkeModel:
    try:
        worlds = list(data["worlds"])
    except KeyError:
        raise ModelError("model JSON needs a 'worlds' list") from None
    by_world = data.get("valuation", {})
    atoms = sorted({p for trues in by_world.values() for p in trues})
    valuation = {p: [w for w, trues in by_world.items() if p in trues] for p in atoms}
    return build_model(
        worlds,
        [tuple(pair) for pair in data.get("order", [])],
        base=data.get("base"),
        valuation=valuation,
        bot_worlds=data.get("bot_true_at", ()),
        classical_atoms=data.get("classical_atoms", ()),
        variant=variant,
    )


def load_model(text: str, variant: str | Variant | None = None) -> KripkeModel:
    return model_from_dict(json.loads(text), variant)


def dump_model(m: KripkeModel) -> str:
    return json.dumps(model_to_dict(m))


# ---------------------------------------------------------------------------
# Evaluation


def truth_set(
    m: KripkeModel,
    f: Formula,
    variant: str | Variant,
    env: Mapping[str, frozenset[str]] | None = None,
) -> frozenset[str]:
    """Set of worlds where ``f`` holds.  ``env`` overrides atom extensions,
    which lets callers evaluate schema patterns against arbitrary persistent
    profiles."""
    v = get_variant(variant)
    return _truth(m, f, v, env)


def _truth(m, f, v, env) -> frozenset[str]:
    if isinstance(f, Atom):
        if env is not None and f.name in env:
            return env[f.name]
        return m.valuation.get(f.name, frozenset())
    if isinstance(f, Bottom):
        return m.bot_worlds if v.bottom_in_valuation else frozenset()
    if isinstance(f, And):
        return _truth(m, f.left, v, env) & _truth(m, f.right, v, env)
    if isinstance(f, Or):
        return _truth(m, f.left, v, env) | _truth(m, f.right, v, env)
    if isinstance(f, IntImp):
        a = _truth(m, f.left, v, env)
        b = _truth(m, f.right, v, env)
        return frozenset(w for w in m.worlds if m.up[w] & a <= b)
    if isinstance(f, Box):
        a = _truth(m, f.inner, v, env)
        return m.world_set if a == m.world_set else frozenset()
    if isinstance(f, ClsImp):
        a = _truth(m, f.left, v, env)
        b = _truth(m, f.right, v, env)
        name = v.name
        if name in ("s", "sbot-w", "cipc-b"):
            g = _base_of(m, v)
            return m.world_set if g not in a else b
        if name == "t":
            g = _base_of(m, v)
            if g not in a or g in b:
                return m.world_set
            return frozenset()
        if name in ("sminus-bot", "cipc-c"):
            return m.world_set if a != m.world_set else b
        if name == "cipc-a":
            return frozenset(
                w for w in m.worlds if (m.down[w] - a) or (m.down[w] & b)
            )
        raise EvalError(f"variant {name!r} has no clause for '=>'")
    raise EvalError(f"cannot evaluate node {f!r}")


def _base_of(m: KripkeModel, v: Variant) -> str:
    if m.base is None:
        raise EvalError(f"variant {v.name!r} reads the classical conditional at a base world, "
                        "but the model has none")
    return m.base


def _require_language(f: Formula, v: Variant) -> None:
    bad = fragment_violation(f, v.fragment)
    if bad is not None:
        raise EvalError(f"connective {bad!r} is not part of the {v.name!r} language")


def evaluate(m: KripkeModel, world: str, f: Formula, variant: str | Variant) -> int:
    """Truth value (0 or 1) of ``f`` at ``world`` under ``variant``."""
    v = get_variant(variant)
    _require_language(f, v)
    if world not in m.world_set:
        raise EvalError(f"{world!r} is not a world of the model")
    if v.requires_base and m.base is None:
        raise EvalError(f"variant {v.name!r} requires a model with a base world")
    return int(world in _truth(m, f, v, None))


def holds_everywhere(m: KripkeModel, f: Formula, variant: str | Variant) -> bool:
    v = get_variant(variant)
    _require_language(f, v)
    if v.requires_base and m.base is None:
        raise EvalError(f"variant {v.name!r} requires a model with a base world")
    return _truth(m, f, v, None) == m.world_set


def valid_on_model(m: KripkeModel, f: Formula, variant: str | Variant) -> bool:
    """The variant's validity notion on a single model: truth at the base for
    based variants, truth at every world for the base-free ones."""
    v = get_variant(variant)
    if v.global_consequence or m.base is None:
        return holds_everywhere(m, f, v)
    return bool(evaluate(m, m.base, f, v))


def consequence_on_model(
    m: KripkeModel, premises: Sequence[Formula], conclusion: Formula, variant: str | Variant
) -> bool:
    """Single-model consequence test: if every premise holds (at the base, or
    globally for base-free variants), so must the conclusion."""
    v = get_variant(variant)
    for p in premises:
        _require_language(p, v)
    _require_language(conclusion, v)
    if v.global_consequence:
        if all(_truth(m, p, v, None) == m.world_set for p in premises):
            return _truth(m, conclusion, v, None) == m.world_set
        return True
    if m.base is None:
        raise EvalError(f"variant {v.name!r} evaluates consequence at a base world")
    if all(m.base in _truth(m, p, v, None) for p in premises):
        return m.base in _truth(m, conclusion, v, None)
    return True


def check_persistence(
    m: KripkeModel, f: Formula, variant: str | Variant
) -> Optional[tuple[str, str]]:
    """None if ``f``'s interpretation is persistent on ``m``; otherwise a
    witness pair (w1, w2) with w1 <= w2, true at w1, false at w2."""
    v = get_variant(variant)
    _require_language(f, v)
    ts = _truth(m, f, v, None)
    for w in ts:
        for x in m.up[w]:
            if x not in ts:
                return (w, x)
    return None


