"""Translations between the conditional and box languages, and the model
transformations that accompany them: base addition, truncation, and fresh
root addition."""

from __future__ import annotations

from .semantics import KripkeModel, MPC, ModelError, build_model, get_variant
from .syntax import (
    Atom,
    BOT,
    Bottom,
    Box,
    ClsImp,
    Formula,
    FragmentError,
    IntImp,
    L_BOT_BOX,
    L_BOT_SUP,
    fragment_violation,
)


def box_translate(f: Formula) -> Formula:
    """Rewrite the conditional through box: (A => B) becomes []A' -> B'."""
    bad = fragment_violation(f, L_BOT_SUP)
    if bad is not None:
        raise FragmentError(f"box_translate input uses {bad!r}")
    return _box(f)


def _box(f: Formula) -> Formula:
    if isinstance(f, (Atom, Bottom)):
        return f
    if isinstance(f, ClsImp):
        return IntImp(Box(_box(f.left)), _box(f.right))
    return type(f)(_box(f.left), _box(f.right))


def sup_translate(f: Formula) -> Formula:
    """Rewrite box through the conditional: []A becomes (A' => bot) => bot."""
    bad = fragment_violation(f, L_BOT_BOX)
    if bad is not None:
        raise FragmentError(f"sup_translate input uses {bad!r}")
    return _sup(f)


def _sup(f: Formula) -> Formula:
    if isinstance(f, (Atom, Bottom)):
        return f
    if isinstance(f, Box):
        return ClsImp(ClsImp(_sup(f.inner), BOT), BOT)
    return type(f)(_sup(f.left), _sup(f.right))


# ---------------------------------------------------------------------------
# Model transformations


def add_base(m: KripkeModel, new_world: str = "g") -> KripkeModel:
    """Extend a base-free model with a least world.

    An atom holds at the new base exactly when it held at every old world,
    which keeps the valuation persistent; a classical atom therefore stays
    constant.  Collision with an existing world id is an error.
    """
    if m.base is not None:
        raise ModelError("model already has a base")
    if new_world in m.world_set:
        raise ModelError(f"world id {new_world!r} already in use")
    if m.bot_worlds:
        raise ModelError("base addition is defined for models with constant-false bot")
    worlds = (new_world,) + m.worlds
    order = [(a, b) for (a, b) in m.order] + [(new_world, w) for w in worlds]
    valuation = {
        atom: (ext | {new_world}) if ext == m.world_set else ext
        for atom, ext in m.valuation.items()
    }
    return build_model(
        worlds,
        order,
        base=new_world,
        valuation=valuation,
        classical_atoms=m.classical_atoms,
    )


def truncate(m: KripkeModel, world: str, variant="mpc") -> KripkeModel:
    """Restrict ``m`` to the worlds above ``world``.

    Only meaningful for variants whose clauses are local to the upward cone:
    refused when the variant reads a base world or quantifies over the whole
    model (the box and the base-free conditional clauses)."""
    v = get_variant(variant)
    if v is not MPC:
        raise ModelError(f"truncation is not truth-preserving for variant {v.name!r}")
    if world not in m.world_set:
        raise ModelError(f"{world!r} is not a world of the model")
    keep = m.up[world]
    worlds = tuple(w for w in m.worlds if w in keep)
    order = [(a, b) for (a, b) in m.order if a in keep and b in keep]
    valuation = {atom: ext & keep for atom, ext in m.valuation.items()}
    return build_model(
        worlds,
        order,
        valuation=valuation,
        bot_worlds=m.bot_worlds & keep,
        classical_atoms=m.classical_atoms,
        variant=v,
    )


def add_fresh_root_mpc(m: KripkeModel, new_world: str = "root") -> KripkeModel:
    """Put a fresh root below an MPC model, with every atom and bot false
    there; the result validates with the root as base and bot false at it."""
    if new_world in m.world_set:
        raise ModelError(f"world id {new_world!r} already in use")
    worlds = (new_world,) + m.worlds
    order = [(a, b) for (a, b) in m.order] + [(new_world, w) for w in worlds]
    return build_model(
        worlds,
        order,
        base=new_world,
        valuation=dict(m.valuation),
        bot_worlds=m.bot_worlds,
        classical_atoms=m.classical_atoms,
        variant="sbot-w",
    )
