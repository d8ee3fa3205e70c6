"""Three-valued matrix over {1, i, 0} for the sup/imp language.

The matrix is the algebra of the two-world chain model g <= w: value 1 means
true at both worlds, i true only at the upper world, 0 false at both.  Only
value 1 is designated.
"""

from __future__ import annotations

from itertools import product
from typing import Mapping, Optional

from .semantics import build_model, evaluate
from .syntax import And, Atom, Bottom, ClsImp, Formula, IntImp, Or, atoms

V1, VI, V0 = "1", "i", "0"
#: enumeration order; also the per-atom order used to pick refutations
VALUES = (V1, VI, V0)

AND3 = {
    (V1, V1): V1, (V1, VI): VI, (V1, V0): V0,
    (VI, V1): VI, (VI, VI): VI, (VI, V0): V0,
    (V0, V1): V0, (V0, VI): V0, (V0, V0): V0,
}
OR3 = {
    (V1, V1): V1, (V1, VI): V1, (V1, V0): V1,
    (VI, V1): V1, (VI, VI): VI, (VI, V0): VI,
    (V0, V1): V1, (V0, VI): VI, (V0, V0): V0,
}
SUP3 = {
    (V1, V1): V1, (V1, VI): VI, (V1, V0): V0,
    (VI, V1): V1, (VI, VI): V1, (VI, V0): V1,
    (V0, V1): V1, (V0, VI): V1, (V0, V0): V1,
}
IMP3 = {
    (V1, V1): V1, (V1, VI): VI, (V1, V0): V0,
    (VI, V1): V1, (VI, VI): V1, (VI, V0): V0,
    (V0, V1): V1, (V0, VI): V1, (V0, V0): V1,
}

TABLES = {And: AND3, Or: OR3, ClsImp: SUP3, IntImp: IMP3}


class MatrixError(ValueError):
    pass


def eval3(f: Formula, assignment: Mapping[str, str]) -> str:
    """Value of ``f`` under an atom assignment into {1, i, 0}."""
    if isinstance(f, Atom):
        try:
            return assignment[f.name]
        except KeyError:
            raise MatrixError(f"atom {f.name!r} is unassigned") from None
    if isinstance(f, Bottom):
        raise MatrixError("the matrix is defined for the bot-free language only")
    table = TABLES.get(type(f))
    if table is None:
        raise MatrixError(f"the matrix has no table for {type(f).__name__}")
    return table[(eval3(f.left, assignment), eval3(f.right, assignment))]


def valid3(f: Formula) -> Optional[dict[str, str]]:
    """None if ``f`` takes value 1 under every assignment, otherwise the
    first refuting assignment (atoms sorted, values tried in order 1, i, 0)."""
    names = sorted(atoms(f))
    for combo in product(VALUES, repeat=len(names)):
        assignment = dict(zip(names, combo))
        if eval3(f, assignment) != V1:
            return assignment
    return None


def chain_model(assignment: Mapping[str, str]):
    """Two-world chain g <= w realizing ``assignment``: 1 -> true at both,
    i -> true at w only, 0 -> false at both."""
    trues = {
        atom: {V1: ("g", "w"), VI: ("w",), V0: ()}[value]
        for atom, value in assignment.items()
    }
    return build_model(("g", "w"), [("g", "w")], base="g", valuation=trues, variant="s")


def value_on_chain(m, f: Formula) -> str:
    at_g, at_w = evaluate(m, "g", f, "s"), evaluate(m, "w", f, "s")
    if at_g:
        return V1
    return VI if at_w else V0


def chain2_correspondence(f: Formula, assignment: Mapping[str, str]) -> bool:
    """The matrix value of ``f`` equals its value read off the chain model."""
    return eval3(f, assignment) == value_on_chain(chain_model(assignment), f)
