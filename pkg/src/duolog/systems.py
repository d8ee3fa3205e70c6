"""Registry of the Hilbert-style proof systems.

Each system is a set of axiom schemata (or concrete axioms, for the
substitution-rule systems), a rule set, and a language fragment.  Rules:

    MP / CMP   detach the classical conditional:  A, A => B / B
    MP2 / IMP  detach the intuitionistic arrow:   A, A -> B / B
    RN         necessitation:                     A / []A
    Sub        uniform substitution (concrete-axiom systems only)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Atom,
    COND_ATOM,
    COND_CLASSICAL,
    L_BOT,
    L_BOT_BOX,
    L_BOT_SUP,
    L_CIPC,
    L_SUP,
    LanguageFragment,
    Schema,
    instantiate,
    parse_schema,
)

RULE_MP = "MP"
RULE_MP2 = "MP2"
RULE_CMP = "CMP"
RULE_IMP = "IMP"
RULE_RN = "RN"
RULE_SUB = "Sub"


@dataclass(frozen=True)
class ProofSystem:
    name: str
    axioms: tuple[Schema, ...]
    rules: frozenset[str]
    fragment: LanguageFragment
    variant_name: Optional[str]
    #: axiom names the proof builder may use instead of deriving these shapes
    sup_k_axiom: Optional[str] = None
    sup_s_axiom: Optional[str] = None
    int_k_axiom: str = "Ax1"
    int_s_axiom: str = "Ax2"

    def axiom(self, name: str) -> Schema:
        for schema in self.axioms:
            if schema.name == name:
                return schema
        raise KeyError(f"system {self.name!r} has no axiom {name!r}")

    def has_axiom(self, name: str) -> bool:
        return any(s.name == name for s in self.axioms)

    @property
    def concrete(self) -> bool:
        return RULE_SUB in self.rules


def _s(name: str, text: str, **conditions: str) -> Schema:
    return parse_schema(name, text, conditions or None)


_INT_AXIOMS = (
    _s("Ax1", "A -> (B -> A)"),
    _s("Ax2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    _s("Ax3", "(A & B) -> A"),
    _s("Ax4", "(A & B) -> B"),
    _s("Ax5", "(C -> A) -> ((C -> B) -> (C -> (A & B)))"),
    _s("Ax6", "A -> (A | B)"),
    _s("Ax7", "B -> (A | B)"),
    _s("Ax8", "(A -> C) -> ((B -> C) -> ((A | B) -> C))"),
)

_MIX_AXIOMS = (
    _s("AxM1", "(A -> B) => (A => B)"),
    _s("AxM2", "(A => (B => C)) -> ((A => B) => (A => C))"),
    _s("AxM3", "(A => (B -> C)) -> (B -> (A => C))"),
    _s("AxM4", "(A -> (B => C)) -> (B => (A -> C))"),
    _s("AxM5", "((A => B) => C) -> ((A => C) -> C)"),
    _s("AxM6", "(A => C) -> ((B => C) -> ((A | B) => C))"),
)

_AX0 = _s("Ax0", "bot -> A")
_AXE = _s("AxE", "bot => A")

# the alternative system reads both sides of => at the base; it swaps two of
# the mixing axioms for the conditional's own K and assertion forms
_T_EXTRAS = (
    _s("Ksup", "A => (B => A)"),
    _s("MP3", "A => ((A => B) -> B)"),
    _s("T1", "(A => B) -> (((P -> P) => A) -> B)", P=COND_ATOM),
    _s("T2", "(A => B) -> (C => (A => B))"),
)

_BOX_AXIOMS = (
    _s("Box1", "[](A -> B) -> ([]A -> []B)"),
    _s("Box2", "[]A -> A"),
    _s("Box3", "[]A -> [][]A"),
    _s("Box4", "[]A | []([]A -> B)"),
)

_CIPC_AXIOMS = (
    _s("C1", "A => (B => A)"),
    _s("C2", "(A => (B => C)) => ((A => B) => (A => C))"),
    _s("C3", "((A => B) => A) => A"),
    _s("I1", "A -> (B -> A)"),
    _s("I2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    _s("X1", "A -> (B => A)"),
    _s("X2", "(A => B) -> (A -> B)", A=COND_CLASSICAL),
    _s("X3", "A => ((A => B) -> (A -> B))"),
    _s("X4", "(X => (A -> B)) -> ((X => A) -> (X => B))"),
)

#: canonical atoms used when a schema is frozen into a concrete axiom
_CONCRETE_ATOMS = {"A": Atom("p"), "B": Atom("q"), "C": Atom("r"), "X": Atom("s")}


def concretize(schema: Schema) -> Schema:
    """Freeze a schema into the concrete axiom with atoms p, q, r."""
    assignment = {mv: _CONCRETE_ATOMS[mv] for mv in schema.metavariables()}
    return Schema(schema.name, instantiate(schema, assignment))


def _system(name, axioms, rules, fragment, variant, **kw) -> ProofSystem:
    return ProofSystem(name, tuple(axioms), frozenset(rules), fragment, variant, **kw)


_S_AXIOMS = _INT_AXIOMS + _MIX_AXIOMS
_S_MINUS_AXIOMS = tuple(a for a in _S_AXIOMS if a.name != "AxM6")
_T_AXIOMS = tuple(a for a in _S_AXIOMS if a.name not in ("AxM3", "AxM4")) + _T_EXTRAS

SYSTEMS: dict[str, ProofSystem] = {
    sys.name: sys
    for sys in (
        _system("s", _S_AXIOMS, {RULE_MP}, L_SUP, "s"),
        _system("t", _T_AXIOMS, {RULE_MP}, L_SUP, "t", sup_k_axiom="Ksup"),
        _system("s-minus", _S_MINUS_AXIOMS, {RULE_MP}, L_SUP, "sminus-bot"),
        _system("s-bot", _S_AXIOMS + (_AX0,), {RULE_MP}, L_BOT_SUP, "s"),
        _system("s-minus-bot", _S_MINUS_AXIOMS + (_AX0,), {RULE_MP}, L_BOT_SUP, "sminus-bot"),
        _system(
            "s-bot2",
            tuple(concretize(a) for a in _S_AXIOMS + (_AX0,)),
            {RULE_MP, RULE_SUB},
            L_BOT_SUP,
            "s",
        ),
        _system(
            "s-minus-bot2",
            tuple(concretize(a) for a in _S_MINUS_AXIOMS + (_AX0,)),
            {RULE_MP, RULE_SUB},
            L_BOT_SUP,
            "sminus-bot",
        ),
        _system("s-bot-w", _S_AXIOMS + (_AXE,), {RULE_MP}, L_BOT_SUP, "sbot-w"),
        _system("l4", _INT_AXIOMS + (_AX0,) + _BOX_AXIOMS, {RULE_RN, RULE_MP2}, L_BOT_BOX, "l4"),
        _system("mpc", _INT_AXIOMS, {RULE_MP2}, L_BOT, "mpc"),
        _system(
            "cipc",
            _CIPC_AXIOMS,
            {RULE_CMP, RULE_IMP},
            L_CIPC,
            "cipc-b",
            sup_k_axiom="C1",
            sup_s_axiom="C2",
            int_k_axiom="I1",
            int_s_axiom="I2",
        ),
    )
}


def get_system(name: str | ProofSystem) -> ProofSystem:
    if isinstance(name, ProofSystem):
        return name
    try:
        return SYSTEMS[name]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; expected one of {sorted(SYSTEMS)}") from None
