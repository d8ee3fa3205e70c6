"""Formula ASTs, language fragments, parsing, printing, and schema matching.

The object language has two implications: an intuitionistic arrow ``->``
and a classical conditional ``=>``.  ASCII input syntax::

    atoms       [a-z][a-z0-9_]*
    absurdity   bot
    prefixes    ~F  (F => bot),  -F  (F -> bot),  []F  (box)
    binary      &  |  ->  =>

``&`` binds tighter than ``|``, which binds tighter than the implications.
Both implications sit at the same precedence level and associate to the
right; mixing ``->`` and ``=>`` at one level without parentheses is a parse
error.  The UTF-8 aliases ∧ ∨ → ⊃ ⊥ □ are accepted on input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional


class ParseError(ValueError):
    """Malformed formula text; ``position`` is the offending index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FragmentError(ValueError):
    """A formula uses a connective outside the requested fragment."""


# ---------------------------------------------------------------------------
# AST


class Formula:
    """Base class of all formula nodes.  Instances are immutable and compare
    structurally."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{render_formula(self)}>"


@dataclass(frozen=True, slots=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class IntImp(Formula):
    """Intuitionistic implication ``->``."""

    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class ClsImp(Formula):
    """Classical conditional ``=>``."""

    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class Box(Formula):
    inner: Formula


BOT = Bottom()

# connective tags used by fragments and pools
AND, OR, IMP, SUP, BOX = "and", "or", "imp", "sup", "box"

_BINARY_TAG = {And: AND, Or: OR, IntImp: IMP, ClsImp: SUP}
_TAG_BINARY = {v: k for k, v in _BINARY_TAG.items()}


def make_binary(tag: str, left: Formula, right: Formula) -> Formula:
    return _TAG_BINARY[tag](left, right)


def sup_neg(f: Formula) -> Formula:
    """``~F``: negation via the classical conditional, F => bot."""
    return ClsImp(f, BOT)


def imp_neg(f: Formula) -> Formula:
    """``-F``: negation via the intuitionistic arrow, F -> bot."""
    return IntImp(f, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    """Biconditional abbreviation (a -> b) & (b -> a)."""
    return And(IntImp(a, b), IntImp(b, a))


def taut(name: str = "p") -> Formula:
    """The canonical tautology p -> p used as a truth constant."""
    a = Atom(name)
    return IntImp(a, a)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every subformula of ``f``, including ``f`` itself."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (And, Or, IntImp, ClsImp)):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, Box):
            stack.append(node.inner)


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(n.name for n in subformulas(f) if isinstance(n, Atom))


def depth(f: Formula) -> int:
    """Height of the AST; atoms and ``bot`` have depth 0."""
    if isinstance(f, (Atom, Bottom)):
        return 0
    if isinstance(f, Box):
        return depth(f.inner) + 1
    return max(depth(f.left), depth(f.right)) + 1


def substitute(f: Formula, name: str, replacement: Formula) -> Formula:
    """Replace every occurrence of the atom ``name`` in ``f`` by ``replacement``."""
    if isinstance(f, Atom):
        return replacement if f.name == name else f
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Box):
        return Box(substitute(f.inner, name, replacement))
    ctor = type(f)
    return ctor(substitute(f.left, name, replacement), substitute(f.right, name, replacement))


# ---------------------------------------------------------------------------
# Language fragments


@dataclass(frozen=True)
class LanguageFragment:
    name: str
    binary: frozenset[str]
    allow_bottom: bool = False
    allow_box: bool = False

    def allows(self, other: "LanguageFragment") -> bool:
        """True if every formula of ``other`` is legal here."""
        return (
            other.binary <= self.binary
            and (self.allow_bottom or not other.allow_bottom)
            and (self.allow_box or not other.allow_box)
        )


def _frag(name, binary, bottom=False, box=False):
    return LanguageFragment(name, frozenset(binary), bottom, box)


L_POS = _frag("pos", {AND, OR, IMP})
L_POS_NOOR = _frag("pos-noor", {AND, IMP})
L_SUP = _frag("sup", {AND, OR, IMP, SUP})
L_BOT_SUP = _frag("bot-sup", {AND, OR, IMP, SUP}, bottom=True)
L_BOT_SUP_NOOR = _frag("bot-sup-noor", {AND, IMP, SUP}, bottom=True)
L_BOT = _frag("bot", {AND, OR, IMP}, bottom=True)
L_BOT_BOX = _frag("bot-box", {AND, OR, IMP}, bottom=True, box=True)
L_CIPC = _frag("cipc", {AND, OR, IMP, SUP})
L_FULL = _frag("full", {AND, OR, IMP, SUP}, bottom=True, box=True)

FRAGMENTS = {
    f.name: f
    for f in (L_POS, L_POS_NOOR, L_SUP, L_BOT_SUP, L_BOT_SUP_NOOR, L_BOT, L_BOT_BOX, L_CIPC, L_FULL)
}


def fragment_violation(f: Formula, frag: LanguageFragment) -> Optional[str]:
    """Name of the first connective of ``f`` outside ``frag``, or None."""
    for node in subformulas(f):
        if isinstance(node, Bottom) and not frag.allow_bottom:
            return "bot"
        if isinstance(node, Box) and not frag.allow_box:
            return "box"
        tag = _BINARY_TAG.get(type(node))
        if tag is not None and tag not in frag.binary:
            return tag
    return None


def check_fragment(f: Formula, frag: LanguageFragment) -> bool:
    return fragment_violation(f, frag) is None


# ---------------------------------------------------------------------------
# Tokenizer / parser

_ALIASES = {"∧": "&", "∨": "|", "→": "->", "⊃": "=>", "⊥": "bot", "□": "[]"}

_SIMPLE = {"&": "AND", "|": "OR", "~": "TILDE", "(": "LP", ")": "RP"}


def _tokenize(text: str, metavariables: bool) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _ALIASES:
            c = _ALIASES[c]
            if c == "bot":
                toks.append(("BOT", c, i))
            elif c == "[]":
                toks.append(("BOX", c, i))
            elif c == "->":
                toks.append(("IMP", c, i))
            elif c == "=>":
                toks.append(("SUP", c, i))
            else:
                toks.append((_SIMPLE[c], c, i))
            i += 1
            continue
        if text.startswith("->", i):
            toks.append(("IMP", "->", i))
            i += 2
            continue
        if text.startswith("=>", i):
            toks.append(("SUP", "=>", i))
            i += 2
            continue
        if text.startswith("[]", i):
            toks.append(("BOX", "[]", i))
            i += 2
            continue
        if c == "-":
            toks.append(("DASH", "-", i))
            i += 1
            continue
        if c in _SIMPLE:
            toks.append((_SIMPLE[c], c, i))
            i += 1
            continue
        if c.islower():
            j = i + 1
            while j < n and (text[j].islower() or text[j].isdigit() or text[j] == "_"):
                j += 1
            word = text[i:j]
            toks.append(("BOT", word, i) if word == "bot" else ("ATOM", word, i))
            i = j
            continue
        if c.isupper():
            if not metavariables:
                raise ParseError(
                    f"uppercase name {c!r} is only legal in schemas", i
                )
            if i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_"):
                raise ParseError("metavariables are single uppercase letters", i)
            toks.append(("MVAR", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("END", "", n))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def formula(self) -> Formula:
        parts = [self.disjunction()]
        arrows: list[tuple[str, int]] = []
        while self.peek()[0] in ("IMP", "SUP"):
            kind, _, pos = self.take()
            arrows.append((kind, pos))
            parts.append(self.disjunction())
        if not arrows:
            return parts[0]
        kinds = {k for k, _ in arrows}
        if len(kinds) > 1:
            pos = next(p for k, p in arrows if k != arrows[0][0])
            raise ParseError("mixing '->' and '=>' requires parentheses", pos)
        ctor = IntImp if arrows[0][0] == "IMP" else ClsImp
        result = parts[-1]
        for part in reversed(parts[:-1]):
            result = ctor(part, result)
        return result

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek()[0] == "OR":
            self.take()
            parts.append(self.conjunction())
        result = parts[-1]
        for part in reversed(parts[:-1]):
            result = Or(part, result)
        return result

    def conjunction(self) -> Formula:
        parts = [self.prefixed()]
        while self.peek()[0] == "AND":
            self.take()
            parts.append(self.prefixed())
        result = parts[-1]
        for part in reversed(parts[:-1]):
            result = And(part, result)
        return result

    def prefixed(self) -> Formula:
        kind, _, _ = self.peek()
        if kind == "TILDE":
            self.take()
            return sup_neg(self.prefixed())
        if kind == "DASH":
            self.take()
            return imp_neg(self.prefixed())
        if kind == "BOX":
            self.take()
            return Box(self.prefixed())
        return self.atomic()

    def atomic(self) -> Formula:
        kind, text, pos = self.take()
        if kind == "LP":
            inner = self.formula()
            kind2, _, pos2 = self.take()
            if kind2 != "RP":
                raise ParseError("expected ')'", pos2)
            return inner
        if kind == "BOT":
            return BOT
        if kind in ("ATOM", "MVAR"):
            return Atom(text)
        raise ParseError(f"expected a formula, found {text!r}" if text else "unexpected end of input", pos)


def _parse(text: str, metavariables: bool) -> Formula:
    parser = _Parser(_tokenize(text, metavariables))
    result = parser.formula()
    kind, tok, pos = parser.peek()
    if kind != "END":
        raise ParseError(f"trailing input {tok!r}", pos)
    return result


def parse_formula(text: str, frag: Optional[LanguageFragment] = None) -> Formula:
    """Parse ``text``; if ``frag`` is given, reject formulas outside it."""
    f = _parse(text, metavariables=False)
    if frag is not None:
        bad = fragment_violation(f, frag)
        if bad is not None:
            raise FragmentError(f"connective {bad!r} not allowed in fragment {frag.name!r}")
    return f


# ---------------------------------------------------------------------------
# Rendering

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_PREFIX, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(f: Formula) -> int:
    if isinstance(f, (Atom, Bottom)):
        return _PREC_ATOM
    if isinstance(f, Box):
        return _PREC_PREFIX
    if isinstance(f, (And, Or)):
        return _PREC_AND if isinstance(f, And) else _PREC_OR
    return _PREC_IMP


def _render(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bottom):
        return "bot"
    if isinstance(f, Box):
        child = _render(f.inner)
        if _prec(f.inner) < _PREC_PREFIX:
            child = f"({child})"
        return f"[]{child}"
    op = {And: "&", Or: "|", IntImp: "->", ClsImp: "=>"}[type(f)]
    own = _prec(f)
    left = _render(f.left)
    if _prec(f.left) <= own:
        left = f"({left})"
    right = _render(f.right)
    # right-associative; a different implication on the right still needs parens
    if _prec(f.right) < own or (own == _PREC_IMP and _prec(f.right) == own and type(f.right) is not type(f)):
        right = f"({right})"
    return f"{left} {op} {right}"


def render_formula(f: Formula) -> str:
    """Minimal-parenthesis ASCII rendering; ``parse_formula`` inverts it."""
    return _render(f)


# ---------------------------------------------------------------------------
# Schemas

#: side conditions a schema may impose on a metavariable
COND_CLASSICAL = "classical"  # instance built from classical atoms using => only
COND_ATOM = "atom"  # instance must be a propositional variable


@dataclass(frozen=True)
class Schema:
    """A formula pattern whose single-uppercase-letter leaves are metavariables."""

    name: str
    pattern: Formula
    conditions: tuple[tuple[str, str], ...] = ()

    def metavariables(self) -> frozenset[str]:
        return frozenset(
            n.name for n in subformulas(self.pattern) if isinstance(n, Atom) and is_metavariable(n.name)
        )

    def is_concrete(self) -> bool:
        return not self.metavariables()


def is_metavariable(name: str) -> bool:
    return len(name) == 1 and name.isupper()


def parse_schema(name: str, text: str, conditions: Mapping[str, str] | None = None) -> Schema:
    pattern = _parse(text, metavariables=True)
    conds = tuple(sorted((conditions or {}).items()))
    return Schema(name, pattern, conds)


def is_classical_formula(f: Formula, classical_atoms: frozenset[str]) -> bool:
    """Built from classical atoms using only the classical conditional."""
    if isinstance(f, Atom):
        return f.name in classical_atoms
    if isinstance(f, ClsImp):
        return is_classical_formula(f.left, classical_atoms) and is_classical_formula(
            f.right, classical_atoms
        )
    return False


def _unify(pattern: Formula, f: Formula, binding: dict[str, Formula]) -> bool:
    if isinstance(pattern, Atom):
        if is_metavariable(pattern.name):
            bound = binding.get(pattern.name)
            if bound is None:
                binding[pattern.name] = f
                return True
            return bound == f
        return pattern == f
    if isinstance(pattern, Bottom):
        return isinstance(f, Bottom)
    if isinstance(pattern, Box):
        return isinstance(f, Box) and _unify(pattern.inner, f.inner, binding)
    if type(pattern) is not type(f):
        return False
    return _unify(pattern.left, f.left, binding) and _unify(pattern.right, f.right, binding)


def match_schema(
    schema: Schema, f: Formula, classical_atoms: frozenset[str] = frozenset()
) -> Optional[dict[str, Formula]]:
    """Assignment of metavariables making ``schema`` equal ``f``, or None.

    Side conditions are enforced: a ``classical`` metavariable must be bound
    to a formula built from ``classical_atoms`` via ``=>`` only, an ``atom``
    metavariable to a propositional variable.
    """
    binding: dict[str, Formula] = {}
    if not _unify(schema.pattern, f, binding):
        return None
    for mv, cond in schema.conditions:
        value = binding.get(mv)
        if value is None:
            continue
        if cond == COND_CLASSICAL and not is_classical_formula(value, classical_atoms):
            return None
        if cond == COND_ATOM and not (isinstance(value, Atom) and not is_metavariable(value.name)):
            return None
    return binding


def instantiate(schema: Schema, assignment: Mapping[str, Formula]) -> Formula:
    """Substitute ``assignment`` into the schema's metavariables."""

    def walk(node: Formula) -> Formula:
        if isinstance(node, Atom) and is_metavariable(node.name):
            try:
                return assignment[node.name]
            except KeyError:
                raise ValueError(f"metavariable {node.name!r} of {schema.name} unassigned") from None
        if isinstance(node, (Atom, Bottom)):
            return node
        if isinstance(node, Box):
            return Box(walk(node.inner))
        return type(node)(walk(node.left), walk(node.right))

    return walk(schema.pattern)
