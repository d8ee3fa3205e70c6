"""Proof objects, the step checker, and proof-producing machinery.

A proof is a sequence of steps, each justified as a hypothesis, an axiom
instance, a rule application, or (in the concrete-axiom systems) a uniform
substitution.  ``check_proof`` verifies every step against the proof's
system.  ``ProofBuilder`` constructs primitive proofs and provides macros
that expand derived forms (arrow identity, the conditional's K and S
shapes, transitivity, ...) into primitive steps.  ``ImpDerivation`` adds
hypothetical reasoning in the arrow fragment with hypothesis discharge,
and ``deduction_transform`` implements the deduction theorem for the
classical conditional as a proof-to-proof transformation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Union

from .syntax import (
    Atom,
    ClsImp,
    Formula,
    IntImp,
    fragment_violation,
    instantiate,
    is_classical_formula,
    is_metavariable,
    parse_formula,
    render_formula,
    atoms as formula_atoms,
)
from .systems import (
    ProofSystem,
    RULE_CMP,
    RULE_IMP,
    RULE_MP,
    RULE_MP2,
    RULE_RN,
    RULE_SUB,
    get_system,
)


class ProofError(ValueError):
    """Malformed proof construction (builder misuse, bad JSON, ...)."""


class DeductionError(ValueError):
    """The deduction transformation does not apply."""


# ---------------------------------------------------------------------------
# Proof data


@dataclass(frozen=True)
class Hyp:
    index: int


@dataclass(frozen=True)
class AxiomInst:
    name: str
    assignment: tuple[tuple[str, Formula], ...] = ()

    def as_dict(self) -> dict[str, Formula]:
        return dict(self.assignment)


def axiom_inst(name: str, assignment: Mapping[str, Formula] | None = None) -> AxiomInst:
    return AxiomInst(name, tuple(sorted((assignment or {}).items())))


@dataclass(frozen=True)
class RuleApp:
    rule: str
    premises: tuple[int, ...]


@dataclass(frozen=True)
class Subst:
    source: int
    atom: str
    replacement: Formula


Justification = Union[Hyp, AxiomInst, RuleApp, Subst]


@dataclass(frozen=True)
class Step:
    formula: Formula
    by: Justification


@dataclass(frozen=True)
class Proof:
    system: str
    hypotheses: tuple[Formula, ...]
    steps: tuple[Step, ...]
    classical_atoms: frozenset[str] = frozenset()

    @property
    def conclusion(self) -> Formula:
        if not self.steps:
            raise ProofError("empty proof has no conclusion")
        return self.steps[-1].formula


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    failed_step: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.accepted


# ---------------------------------------------------------------------------
# Checker

#: which implication each detachment rule eliminates
_DETACH = {RULE_MP: ClsImp, RULE_CMP: ClsImp, RULE_MP2: IntImp, RULE_IMP: IntImp}


def check_proof(proof: Proof) -> Verdict:
    """Verify every step; the verdict carries the first failure, if any."""
    try:
        system = get_system(proof.system)
    except KeyError as exc:
        return Verdict(False, None, str(exc))
    for idx, step in enumerate(proof.steps):
        reason = _check_step(system, proof, idx, step)
        if reason is not None:
            return Verdict(False, idx, reason)
    return Verdict(True)


def _check_step(system: ProofSystem, proof: Proof, idx: int, step: Step) -> Optional[str]:
    bad = fragment_violation(step.formula, system.fragment)
    if bad is not None:
        return f"formula uses {bad!r}, outside the {system.name!r} language"
    by = step.by

    if isinstance(by, Hyp):
        if not 0 <= by.index < len(proof.hypotheses):
            return f"hypothesis index {by.index} out of range"
        if proof.hypotheses[by.index] != step.formula:
            return "step formula differs from the cited hypothesis"
        return None

    if isinstance(by, AxiomInst):
        try:
            schema = system.axiom(by.name)
        except KeyError:
            return f"system {system.name!r} has no axiom {by.name!r}"
        assignment = by.as_dict()
        extra = set(assignment) - schema.metavariables()
        if extra:
            return f"assignment binds unknown metavariables {sorted(extra)}"
        try:
            instance = instantiate(schema, assignment)
        except ValueError as exc:
            return str(exc)
        if instance != step.formula:
            return f"step formula is not the cited {by.name} instance"
        for mv, cond in schema.conditions:
            value = assignment.get(mv)
            if value is None:
                continue
            if cond == "classical" and not is_classical_formula(value, proof.classical_atoms):
                return f"metavariable {mv} of {by.name} must be classical"
            if cond == "atom" and not (isinstance(value, Atom) and not is_metavariable(value.name)):
                return f"metavariable {mv} of {by.name} must be a propositional variable"
        return None

    if isinstance(by, RuleApp):
        if by.rule not in system.rules:
            return f"rule {by.rule!r} is not a rule of {system.name!r}"
        if any(not 0 <= p < idx for p in by.premises):
            return "rule premise must refer to an earlier step"
        if by.rule == RULE_RN:
            if len(by.premises) != 1:
                return "RN takes exactly one premise"
            from .syntax import Box

            if step.formula != Box(proof.steps[by.premises[0]].formula):
                return "RN conclusion must box its premise"
            return None
        ctor = _DETACH.get(by.rule)
        if ctor is None:
            return f"rule {by.rule!r} has no checking clause"
        if len(by.premises) != 2:
            return f"{by.rule} takes a minor and a major premise"
        minor, major = by.premises
        expected = ctor(proof.steps[minor].formula, step.formula)
        if proof.steps[major].formula != expected:
            return f"major premise of {by.rule} should be {render_formula(expected)!r}"
        return None

    if isinstance(by, Subst):
        if RULE_SUB not in system.rules:
            return f"substitution is not a rule of {system.name!r}"
        if proof.hypotheses:
            return "substitution steps are only legal in hypothesis-free proofs"
        if not 0 <= by.source < idx:
            return "substitution source must be an earlier step"
        if step.formula != _substitute(proof.steps[by.source].formula, by.atom, by.replacement):
            return "step formula is not the stated substitution instance"
        return None

    return f"unknown justification {by!r}"


def _substitute(f, name, replacement):
    from .syntax import substitute

    return substitute(f, name, replacement)


# ---------------------------------------------------------------------------
# Builder


class ProofBuilder:
    """Accumulates primitive steps; duplicate formulas are reused.

    Macros append the full primitive derivation of a derived form and
    return the index of its concluding step.  The arrow detachment ``mp2``
    is a primitive rule where the system has one and is otherwise expanded
    through the bridging axiom AxM1.
    """

    def __init__(
        self,
        system: str | ProofSystem,
        hypotheses: Sequence[Formula] = (),
        classical_atoms: Sequence[str] = (),
    ):
        self.system = get_system(system)
        self.hypotheses = tuple(hypotheses)
        self.classical_atoms = frozenset(classical_atoms)
        self._steps: list[Step] = []
        self._memo: dict[Formula, int] = {}

    # -- primitives ---------------------------------------------------------

    def _add(self, formula: Formula, by: Justification) -> int:
        cached = self._memo.get(formula)
        if cached is not None:
            return cached
        self._steps.append(Step(formula, by))
        idx = len(self._steps) - 1
        self._memo[formula] = idx
        return idx

    def formula_at(self, idx: int) -> Formula:
        return self._steps[idx].formula

    def hyp(self, index: int) -> int:
        return self._add(self.hypotheses[index], Hyp(index))

    def hyp_of(self, formula: Formula) -> int:
        try:
            index = self.hypotheses.index(formula)
        except ValueError:
            raise ProofError(f"{render_formula(formula)!r} is not a hypothesis") from None
        return self._add(formula, Hyp(index))

    def axiom(self, name: str, assignment: Mapping[str, Formula] | None = None) -> int:
        schema = self.system.axiom(name)
        assignment = dict(assignment or {})
        return self._add(instantiate(schema, assignment), axiom_inst(name, assignment))

    def mp(self, minor: int, major: int) -> int:
        """Detach the classical conditional: from X and X => Y conclude Y."""
        rule = RULE_MP if RULE_MP in self.system.rules else RULE_CMP
        if rule not in self.system.rules:
            raise ProofError(f"system {self.system.name!r} cannot detach '=>'")
        major_f = self.formula_at(major)
        if not isinstance(major_f, ClsImp) or major_f.left != self.formula_at(minor):
            raise ProofError("malformed conditional detachment")
        return self._add(major_f.right, RuleApp(rule, (minor, major)))

    def mp2(self, minor: int, major: int) -> int:
        """Detach the arrow: from X and X -> Y conclude Y (expanding through
        AxM1 when the arrow detachment is not primitive)."""
        major_f = self.formula_at(major)
        if not isinstance(major_f, IntImp) or major_f.left != self.formula_at(minor):
            raise ProofError("malformed arrow detachment")
        for rule in (RULE_MP2, RULE_IMP):
            if rule in self.system.rules:
                return self._add(major_f.right, RuleApp(rule, (minor, major)))
        bridge = self.axiom("AxM1", {"A": major_f.left, "B": major_f.right})
        detached = self.mp(major, bridge)
        return self.mp(minor, detached)

    def rn(self, premise: int) -> int:
        from .syntax import Box

        if RULE_RN not in self.system.rules:
            raise ProofError(f"system {self.system.name!r} has no necessitation rule")
        return self._add(Box(self.formula_at(premise)), RuleApp(RULE_RN, (premise,)))

    def sub(self, source: int, atom: str, replacement: Formula) -> int:
        return self._add(
            _substitute(self.formula_at(source), atom, replacement), Subst(source, atom, replacement)
        )

    def absorb(self, proof: Proof) -> int:
        """Splice another proof of the same system into this one."""
        if get_system(proof.system) is not self.system:
            raise ProofError("cannot absorb a proof from a different system")
        mapping: dict[int, int] = {}
        for idx, step in enumerate(proof.steps):
            by = step.by
            if isinstance(by, Hyp):
                mapping[idx] = self.hyp_of(step.formula)
            elif isinstance(by, AxiomInst):
                mapping[idx] = self.axiom(by.name, by.as_dict())
            elif isinstance(by, RuleApp):
                premises = tuple(mapping[p] for p in by.premises)
                cached = self._memo.get(step.formula)
                if cached is not None:
                    mapping[idx] = cached
                else:
                    self._steps.append(Step(step.formula, RuleApp(by.rule, premises)))
                    mapping[idx] = len(self._steps) - 1
                    self._memo[step.formula] = mapping[idx]
            else:
                raise ProofError("cannot absorb substitution steps")
        return mapping[len(proof.steps) - 1]

    def conclude(self, idx: int) -> int:
        """Ensure the step at ``idx`` is also the final step.

        Memoization can satisfy the concluding formula from an earlier step;
        re-appending the same step (its premises still point backwards) makes
        the proof's conclusion unambiguous."""
        if idx == len(self._steps) - 1:
            return idx
        step = self._steps[idx]
        self._steps.append(step)
        return len(self._steps) - 1

    def build(self) -> Proof:
        return Proof(self.system.name, self.hypotheses, tuple(self._steps), self.classical_atoms)

    # -- arrow-fragment helpers ----------------------------------------------

    def _k_axiom(self, a: Formula, b: Formula) -> int:
        """a -> (b -> a)"""
        return self.axiom(self.system.int_k_axiom, {"A": a, "B": b})

    def _s_axiom(self, a: Formula, b: Formula, c: Formula) -> int:
        """(a -> (b -> c)) -> ((a -> b) -> (a -> c))"""
        return self.axiom(self.system.int_s_axiom, {"A": a, "B": b, "C": c})

    def imp_id(self, a: Formula) -> int:
        """a -> a"""
        target = IntImp(a, a)
        if target in self._memo:
            return self._memo[target]
        aa = IntImp(a, a)
        s = self._s_axiom(a, aa, a)
        k1 = self._k_axiom(a, aa)
        step = self.mp2(k1, s)
        k2 = self._k_axiom(a, a)
        return self.mp2(k2, step)

    def prefix(self, yz: int, x: Formula) -> int:
        """From a step Y -> Z conclude (x -> Y) -> (x -> Z)."""
        f = self.formula_at(yz)
        if not isinstance(f, IntImp):
            raise ProofError("prefix needs an arrow step")
        k = self._k_axiom(f, x)
        lifted = self.mp2(yz, k)
        s = self._s_axiom(x, f.left, f.right)
        return self.mp2(lifted, s)

    def imp_trans(self, i: int, j: int) -> int:
        """From X -> Y and Y -> Z conclude X -> Z."""
        fi, fj = self.formula_at(i), self.formula_at(j)
        if not (isinstance(fi, IntImp) and isinstance(fj, IntImp) and fi.right == fj.left):
            raise ProofError("imp_trans needs composable arrow steps")
        return self.mp2(i, self.prefix(j, fi.left))

    def apply_under(self, outer: int, inner: int) -> int:
        """From W -> (U -> V) and U conclude W -> V."""
        f = self.formula_at(outer)
        if not (isinstance(f, IntImp) and isinstance(f.right, IntImp)):
            raise ProofError("apply_under needs a nested arrow step")
        w, u, v = f.left, f.right.left, f.right.right
        if self.formula_at(inner) != u:
            raise ProofError("inner premise does not match")
        k = self._k_axiom(u, w)
        wu = self.mp2(inner, k)
        s = self._s_axiom(w, u, v)
        step = self.mp2(outer, s)
        return self.mp2(wu, step)

    def adjoin(self, i: int, j: int) -> int:
        """From P and Q conclude P & Q."""
        p, q = self.formula_at(i), self.formula_at(j)
        ax5 = self.axiom("Ax5", {"C": p, "A": p, "B": q})
        step = self.mp2(self.imp_id(p), ax5)
        k = self._k_axiom(q, p)
        pq = self.mp2(j, k)
        step = self.mp2(pq, step)
        return self.mp2(i, step)

    def assertion(self, x: Formula, y: Formula) -> int:
        """x -> ((x -> y) -> y)"""
        target = IntImp(x, IntImp(IntImp(x, y), y))
        if target in self._memo:
            return self._memo[target]
        d = ImpDerivation([x, IntImp(x, y)])
        d.mp2(d.hyp(x), d.hyp(IntImp(x, y)))
        return d.discharge(IntImp(x, y)).discharge(x).emit(self)

    # -- conditional-fragment macros ------------------------------------------

    def kmix(self, a: Formula, b: Formula) -> int:
        """a -> (b => a)"""
        ident = self.imp_id(a)
        k = self._k_axiom(IntImp(a, a), b)
        weakened = self.mp2(ident, k)  # b -> (a -> a)
        bridge = self.axiom("AxM1", {"A": b, "B": IntImp(a, a)})
        boxed = self.mp(weakened, bridge)  # b => (a -> a)
        swap = self.axiom("AxM3", {"A": b, "B": a, "C": a})
        return self.mp2(boxed, swap)

    def ksup(self, a: Formula, b: Formula) -> int:
        """a => (b => a)"""
        if self.system.sup_k_axiom:
            return self.axiom(self.system.sup_k_axiom, {"A": a, "B": b})
        mix = self.kmix(a, b)
        bridge = self.axiom("AxM1", {"A": a, "B": ClsImp(b, a)})
        return self.mp(mix, bridge)

    def ssup(self, a: Formula, b: Formula, c: Formula) -> int:
        """(a => (b => c)) => ((a => b) => (a => c))"""
        if self.system.sup_s_axiom:
            return self.axiom(self.system.sup_s_axiom, {"A": a, "B": b, "C": c})
        inner = self.axiom("AxM2", {"A": a, "B": b, "C": c})
        f = self.formula_at(inner)
        bridge = self.axiom("AxM1", {"A": f.left, "B": f.right})
        return self.mp(inner, bridge)

    def sup_id(self, a: Formula) -> int:
        """a => a"""
        target = ClsImp(a, a)
        if target in self._memo:
            return self._memo[target]
        aa = ClsImp(a, a)
        k1 = self.ksup(a, aa)
        k2 = self.ksup(a, a)
        s = self.ssup(a, aa, a)
        step = self.mp(k1, s)
        return self.mp(k2, step)

    def mp3(self, a: Formula, b: Formula) -> int:
        """a => ((a => b) -> b)"""
        if self.system.has_axiom("MP3"):
            return self.axiom("MP3", {"A": a, "B": b})
        ab = ClsImp(a, b)
        ident = self.imp_id(ab)
        swap = self.axiom("AxM4", {"A": ab, "B": a, "C": b})
        return self.mp2(ident, swap)

    def trans(self, i: int, j: int) -> int:
        """From X => Y and Y => Z conclude X => Z."""
        fi, fj = self.formula_at(i), self.formula_at(j)
        if not (isinstance(fi, ClsImp) and isinstance(fj, ClsImp) and fi.right == fj.left):
            raise ProofError("trans needs composable conditional steps")
        x, y, z = fi.left, fi.right, fj.right
        k = self.ksup(ClsImp(y, z), x)
        lifted = self.mp(j, k)  # x => (y => z)
        s = self.ssup(x, y, z)
        step = self.mp(lifted, s)
        return self.mp(i, step)

    def sup_compose(self, i: int, j: int) -> int:
        """From X => U and U -> V conclude X => V."""
        fj = self.formula_at(j)
        if not isinstance(fj, IntImp):
            raise ProofError("sup_compose needs an arrow second premise")
        bridge = self.axiom("AxM1", {"A": fj.left, "B": fj.right})
        return self.trans(i, self.mp(j, bridge))

    def ex(self, a: Formula, b: Formula, c: Formula) -> int:
        """(a => (b => c)) -> (b => (a => c))"""
        k = self.ksup(b, a)  # b => (a => b)
        axm2 = self.axiom("AxM2", {"A": a, "B": b, "C": c})
        f2 = self.formula_at(axm2)
        swap = self.axiom("AxM4", {"A": f2.left, "B": f2.right.left, "C": f2.right.right})
        lifted = self.mp2(axm2, swap)  # (a => b) => ((a => (b => c)) -> (a => c))
        chained = self.trans(k, lifted)
        f3 = self.formula_at(chained)
        swap2 = self.axiom("AxM3", {"A": b, "B": f3.right.left, "C": f3.right.right})
        return self.mp2(chained, swap2)


# ---------------------------------------------------------------------------
# Hypothetical derivations in the arrow fragment


@dataclass
class _ImpStep:
    formula: Formula
    kind: str  # "hyp" | "thm" | "mp2"
    hyp_formula: Optional[Formula] = None
    premises: Optional[tuple[int, int]] = None
    emit: Optional[Callable[["ProofBuilder"], int]] = None


class ImpDerivation:
    """A derivation using only arrow detachment, supporting discharge.

    Steps are hypotheses, self-contained theorems (emitted through builder
    macros), or arrow detachments.  ``discharge`` rebuilds the derivation
    with one hypothesis internalized as an antecedent of every step; the
    result again contains only the three step kinds, so discharges nest.
    ``emit`` lowers a derivation into a ProofBuilder.
    """

    def __init__(self, hypotheses: Sequence[Formula] = ()):
        self.hypotheses = list(hypotheses)
        self._steps: list[_ImpStep] = []

    def _append(self, step: _ImpStep) -> int:
        self._steps.append(step)
        return len(self._steps) - 1

    def formula_at(self, idx: int) -> Formula:
        return self._steps[idx].formula

    def hyp(self, formula: Formula) -> int:
        if formula not in self.hypotheses:
            raise ProofError("not a hypothesis of this derivation")
        return self._append(_ImpStep(formula, "hyp", hyp_formula=formula))

    def thm(self, formula: Formula, emit: Callable[["ProofBuilder"], int]) -> int:
        return self._append(_ImpStep(formula, "thm", emit=emit))

    def axiom(self, system: ProofSystem, name: str, assignment: Mapping[str, Formula]) -> int:
        formula = instantiate(system.axiom(name), assignment)
        frozen = dict(assignment)
        return self.thm(formula, lambda b: b.axiom(name, frozen))

    def mp2(self, minor: int, major: int) -> int:
        major_f = self.formula_at(major)
        if not isinstance(major_f, IntImp) or major_f.left != self.formula_at(minor):
            raise ProofError("malformed arrow detachment")
        return self._append(_ImpStep(major_f.right, "mp2", premises=(minor, major)))

    def imp_trans(self, i: int, j: int) -> int:
        """From X -> Y and Y -> Z conclude X -> Z (via pure theorem steps)."""
        fi, fj = self.formula_at(i), self.formula_at(j)
        if not (isinstance(fi, IntImp) and isinstance(fj, IntImp) and fi.right == fj.left):
            raise ProofError("imp_trans needs composable arrow steps")
        x = fi.left
        k = self.thm(IntImp(fj, IntImp(x, fj)), lambda b, f=fj, x=x: b._k_axiom(f, x))
        lifted = self.mp2(j, k)
        s = self.thm(
            IntImp(IntImp(x, fj), IntImp(fi, IntImp(x, fj.right))),
            lambda b, x=x, f=fj: b._s_axiom(x, f.left, f.right),
        )
        step = self.mp2(lifted, s)
        return self.mp2(i, step)

    def discharge(self, hypothesis: Formula) -> "ImpDerivation":
        """Internalize ``hypothesis``: every step F becomes hypothesis -> F."""
        if hypothesis not in self.hypotheses:
            raise ProofError("cannot discharge a formula that is not a hypothesis")
        out = ImpDerivation([h for h in self.hypotheses if h != hypothesis])
        pos: dict[int, int] = {}
        for k, step in enumerate(self._steps):
            f = step.formula
            lifted = IntImp(hypothesis, f)
            if step.kind == "hyp" and step.hyp_formula == hypothesis:
                pos[k] = out.thm(lifted, lambda b, x=hypothesis: b.imp_id(x))
            elif step.kind == "hyp":
                base = out.hyp(step.hyp_formula)
                weaken = out.thm(
                    IntImp(f, lifted), lambda b, f=f, a=hypothesis: b._k_axiom(f, a)
                )
                pos[k] = out.mp2(base, weaken)
            elif step.kind == "thm":
                base = out.thm(f, step.emit)
                weaken = out.thm(
                    IntImp(f, lifted), lambda b, f=f, a=hypothesis: b._k_axiom(f, a)
                )
                pos[k] = out.mp2(base, weaken)
            else:
                i, j = step.premises
                x, y = self._steps[i].formula, f
                dist = out.thm(
                    IntImp(
                        IntImp(hypothesis, IntImp(x, y)),
                        IntImp(IntImp(hypothesis, x), lifted),
                    ),
                    lambda b, a=hypothesis, x=x, y=y: b._s_axiom(a, x, y),
                )
                partial = out.mp2(pos[j], dist)
                pos[k] = out.mp2(pos[i], partial)
        return out

    def emit(self, builder: ProofBuilder) -> int:
        indices: list[int] = []
        for step in self._steps:
            if step.kind == "hyp":
                idx = builder.hyp_of(step.hyp_formula)
            elif step.kind == "mp2":
                i, j = step.premises
                idx = builder.mp2(indices[i], indices[j])
            else:
                idx = step.emit(builder)
            indices.append(idx)
        return indices[-1]


# ---------------------------------------------------------------------------
# Deduction theorem for the classical conditional


def deduction_transform(proof: Proof, hypothesis: Formula) -> Proof:
    """Turn an accepted proof of G, A |- B into one of G |- A => B.

    Only applies when conditional detachment is the system's sole rule;
    hypothesis and axiom steps are weakened through the conditional's K
    shape, detachments are re-assembled through its S shape, and uses of
    the discharged hypothesis become the A => A derivation.
    """
    system = get_system(proof.system)
    if system.rules != frozenset({RULE_MP}):
        raise DeductionError(
            f"system {system.name!r} has rules beyond conditional detachment; refusing to transform"
        )
    if hypothesis not in proof.hypotheses:
        raise DeductionError("the formula to discharge is not a hypothesis of the proof")
    verdict = check_proof(proof)
    if not verdict.accepted:
        raise DeductionError(f"input proof rejected at step {verdict.failed_step}: {verdict.reason}")

    remaining = tuple(h for h in proof.hypotheses if h != hypothesis)
    b = ProofBuilder(system, remaining, classical_atoms=sorted(proof.classical_atoms))
    mapping: dict[int, int] = {}
    for idx, step in enumerate(proof.steps):
        by = step.by
        if isinstance(by, Hyp) and proof.hypotheses[by.index] == hypothesis:
            mapping[idx] = b.sup_id(hypothesis)
        elif isinstance(by, RuleApp):
            minor, major = by.premises
            s = b.ssup(hypothesis, proof.steps[minor].formula, step.formula)
            partial = b.mp(mapping[major], s)
            mapping[idx] = b.mp(mapping[minor], partial)
        else:
            if isinstance(by, Hyp):
                base = b.hyp_of(step.formula)
            else:
                base = b.axiom(by.name, by.as_dict())
            k = b.ksup(step.formula, hypothesis)
            mapping[idx] = b.mp(base, k)
    b.conclude(mapping[len(proof.steps) - 1])
    return b.build()


# ---------------------------------------------------------------------------
# Schema proofs -> concrete-axiom proofs


def to_concrete_system(proof: Proof, target: str | ProofSystem) -> Proof:
    """Replay a hypothesis-free schema proof in a substitution-rule system.

    Each axiom instance is rebuilt from the concrete axiom by substituting
    through fresh staging atoms, so that simultaneous instantiation cannot
    capture the concrete axiom's own atoms.
    """
    target_sys = get_system(target)
    if not target_sys.concrete:
        raise ProofError(f"system {target_sys.name!r} has no substitution rule")
    if proof.hypotheses:
        raise ProofError("only hypothesis-free proofs can be replayed with substitution")
    source_sys = get_system(proof.system)
    if not source_sys.rules <= {RULE_MP}:
        raise ProofError("only conditional-detachment proofs can be replayed")

    from .systems import _CONCRETE_ATOMS

    used: set[str] = set()
    for step in proof.steps:
        used |= formula_atoms(step.formula)
    fresh = [name for name in (f"z{i}" for i in range(1, 1000)) if name not in used]

    b = ProofBuilder(target_sys)
    mapping: dict[int, int] = {}
    for idx, step in enumerate(proof.steps):
        by = step.by
        if isinstance(by, AxiomInst):
            source_schema = source_sys.axiom(by.name)
            assignment = by.as_dict()
            cur = b.axiom(by.name)
            mvs = sorted(source_schema.metavariables())
            stage = {mv: fresh[k] for k, mv in enumerate(mvs)}
            for mv in mvs:
                cur = b.sub(cur, _CONCRETE_ATOMS[mv].name, Atom(stage[mv]))
            for mv in mvs:
                cur = b.sub(cur, stage[mv], assignment[mv])
            mapping[idx] = cur
        elif isinstance(by, RuleApp):
            minor, major = by.premises
            mapping[idx] = b.mp(mapping[minor], mapping[major])
        else:
            raise ProofError("unexpected justification in a hypothesis-free proof")
    b.conclude(mapping[len(proof.steps) - 1])
    return b.build()


# ---------------------------------------------------------------------------
# JSON proof format

_AXIOM_NAME_ALIASES = {"□1": "Box1", "□2": "Box2", "□3": "Box3", "□4": "Box4", "K⊃": "Ksup"}


def proof_to_dict(proof: Proof) -> dict:
    steps = []
    for step in proof.steps:
        by = step.by
        if isinstance(by, Hyp):
            enc: dict = {"hyp": by.index}
        elif isinstance(by, AxiomInst):
            enc = {"axiom": by.name}
            if by.assignment:
                enc["assign"] = {mv: render_formula(f) for mv, f in by.assignment}
        elif isinstance(by, RuleApp):
            enc = {"rule": by.rule, "from": list(by.premises)}
        else:
            enc = {
                "sub": {
                    "from": by.source,
                    "atom": by.atom,
                    "formula": render_formula(by.replacement),
                }
            }
        steps.append({"formula": render_formula(step.formula), "by": enc})
    out = {
        "system": proof.system,
        "hypotheses": [render_formula(h) for h in proof.hypotheses],
        "steps": steps,
    }
    if proof.classical_atoms:
        out["classical_atoms"] = sorted(proof.classical_atoms)
    return out


def proof_from_dict(data, system: Optional[str] = None) -> Proof:
    """Decode a proof; ``data`` is either a bare step list or an object with
    ``system``, ``hypotheses``, ``classical_atoms`` and ``steps``."""
    if isinstance(data, list):
        body = {"steps": data}
    elif isinstance(data, dict):
        body = data
    else:
        raise ProofError("proof JSON must be a list of steps or an object")
    system_name = system or body.get("system")
    if system_name is None:
        raise ProofError("no proof system named (pass one or add a 'system' field)")
    hypotheses = tuple(parse_formula(h) for h in body.get("hypotheses", ()))
    steps = []
    for k, raw in enumerate(body.get("steps", ())):
        try:
            formula = parse_formula(raw["formula"])
            by = _decode_justification(raw["by"])
        except (KeyError, TypeError) as exc:
            raise ProofError(f"step {k} is malformed: {exc}") from None
        steps.append(Step(formula, by))
    return Proof(
        system_name,
        hypotheses,
        tuple(steps),
        frozenset(body.get("classical_atoms", ())),
    )


def _decode_justification(enc) -> Justification:
    if "hyp" in enc:
        return Hyp(int(enc["hyp"]))
    if "axiom" in enc:
        name = _AXIOM_NAME_ALIASES.get(enc["axiom"], enc["axiom"])
        assign = {mv: parse_formula(text) for mv, text in enc.get("assign", {}).items()}
        return axiom_inst(name, assign)
    if "rule" in enc:
        return RuleApp(enc["rule"], tuple(int(i) for i in enc["from"]))
    if "sub" in enc:
        sub = enc["sub"]
        return Subst(int(sub["from"]), sub["atom"], parse_formula(sub["formula"]))
    raise ProofError(f"unknown justification encoding {enc!r}")


def load_proof(text: str, system: Optional[str] = None) -> Proof:
    return proof_from_dict(json.loads(text), system)


def dump_proof(proof: Proof) -> str:
    return json.dumps(proof_to_dict(proof), indent=1)
