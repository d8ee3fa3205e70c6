import dataclasses
import random

import pytest

from duolog.proof import (
    AxiomInst,
    DeductionError,
    Hyp,
    ImpDerivation,
    Proof,
    ProofBuilder,
    ProofError,
    RuleApp,
    Step,
    Subst,
    axiom_inst,
    check_proof,
    deduction_transform,
    dump_proof,
    load_proof,
    proof_from_dict,
    proof_to_dict,
    to_concrete_system,
)
from duolog.syntax import And, Atom, Box, ClsImp, IntImp, parse_formula
from duolog.systems import get_system

P, Q, R = Atom("p"), Atom("q"), Atom("r")


def test_conditional_identity_from_k_and_s_shapes():
    # the classic two-combinator construction, spelled out by hand
    b = ProofBuilder("s")
    pp = ClsImp(P, P)
    k1 = b.ksup(P, pp)
    assert b.formula_at(k1) == parse_formula("p => ((p => p) => p)")
    s = b.ssup(P, pp, P)
    assert b.formula_at(s) == parse_formula(
        "(p => ((p => p) => p)) => ((p => (p => p)) => (p => p))"
    )
    partial = b.mp(k1, s)
    k2 = b.ksup(P, P)
    assert b.formula_at(k2) == parse_formula("p => (q => p)".replace("q", "p"))
    final = b.mp(k2, partial)
    assert b.formula_at(final) == pp
    assert check_proof(b.build()).accepted


def test_rejects_detachment_without_implication():
    proof = Proof("s", (P,), (Step(P, Hyp(0)), Step(Q, RuleApp("MP", (0, 0)))))
    verdict = check_proof(proof)
    assert not verdict.accepted and verdict.failed_step == 1


def test_rejects_bad_hypothesis_and_axiom_instances():
    assert not check_proof(Proof("s", (P,), (Step(Q, Hyp(0)),))).accepted
    assert not check_proof(Proof("s", (), (Step(P, Hyp(3)),))).accepted
    wrong = Proof("s", (), (Step(IntImp(P, Q), axiom_inst("Ax1", {"A": P, "B": Q})),))
    assert not check_proof(wrong).accepted
    unknown = Proof("s", (), (Step(P, axiom_inst("Box1", {"A": P, "B": P})),))
    assert "no axiom" in check_proof(unknown).reason


def test_rejects_forward_premise_and_foreign_rule():
    proof = Proof(
        "s",
        (P, ClsImp(P, Q)),
        (Step(Q, RuleApp("MP", (1, 2))), Step(P, Hyp(0)), Step(ClsImp(P, Q), Hyp(1))),
    )
    assert not check_proof(proof).accepted
    arrow_rule = Proof(
        "s",
        (P, IntImp(P, Q)),
        (Step(P, Hyp(0)), Step(IntImp(P, Q), Hyp(1)), Step(Q, RuleApp("MP2", (0, 1)))),
    )
    assert "not a rule" in check_proof(arrow_rule).reason
    l4_rule = Proof("l4", (P,), (Step(P, Hyp(0)), Step(Box(P), RuleApp("RN", (0,)))))
    assert check_proof(l4_rule).accepted


def test_fragment_enforced_per_step():
    proof = Proof("s", (), (Step(Box(P), axiom_inst("Ax1", {"A": P, "B": P})),))
    assert "box" in check_proof(proof).reason


def test_substitution_rule_scoping():
    in_schema_system = Proof(
        "s", (), (Step(parse_formula("p -> (q -> p)"), axiom_inst("Ax1", {"A": P, "B": Q})),
                  Step(parse_formula("r -> (q -> r)"), Subst(0, "p", R)))
    )
    assert "not a rule" in check_proof(in_schema_system).reason

    b = ProofBuilder("s-bot2")
    b.conclude(b.sub(b.axiom("Ax1"), "p", And(P, Q)))
    assert check_proof(b.build()).accepted

    with_hyps = Proof(
        "s-bot2", (P,),
        (Step(parse_formula("p -> (q -> p)"), axiom_inst("Ax1")),
         Step(parse_formula("r -> (q -> r)"), Subst(0, "p", R))),
    )
    assert "hypothesis-free" in check_proof(with_hyps).reason


def test_classical_side_condition_checked():
    sysd = get_system("cipc")
    c = Atom("c")
    good = ProofBuilder("cipc", classical_atoms=("c",))
    good.axiom("X2", {"A": c, "B": P})
    assert check_proof(good.build()).accepted
    bad_proof = Proof(
        "cipc",
        (),
        (Step(
            parse_formula("(p => q) -> (p -> q)"),
            axiom_inst("X2", {"A": P, "B": Q}),
        ),),
        classical_atoms=frozenset({"c"}),
    )
    verdict = check_proof(bad_proof)
    assert not verdict.accepted and "classical" in verdict.reason


def test_atom_side_condition_checked():
    good = ProofBuilder("t")
    good.axiom("T1", {"A": P, "B": Q, "P": R})
    assert check_proof(good.build()).accepted
    bad = Proof(
        "t",
        (),
        (Step(
            get_system("t").axiom("T1").pattern and parse_formula(
                "(p => q) -> ((((p & p) -> (p & p)) => p) -> q)"
            ),
            axiom_inst("T1", {"A": P, "B": Q, "P": And(P, P)}),
        ),),
    )
    verdict = check_proof(bad)
    assert not verdict.accepted and "propositional variable" in verdict.reason


def test_necessitation_and_arrow_rules_in_box_system():
    b = ProofBuilder("l4")
    ident = b.imp_id(P)
    b.rn(ident)
    proof = b.build()
    assert check_proof(proof).accepted
    assert proof.conclusion == Box(IntImp(P, P))
    assert any(s.by == RuleApp("MP2", tuple(s.by.premises)) for s in proof.steps
               if isinstance(s.by, RuleApp) and s.by.rule == "MP2")


def test_cipc_identity_uses_its_own_axioms():
    b = ProofBuilder("cipc")
    b.sup_id(P)
    proof = b.build()
    assert check_proof(proof).accepted
    names = {s.by.name for s in proof.steps if isinstance(s.by, AxiomInst)}
    assert names <= {"C1", "C2"}
    rules = {s.by.rule for s in proof.steps if isinstance(s.by, RuleApp)}
    assert rules <= {"CMP"}


def test_imp_derivation_assertion_and_nested_discharge():
    b = ProofBuilder("s")
    idx = b.assertion(P, Q)
    assert b.formula_at(idx) == parse_formula("p -> ((p -> q) -> q)")
    assert check_proof(b.build()).accepted

    d = ImpDerivation([P])
    with pytest.raises(ProofError):
        d.hyp(Q)
    with pytest.raises(ProofError):
        d.discharge(Q)


# ---------------------------------------------------------------------------
# Deduction theorem


def test_deduction_identity_case():
    b = ProofBuilder("s", hypotheses=(P,))
    b.hyp(0)
    out = deduction_transform(b.build(), P)
    assert check_proof(out).accepted
    assert out.conclusion == ClsImp(P, P)
    assert out.hypotheses == ()


def test_deduction_single_detachment():
    b = ProofBuilder("s", hypotheses=(P, ClsImp(P, Q)))
    b.mp(b.hyp(0), b.hyp(1))
    out = deduction_transform(b.build(), P)
    assert check_proof(out).accepted
    assert out.conclusion == ClsImp(P, Q)
    assert out.hypotheses == (ClsImp(P, Q),)


def test_deduction_refusals():
    l4 = ProofBuilder("l4", hypotheses=(P,))
    l4.hyp(0)
    with pytest.raises(DeductionError, match="rules beyond"):
        deduction_transform(l4.build(), P)
    s = ProofBuilder("s", hypotheses=(P,))
    s.hyp(0)
    with pytest.raises(DeductionError, match="not a hypothesis"):
        deduction_transform(s.build(), Q)
    broken = Proof("s", (P,), (Step(Q, Hyp(0)),))
    with pytest.raises(DeductionError, match="rejected"):
        deduction_transform(broken, P)


def _formula_pool(rng):
    pool = [P, Q, R]
    for _ in range(6):
        a, b = rng.choice(pool), rng.choice(pool)
        pool.append(rng.choice([And(a, b), IntImp(a, b), ClsImp(a, b)]))
    return pool


def random_proof(rng, system="s", size=10):
    pool = _formula_pool(rng)
    hyps = []
    seen = set()
    for f in rng.sample(pool, k=4):
        if f not in seen:
            seen.add(f)
            hyps.append(f)
    b = ProofBuilder(system, hypotheses=tuple(hyps))
    sysd = get_system(system)
    axiom_names = [s.name for s in sysd.axioms]
    indices = [b.hyp(i) for i in range(len(hyps))]
    for _ in range(size):
        move = rng.random()
        if move < 0.45:
            name = rng.choice(axiom_names)
            schema = sysd.axiom(name)
            assignment = {mv: rng.choice(pool) for mv in schema.metavariables()}
            indices.append(b.axiom(name, assignment))
        else:
            candidates = [
                (i, j)
                for i in indices
                for j in indices
                if isinstance(b.formula_at(j), ClsImp) and b.formula_at(j).left == b.formula_at(i)
            ]
            if candidates:
                i, j = rng.choice(candidates)
                indices.append(b.mp(i, j))
    return b.build()


def test_deduction_round_trip_random_proofs():
    rng = random.Random(99)
    transformed = 0
    for _ in range(50):
        proof = random_proof(rng)
        assert check_proof(proof).accepted
        hypothesis = rng.choice(proof.hypotheses)
        out = deduction_transform(proof, hypothesis)
        verdict = check_proof(out)
        assert verdict.accepted, verdict
        assert out.conclusion == ClsImp(hypothesis, proof.conclusion)
        assert hypothesis not in out.hypotheses
        transformed += 1
    assert transformed == 50


# ---------------------------------------------------------------------------
# Concrete-axiom systems


def test_concrete_replay_needs_substitution_system():
    b = ProofBuilder("s")
    b.ksup(P, Q)
    with pytest.raises(ProofError, match="no substitution rule"):
        to_concrete_system(b.build(), "s")


def test_concrete_replay_of_schema_proof():
    b = ProofBuilder("s-bot")
    b.conclude(b.ksup(And(P, Q), R))
    out = to_concrete_system(b.build(), "s-bot2")
    assert check_proof(out).accepted
    assert out.conclusion == ClsImp(And(P, Q), ClsImp(R, And(P, Q)))
    assert any(isinstance(s.by, Subst) for s in out.steps)


def test_staged_substitution_avoids_capture():
    # instantiate with formulas that mention the concrete axiom's own atoms
    b = ProofBuilder("s-bot")
    b.conclude(b.axiom("Ax1", {"A": ClsImp(P, Q), "B": P}))
    out = to_concrete_system(b.build(), "s-bot2")
    assert check_proof(out).accepted
    assert out.conclusion == parse_formula("(p => q) -> (p -> (p => q))")


# ---------------------------------------------------------------------------
# JSON round trip


def test_proof_json_round_trip():
    b = ProofBuilder("s", hypotheses=(P,))
    b.conclude(b.mp(b.hyp(0), b.ksup(P, Q)))
    proof = b.build()
    again = proof_from_dict(proof_to_dict(proof))
    assert again == proof
    assert check_proof(again).accepted
    assert load_proof(dump_proof(proof)) == proof


def test_proof_json_bare_step_list_and_aliases():
    data = [
        {"formula": "[]p -> p", "by": {"axiom": "□2", "assign": {"A": "p"}}},
    ]
    proof = proof_from_dict(data, system="l4")
    assert check_proof(proof).accepted
    with pytest.raises(ProofError, match="no proof system named"):
        proof_from_dict(data)


def test_mutated_step_is_rejected():
    b = ProofBuilder("s")
    b.conclude(b.ksup(P, Q))
    proof = b.build()
    for idx in range(len(proof.steps)):
        step = proof.steps[idx]
        mutated = dataclasses.replace(
            proof,
            steps=proof.steps[:idx] + (Step(And(step.formula, step.formula), step.by),) + proof.steps[idx + 1:],
        )
        verdict = check_proof(mutated)
        assert not verdict.accepted and verdict.failed_step == idx
