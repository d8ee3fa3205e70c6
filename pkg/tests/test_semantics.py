import dataclasses

import pytest
from hypothesis import given
import hypothesis.strategies as st

from tests.conftest import formulas
from duolog.semantics import (
    CIPC_A,
    CIPC_B,
    CIPC_C,
    EvalError,
    L4,
    MPC,
    ModelError,
    S,
    SBOT_W,
    SMINUS_BOT,
    T,
    build_model,
    check_persistence,
    consequence_on_model,
    evaluate,
    holds_everywhere,
    model_from_dict,
    model_to_dict,
    truth_set,
)
from duolog.syntax import And, Atom, BOT, Box, ClsImp, IntImp, Or, parse_formula

_CONNECTIVE = {"and": And, "or": Or, "imp": IntImp, "sup": ClsImp}

P, Q = Atom("p"), Atom("q")


def two_point_antichain():
    return build_model(
        ("w", "w'"), [], valuation={"p": ("w",), "q": ("w'",)}, variant=SMINUS_BOT
    )


def test_build_model_reports_persistence_witness():
    with pytest.raises(ModelError, match="'p' true at 'g' but not at 'w'"):
        build_model(("g", "w"), [("g", "w")], base="g", valuation={"p": ("g",)})


def test_build_model_rejects_non_least_base():
    with pytest.raises(ModelError, match="not a least element"):
        build_model(("a", "b"), [], base="a")


def test_build_model_single_world_closure():
    m = build_model(("g",), [], base="g", variant=S)
    assert ("g", "g") in m.order


def test_sbot_w_invariants():
    with pytest.raises(ModelError, match="false at the base"):
        build_model(("g",), [], base="g", bot_worlds=("g",), variant=SBOT_W)
    with pytest.raises(ModelError, match="requires a base"):
        build_model(("g",), [], variant=SBOT_W)
    with pytest.raises(ModelError, match="constant false"):
        build_model(("g",), [], base="g", bot_worlds=("g",), variant=S)


def test_cipc_classical_atoms_constant():
    with pytest.raises(ModelError, match="everywhere or nowhere"):
        build_model(
            ("g", "w"),
            [("g", "w")],
            base="g",
            valuation={"c": ("w",)},
            classical_atoms=("c",),
            variant=CIPC_B,
        )


def test_antichain_refutes_conditional_distribution():
    m = two_point_antichain()
    assert evaluate(m, "w", parse_formula("p => r"), SMINUS_BOT) == 1
    assert evaluate(m, "w", parse_formula("q => r"), SMINUS_BOT) == 1
    assert evaluate(m, "w", parse_formula("(p | q) => r"), SMINUS_BOT) == 0
    assert holds_everywhere(m, Or(P, Q), SMINUS_BOT)
    assert not holds_everywhere(m, P, SMINUS_BOT)
    assert check_persistence(m, parse_formula("(p | q) => r"), SMINUS_BOT) is None


def test_based_conditional_reads_antecedent_at_base():
    m = build_model(("g", "w"), [("g", "w")], base="g", valuation={"p": ("w",)}, variant=S)
    assert evaluate(m, "g", parse_formula("p => q"), S) == 1
    assert evaluate(m, "g", parse_formula("p -> q"), S) == 0
    assert holds_everywhere(m, parse_formula("p -> p"), S)


def test_alternative_system_reads_both_sides_at_base():
    m = build_model(
        ("g", "w"), [("g", "w")], base="g", valuation={"p": ("g", "w"), "q": ("w",)}, variant=T
    )
    # antecedent true at base, consequent false there: false at every world
    assert evaluate(m, "g", ClsImp(P, Q), T) == 0
    assert evaluate(m, "w", ClsImp(P, Q), T) == 0
    assert evaluate(m, "w", ClsImp(P, Q), S) == 1


@given(formulas(allow_bottom=True), formulas(allow_bottom=True), st.data())
def test_conditional_clause_equivalences(a, b, data):
    # the clause, its if-then reading, and its upward-quantified reading agree
    models = [
        build_model(("g", "w"), [("g", "w")], base="g", valuation={"p": ("w",), "q": ("g", "w")}),
        build_model(("g", "a", "b"), [("g", "a"), ("g", "b")], base="g",
                    valuation={"p": ("a",), "q": ("b",)}),
    ]
    m = data.draw(st.sampled_from(models))
    va = truth_set(m, a, S)
    vb = truth_set(m, b, S)
    clause = truth_set(m, ClsImp(a, b), S)
    for w in m.worlds:
        if_then = (m.base not in va) or (w in vb)
        quantified = all((m.base not in va) or (x in vb) for x in m.up[w])
        assert (w in clause) == if_then == quantified


@pytest.mark.parametrize("variant", [S, T, SBOT_W, MPC, L4, CIPC_B])
@given(data=st.data())
def test_persistence_on_valid_models(variant, data):
    from duolog.search import SearchBounds, enumerate_models

    models = list(
        enumerate_models(SearchBounds(variant=variant, max_worlds=2, atoms=("p", "q")))
    )
    m = data.draw(st.sampled_from(models))
    f = data.draw(
        formulas(
            allow_bottom=variant.fragment.allow_bottom,
            allow_box=variant.fragment.allow_box,
            connectives=tuple(_CONNECTIVE[c] for c in sorted(variant.fragment.binary)),
        )
    )
    assert check_persistence(m, f, variant) is None


def test_persistence_witness_on_corrupted_model():
    m = build_model(("g", "w"), [("g", "w")], base="g", valuation={"p": ("g", "w")})
    corrupted = dataclasses.replace(m, valuation={"p": frozenset(["g"])})
    assert check_persistence(corrupted, P, S) == ("g", "w")


def test_weak_absurdity_explosion_at_base(rooted_s_models):
    from duolog.search import SearchBounds, enumerate_models

    for m in enumerate_models(SearchBounds(variant=SBOT_W, max_worlds=2, atoms=("p",))):
        assert evaluate(m, m.base, BOT, SBOT_W) == 0
        assert evaluate(m, m.base, ClsImp(BOT, P), SBOT_W) == 1
        assert holds_everywhere(m, ClsImp(BOT, P), SBOT_W)


@given(formulas(connectives=(IntImp, ClsImp)))
def test_all_true_model_validates_everything(f):
    # with every atom true everywhere, every bot-free formula holds at the base
    for frame in [
        build_model(("g",), [], base="g", valuation={"p": ("g",), "q": ("g",)}),
        build_model(("g", "w"), [("g", "w")], base="g",
                    valuation={"p": ("g", "w"), "q": ("g", "w")}),
    ]:
        assert evaluate(frame, frame.base, f, S) == 1


@given(formulas(connectives=(IntImp, ClsImp, )))
def test_conditional_readings_agree_on_based_models(f):
    m = build_model(
        ("g", "a", "b"), [("g", "a"), ("g", "b")], base="g",
        valuation={"p": ("a",), "q": ("a", "b")},
    )
    for w in m.worlds:
        values = {evaluate(m, w, f, v) for v in (S, CIPC_A, CIPC_C, CIPC_B)}
        assert len(values) == 1


def test_consequence_modes():
    m = build_model(("g", "w"), [("g", "w")], base="g", valuation={"p": ("g", "w")})
    assert consequence_on_model(m, [parse_formula("p => q")], Q, S)
    assert consequence_on_model(m, [], parse_formula("p | (p => q)"), S)
    l4_model = build_model(("a", "b"), [], valuation={"p": ("a", "b")})
    assert consequence_on_model(l4_model, [P], Box(P), L4)
    half = build_model(("a", "b"), [], valuation={"p": ("a",)})
    assert consequence_on_model(half, [P], Box(P), L4)  # premise not global: vacuous
    chain = build_model(("a", "b"), [("a", "b")], valuation={"p": ("b",)})
    assert not consequence_on_model(chain, [], Or(P, IntImp(P, BOT)), MPC)


def test_eval_errors():
    m = build_model(("a", "b"), [], valuation={"p": ("a",)})
    with pytest.raises(EvalError, match="base"):
        evaluate(m, "a", ClsImp(P, Q), S)
    with pytest.raises(EvalError, match="not a world"):
        evaluate(two_point_antichain(), "zz", P, SMINUS_BOT)
    with pytest.raises(EvalError, match="box"):
        evaluate(m, "a", Box(P), S)
    with pytest.raises(EvalError, match="unknown variant"):
        evaluate(m, "a", P, "nope")


def test_model_json_round_trip(base_free_models):
    for m in base_free_models[:40]:
        d = model_to_dict(m)
        again = model_to_dict(model_from_dict(d, SMINUS_BOT))
        assert again == d


def test_model_json_matches_documented_shape():
    m = build_model(("g", "w"), [("g", "w")], base="g", valuation={"p": ("g", "w"), "q": ("w",)})
    assert model_to_dict(m) == {
        "worlds": ["g", "w"],
        "order": [["g", "w"]],
        "base": "g",
        "valuation": {"g": ["p"], "w": ["p", "q"]},
        "bot_true_at": [],
        "classical_atoms": [],
    }
