import random

import pytest

from duolog.corpus import (
    CORPUS_BUILDERS,
    CORPUS_CONCLUSIONS,
    build_corpus,
    ex_proof,
    load_corpus,
    mp2_template,
    trans_template,
)
from duolog.proof import AxiomInst, check_proof
from duolog.search import SearchBounds, enumerate_models
from duolog.semantics import valid_on_model
from duolog.syntax import And, Atom, ClsImp, IntImp, atoms
from duolog.systems import get_system

P, Q, R = Atom("p"), Atom("q"), Atom("r")


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


def test_corpus_complete_and_checked(corpus):
    assert set(corpus) == set(CORPUS_BUILDERS)
    assert len(corpus) >= 10
    for name, proof in corpus.items():
        verdict = check_proof(proof)
        assert verdict.accepted, (name, verdict)
        expected = CORPUS_CONCLUSIONS.get(name)
        if expected is not None:
            assert proof.conclusion == expected, name


def test_shipped_files_match_builders(corpus):
    built = build_corpus()
    assert built == dict(corpus)


def test_exchange_lemma_avoids_dropped_axiom(corpus):
    proof = corpus["Ex"]
    assert proof.system == "s-minus-bot"
    used = {s.by.name for s in proof.steps if isinstance(s.by, AxiomInst)}
    assert "AxM6" not in used
    assert not get_system("s-minus-bot").has_axiom("AxM6")


def test_kmix_goes_through_the_weakened_identity(corpus):
    # the derivation route: q => (p -> p), then the exchange axiom
    proof = corpus["Kmix"]
    formulas = {s.formula for s in proof.steps}
    assert ClsImp(Q, IntImp(P, P)) in formulas


def test_templates_instantiate_to_other_formulas():
    rng = random.Random(5)
    pool = [P, Q, R, And(P, Q), ClsImp(P, Q), IntImp(Q, R)]
    for _ in range(10):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        assert check_proof(mp2_template(a, b)).accepted
        assert check_proof(trans_template(a, b, c)).accepted
        assert check_proof(ex_proof(a, b, c)).accepted


def test_corpus_theorems_semantically_valid(corpus):
    # soundness hook: hypothesis-free entries hold on every enumerated model
    # of their system's variant
    for name, proof in corpus.items():
        if proof.hypotheses:
            continue
        sysd = get_system(proof.system)
        bounds = SearchBounds(
            variant=sysd.variant_name,
            max_worlds=2,
            atoms=tuple(sorted(atoms(proof.conclusion))),
        )
        for m in enumerate_models(bounds):
            assert valid_on_model(m, proof.conclusion, sysd.variant_name), name


def test_concrete_twin_proves_the_same_fixtures(corpus):
    from duolog.proof import to_concrete_system

    for name, proof in corpus.items():
        if proof.hypotheses or proof.system == "l4":
            continue
        target = "s-minus-bot2" if proof.system == "s-minus-bot" else "s-bot2"
        replay = to_concrete_system(proof, target)
        assert check_proof(replay).accepted, name
        assert replay.conclusion == proof.conclusion
