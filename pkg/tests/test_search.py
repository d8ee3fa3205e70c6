import itertools

import pytest
from hypothesis import given, settings

from tests.conftest import formulas
from duolog.search import (
    SearchBounds,
    bounded_consequence,
    bounded_valid,
    enumerate_frames,
    enumerate_models,
    models_isomorphic,
    preorders,
)
from duolog.semantics import build_model, evaluate, model_to_dict, valid_on_model
from duolog.syntax import Atom, ClsImp, IntImp, parse_formula

P, Q = Atom("p"), Atom("q")


def brute_force_preorder_classes(n):
    """Independent count of preorders on n points up to isomorphism."""
    points = range(n)
    diagonal = {(i, i) for i in points}
    classes = []
    for bits in itertools.product((0, 1), repeat=n * n - n):
        off = [(a, b) for a in points for b in points if a != b]
        rel = diagonal | {p for p, bit in zip(off, bits) if bit}
        if not all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c):
            continue
        if not any(
            {(perm[a], perm[b]) for (a, b) in rel} == other
            for other in classes
            for perm in itertools.permutations(points)
        ):
            classes.append(rel)
    return len(classes)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_preorder_counts_match_brute_force(n):
    assert len(preorders(n)) == brute_force_preorder_classes(n)


def test_single_world_rooted_single_atom_has_two_models():
    models = list(enumerate_models(SearchBounds(variant="s", max_worlds=1, atoms=("p",))))
    assert len(models) == 2


def test_unrooted_frame_count_zero_atoms():
    frames = list(enumerate_frames(2, rooted=False))
    assert len(frames) == len(preorders(1)) + len(preorders(2))
    models = list(enumerate_models(SearchBounds(variant="sminus-bot", max_worlds=2, atoms=())))
    assert len(models) == len(frames)


def test_every_emitted_model_revalidates(base_free_models):
    from duolog.semantics import model_from_dict

    for m in base_free_models:
        # atoms false everywhere drop out of the JSON form; the world-major
        # dict is the canonical comparison
        rebuilt = model_from_dict(model_to_dict(m), "sminus-bot")
        assert model_to_dict(rebuilt) == model_to_dict(m)
        assert rebuilt.order == m.order


def test_rooted_enumeration_has_least_bases(rooted_s_models):
    for m in rooted_s_models:
        assert m.base is not None
        assert all((m.base, w) in m.order for w in m.worlds)


def test_bot_entries_only_for_valuation_bot_variants():
    mpc = list(enumerate_models(SearchBounds(variant="mpc", max_worlds=1, atoms=())))
    assert {m.bot_worlds for m in mpc} == {frozenset(), frozenset({"w0"})}
    weak = list(enumerate_models(SearchBounds(variant="sbot-w", max_worlds=2, atoms=())))
    assert all(m.base not in m.bot_worlds for m in weak)
    plain = list(enumerate_models(SearchBounds(variant="s", max_worlds=2, atoms=())))
    assert all(not m.bot_worlds for m in plain)


def test_classical_atom_extensions_are_constant():
    models = list(
        enumerate_models(
            SearchBounds(variant="cipc-b", max_worlds=2, atoms=("p", "c"), classical_atoms=("c",))
        )
    )
    assert models
    for m in models:
        ext = m.valuation.get("c", frozenset())
        assert ext in (frozenset(), m.world_set)


def test_enumeration_is_deterministic():
    bounds = SearchBounds(variant="s", max_worlds=2, atoms=("p", "q"))
    first = [model_to_dict(m) for m in enumerate_models(bounds)]
    second = [model_to_dict(m) for m in enumerate_models(bounds)]
    assert first == second


def test_bounded_validity_examples():
    assert bounded_valid(parse_formula("p -> p"), SearchBounds(variant="s", max_worlds=3)).valid
    res = bounded_consequence(
        [P, ClsImp(P, Q)], Q, SearchBounds(variant="s", max_worlds=3)
    )
    assert res.valid
    res = bounded_consequence(
        [parse_formula("p => q")], parse_formula("p -> q"), SearchBounds(variant="s", max_worlds=2)
    )
    assert not res.valid
    empty = bounded_consequence([], P, SearchBounds(variant="s", max_worlds=1))
    assert not empty.valid and len(empty.model.worlds) == 1


def test_countermodel_is_reproducible_and_reverifies():
    f = parse_formula("(p => r) -> ((q => r) -> ((p | q) => r))")
    bounds = SearchBounds(variant="sminus-bot", max_worlds=2, rooted=False)
    first = bounded_valid(f, bounds)
    second = bounded_valid(f, bounds)
    assert not first.valid
    assert model_to_dict(first.model) == model_to_dict(second.model)
    assert first.world == second.world
    assert evaluate(first.model, first.world, f, "sminus-bot") == 0


@given(formulas(connectives=(IntImp, ClsImp)))
@settings(max_examples=25)
def test_any_countermodel_reverifies(f):
    bounds = SearchBounds(variant="s", max_worlds=2)
    res = bounded_valid(f, bounds)
    if not res.valid:
        assert evaluate(res.model, res.world, f, "s") == 0
    else:
        for m in enumerate_models(bounds, (f,)):
            assert valid_on_model(m, f, "s")


@given(formulas(connectives=(IntImp, ClsImp)))
@settings(max_examples=15)
def test_rooted_cipc_reading_verdicts_coincide(f):
    verdicts = set()
    for variant in ("cipc-a", "cipc-b", "cipc-c"):
        res = bounded_valid(f, SearchBounds(variant=variant, max_worlds=2, rooted=True, atoms=("p", "q")))
        verdicts.add(res.valid)
    assert len(verdicts) == 1


def test_parallel_search_matches_sequential():
    f = parse_formula("(p => r) -> ((q => r) -> ((p | q) => r))")
    bounds = SearchBounds(variant="sminus-bot", max_worlds=2, rooted=False)
    seq = bounded_valid(f, bounds)
    par = bounded_valid(f, bounds, jobs=2)
    assert seq.valid == par.valid
    assert model_to_dict(seq.model) == model_to_dict(par.model)
    assert seq.world == par.world
    valid_seq = bounded_valid(parse_formula("p -> p"), bounds)
    valid_par = bounded_valid(parse_formula("p -> p"), bounds, jobs=2)
    assert valid_seq.valid and valid_par.valid


def test_isomorphism_checker():
    a = build_model(("x", "y"), [], valuation={"p": ("x",), "q": ("y",)})
    b = build_model(("u", "v"), [], valuation={"p": ("v",), "q": ("u",)})
    assert models_isomorphic(a, b)
    c = build_model(("u", "v"), [("u", "v")], valuation={"p": ("v",), "q": ("v",)})
    assert not models_isomorphic(a, c)
    with_base = build_model(("u", "v"), [("u", "v")], base="u", valuation={})
    without = build_model(("u", "v"), [("u", "v")], valuation={})
    assert not models_isomorphic(with_base, without)


def test_variant_requires_rooted_enumeration():
    with pytest.raises(ValueError, match="requires rooted"):
        bounded_valid(P, SearchBounds(variant="s", rooted=False))
