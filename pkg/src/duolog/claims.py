"""Registry of the toolkit's verifiable claims.

``run_claims`` executes every registered claim at its stated bound and
returns a structured report: soundness sweeps for each system, the
persistence property, the failure of the arrow deduction theorem, the
disjunction-indispensability countermodel, the translation correspondence,
base addition, the weak-absurdity model probes, transport of minimal-logic
countermodels, the divergence of the classical-conditional readings, and
the incomparability probe between the two based systems.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .matrix3 import valid3
from .search import SearchBounds, bounded_consequence, bounded_valid, enumerate_models, models_isomorphic
from .semantics import (
    CIPC_A,
    CIPC_B,
    CIPC_C,
    KripkeModel,
    L4 as L4_VARIANT,
    MPC,
    S,
    SBOT_W,
    SMINUS_BOT,
    T,
    VARIANTS,
    build_model,
    evaluate,
    get_variant,
    holds_everywhere,
    model_to_dict,
    truth_set,
)
from .sweeps import (
    ClosureCheck,
    apply_connective,
    axiom_soundness_failures,
    parallel_closure,
    vector_closure,
)
from .syntax import (
    AND,
    Atom,
    BOT,
    BOX,
    Formula,
    IMP,
    OR,
    SUP,
    make_binary,
    parse_formula,
    render_formula,
)
from .systems import get_system
from .translate import add_base, add_fresh_root_mpc, truncate


@dataclass
class ClaimResult:
    name: str
    status: str  # "pass" | "fail" | "unresolved"
    detail: str
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        out = {"claim": self.name, "status": self.status, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _witness(model: KripkeModel | None = None, world: str | None = None, formula: Formula | None = None, **extra) -> dict:
    out: dict = dict(extra)
    if model is not None:
        out["model"] = model_to_dict(model)
    if world is not None:
        out["world"] = world
    if formula is not None:
        out["formula"] = render_formula(formula)
    return out


# ---------------------------------------------------------------------------
# Reusable sweeps (the acceptance suite drives these directly)


def variant_models(variant, max_worlds=3, atom_names=("p", "q"), classical=()) -> Iterable[KripkeModel]:
    bounds = SearchBounds(
        variant=variant,
        max_worlds=max_worlds,
        atoms=tuple(atom_names),
        classical_atoms=tuple(classical),
    )
    return enumerate_models(bounds)


def _variant_leaves(m: KripkeModel, variant) -> list[tuple[Formula, frozenset]]:
    v = get_variant(variant)
    leaves = [(Atom(a), m.valuation.get(a, frozenset())) for a in sorted(m.valuation)]
    for a in ("p", "q"):
        if a not in m.valuation:
            leaves.append((Atom(a), frozenset()))
    if v.fragment.allow_bottom:
        leaves.append((BOT, truth_set(m, BOT, v)))
    return leaves


def _variant_connectives(variant) -> list[str]:
    v = get_variant(variant)
    return sorted(v.fragment.binary) + ([BOX] if v.fragment.allow_box else [])


def persistence_violation(
    variant, max_worlds=3, atom_names=("p", "q"), depth=3
) -> Optional[tuple[KripkeModel, Formula]]:
    """First (model, formula) whose interpretation is not upward closed,
    across every enumerated model and every formula of depth <= depth."""
    v = get_variant(variant)
    for m in variant_models(v, max_worlds, atom_names):
        reached = vector_closure(m, v, _variant_leaves(m, v), _variant_connectives(v), depth)
        for vec, f in reached.items():
            for w in vec:
                if not m.up[w] <= vec:
                    return m, f
    return None


def translation_mismatch(max_worlds=3, depth=3, atom_names=("p", "q")) -> Optional[ClosureCheck]:
    """Co-evaluate each conditional-language formula with its box translation,
    each box-language formula with its conditional translation, and each
    formula with its round trip; any vector mismatch is returned."""
    conns = [AND, IMP, OR, SUP]
    for m in variant_models(SMINUS_BOT, max_worlds, atom_names):
        empty = frozenset()

        def combine_fwd(conn, a, b):
            u = apply_connective(m, SMINUS_BOT, conn, a[0], b[0])
            if conn == SUP:
                v = apply_connective(
                    m, L4_VARIANT, IMP, apply_connective(m, L4_VARIANT, BOX, a[1]), b[1]
                )
            else:
                v = apply_connective(m, L4_VARIANT, conn, a[1], b[1])
            return (u, v)

        def combine_back(conn, a, b):
            u = apply_connective(m, L4_VARIANT, conn, a[0], b[0])
            v = apply_connective(m, SMINUS_BOT, conn, a[1], b[1])
            return (u, v)

        def box_back(a):
            u = apply_connective(m, L4_VARIANT, BOX, a[0])
            inner = apply_connective(m, SMINUS_BOT, SUP, a[1], empty)
            v = apply_connective(m, SMINUS_BOT, SUP, inner, empty)
            return (u, v)

        def combine_round(conn, a, b):
            u = apply_connective(m, SMINUS_BOT, conn, a[0], b[0])
            if conn == SUP:
                inner = apply_connective(m, SMINUS_BOT, SUP, a[1], empty)
                negneg = apply_connective(m, SMINUS_BOT, SUP, inner, empty)
                v = apply_connective(m, SMINUS_BOT, IMP, negneg, b[1])
            else:
                v = apply_connective(m, SMINUS_BOT, conn, a[1], b[1])
            return (u, v)

        def check(f, row):
            if row[0] != row[1]:
                return f"readings disagree on {sorted(row[0])} vs {sorted(row[1])}"
            return None

        leaves = [(f, (vec, vec)) for f, vec in _variant_leaves(m, SMINUS_BOT)]
        bad = parallel_closure(leaves, combine_fwd, conns, depth, check)
        if bad is not None:
            return bad
        bad = parallel_closure(leaves, combine_back, [AND, IMP, OR, BOX], depth, check, box_combine=box_back)
        if bad is not None:
            return bad
        bad = parallel_closure(leaves, combine_round, conns, depth, check)
        if bad is not None:
            return bad
    return None


def base_addition_mismatch(max_worlds=3, depth=3, atom_names=("p", "q")) -> Optional[ClosureCheck]:
    """Check base addition on every base-free model against all
    disjunction-free formulas of depth <= depth: old-world values unchanged
    and truth at the new base equivalent to truth everywhere before."""
    for m in variant_models(SMINUS_BOT, max_worlds, atom_names):
        m2 = add_base(m)
        old = m.world_set
        base = m2.base

        def combine(conn, a, b):
            return (
                apply_connective(m, SMINUS_BOT, conn, a[0], b[0]),
                apply_connective(m2, SMINUS_BOT, conn, a[1], b[1]),
            )

        def check(f, row):
            u, v = row
            if v & old != u:
                return "old-world evaluation changed after base addition"
            if (base in v) != (u == old):
                return "truth at the new base disagrees with truth everywhere"
            return None

        leaves = [
            (Atom(a), (m.valuation.get(a, frozenset()), m2.valuation.get(a, frozenset())))
            for a in atom_names
        ] + [(BOT, (frozenset(), frozenset()))]
        bad = parallel_closure(leaves, combine, [AND, IMP, SUP], depth, check)
        if bad is not None:
            return bad
    return None


def cipc_agreement_mismatch(max_worlds=3, depth=3, atom_names=("p", "q")) -> Optional[ClosureCheck]:
    """On rooted models the three conditional readings (and the based
    system's own clause) must agree on every formula of depth <= depth."""
    readings = (CIPC_A, CIPC_B, CIPC_C, S)
    for m in variant_models(CIPC_B, max_worlds, atom_names):

        def combine(conn, a, b):
            return tuple(apply_connective(m, v, conn, a[k], b[k]) for k, v in enumerate(readings))

        def check(f, row):
            if any(vec != row[0] for vec in row[1:]):
                return "conditional readings diverge on a rooted model"
            return None

        leaves = [(Atom(a), (m.valuation.get(a, frozenset()),) * len(readings)) for a in atom_names]
        bad = parallel_closure(leaves, combine, [AND, OR, IMP, SUP], depth, check)
        if bad is not None:
            return bad
    return None


def random_formula(rng: random.Random, leaves: list[Formula], connectives: list[str], depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(leaves)
    conn = rng.choice(connectives)
    if conn == BOX:
        from .syntax import Box

        return Box(random_formula(rng, leaves, connectives, depth - 1))
    return make_binary(
        conn,
        random_formula(rng, leaves, connectives, depth - 1),
        random_formula(rng, leaves, connectives, depth - 1),
    )


def weak_absurdity_probe_model() -> KripkeModel:
    """Three-world model with bot and every atom true exactly off the base:
    every formula over those atoms comes out true everywhere or true exactly
    off the base, so no formula is false at every world."""
    return build_model(
        ("g", "a", "b"),
        [("g", "a"), ("g", "b")],
        base="g",
        valuation={"p": ("a", "b"), "q": ("a", "b")},
        bot_worlds=("a", "b"),
        variant=SBOT_W,
    )


def sample_weak_absurdity(count=200, depth=4, seed=2024) -> list[tuple[Formula, frozenset]]:
    """Sampled formulas whose truth sets fall outside {everywhere, off-base}."""
    m = weak_absurdity_probe_model()
    rng = random.Random(seed)
    off_base = frozenset(("a", "b"))
    bad = []
    leaves = [Atom("p"), Atom("q"), BOT]
    for _ in range(count):
        f = random_formula(rng, leaves, [AND, OR, IMP, SUP], depth)
        ts = truth_set(m, f, SBOT_W)
        if ts not in (m.world_set, off_base):
            bad.append((f, ts))
    return bad


def minimal_transport_failures(count=50, max_worlds=3, depth=4, seed=7) -> tuple[int, list[dict]]:
    """Find ``count`` refuted minimal-logic formulas by search, transport each
    countermodel by truncation plus fresh-root addition, and re-check that
    the refutation survives in the weak-absurdity semantics."""
    rng = random.Random(seed)
    leaves = [Atom("p"), Atom("q"), BOT]
    bounds = SearchBounds(variant=MPC, max_worlds=max_worlds, atoms=("p", "q"))
    found = 0
    failures = []
    attempts = 0
    while found < count and attempts < count * 200:
        attempts += 1
        f = random_formula(rng, leaves, [AND, OR, IMP], depth)
        res = bounded_valid(f, bounds)
        if res.valid:
            continue
        found += 1
        cone = truncate(res.model, res.world, MPC)
        rooted = add_fresh_root_mpc(cone)
        if evaluate(rooted, res.world, f, SBOT_W) != 0:
            failures.append(
                _witness(res.model, res.world, f, transported=model_to_dict(rooted))
            )
    return found, failures


# ---------------------------------------------------------------------------
# Claims


def _claim_persistence(max_worlds: int) -> ClaimResult:
    for name in sorted(VARIANTS):
        hit = persistence_violation(name, max_worlds=max_worlds)
        if hit is not None:
            m, f = hit
            return ClaimResult(
                "persistence",
                "fail",
                f"variant {name!r} loses persistence on {render_formula(f)!r}",
                _witness(m, formula=f),
            )
    return ClaimResult(
        "persistence",
        "pass",
        f"all variants persistent on every model with <= {max_worlds} worlds, formulas to depth 3",
    )


_SOUNDNESS_TARGETS = (
    ("s", ("p", "q"), ()),
    ("t", ("p", "q"), ()),
    ("s-bot-w", ("p", "q"), ()),
    ("l4", ("p", "q"), ()),
    ("mpc", ("p", "q"), ()),
    ("cipc", ("p", "c"), ("c",)),
)


def _claim_soundness(system_name: str, atom_names, classical, max_worlds: int) -> ClaimResult:
    sysd = get_system(system_name)
    models = variant_models(sysd.variant_name, max_worlds, atom_names, classical)
    checked, failures = axiom_soundness_failures(
        sysd, models, atom_names=atom_names, classical_atoms=classical
    )
    name = f"soundness-{system_name}"
    if failures:
        first = failures[0]
        return ClaimResult(name, "fail", first.describe(), _witness(first.model))
    return ClaimResult(
        name, "pass", f"{checked} deduplicated axiom instances valid on every model"
    )


def _claim_arrow_deduction_fails(max_worlds: int) -> ClaimResult:
    f = parse_formula("(p => q) -> (p -> q)")
    refutation = valid3(f)
    if refutation != {"p": "i", "q": "0"}:
        return ClaimResult(
            "arrow-deduction-fails", "fail", f"matrix refutation came out as {refutation}"
        )
    for schema in get_system("s").axioms:
        if valid3(schema.pattern) is not None:
            return ClaimResult(
                "arrow-deduction-fails", "fail", f"matrix refutes axiom {schema.name}"
            )
    res = bounded_consequence(
        [parse_formula("p => q")], parse_formula("p -> q"), SearchBounds(variant=S, max_worlds=2)
    )
    if res.valid:
        return ClaimResult(
            "arrow-deduction-fails", "fail", "no 2-world countermodel to the detachment transfer"
        )
    return ClaimResult(
        "arrow-deduction-fails",
        "pass",
        "matrix refutes the conditional-to-arrow bridge at {p: i, q: 0}; "
        f"premise transfer refuted on a {len(res.model.worlds)}-world model",
        _witness(res.model, res.world),
    )


def reference_or_countermodel() -> KripkeModel:
    """Two incomparable worlds, p true at one, q at the other, r nowhere."""
    return build_model(
        ("w0", "w1"), [], valuation={"p": ("w0",), "q": ("w1",)}, variant=SMINUS_BOT
    )


def _claim_or_indispensable(max_worlds: int) -> ClaimResult:
    f = parse_formula("(p => r) -> ((q => r) -> ((p | q) => r))")
    res = bounded_valid(f, SearchBounds(variant=SMINUS_BOT, max_worlds=2, rooted=False))
    if res.valid:
        return ClaimResult("or-indispensable", "fail", "no base-free countermodel at 2 worlds")
    if not models_isomorphic(res.model, reference_or_countermodel()):
        return ClaimResult(
            "or-indispensable",
            "fail",
            "countermodel is not the expected two-point antichain",
            _witness(res.model, res.world, f),
        )
    rooted = bounded_valid(f, SearchBounds(variant=S, max_worlds=max_worlds, atoms=("p", "q", "r")))
    if not rooted.valid:
        return ClaimResult(
            "or-indispensable",
            "fail",
            "the distribution axiom failed on a rooted model",
            _witness(rooted.model, rooted.world, f),
        )
    return ClaimResult(
        "or-indispensable",
        "pass",
        "base-free countermodel matches the two-point antichain; rooted models validate the axiom",
        _witness(res.model, res.world, f),
    )


def _claim_translations(max_worlds: int) -> ClaimResult:
    bad = translation_mismatch(max_worlds=max_worlds)
    if bad is not None:
        return ClaimResult("translation-correspondence", "fail", f"{render_formula(bad.formula)}: {bad.detail}")
    return ClaimResult(
        "translation-correspondence",
        "pass",
        "conditional/box translations and the round trip agree on all base-free models, depth 3",
    )


def _claim_base_addition(max_worlds: int) -> ClaimResult:
    bad = base_addition_mismatch(max_worlds=max_worlds)
    if bad is not None:
        return ClaimResult("base-addition", "fail", f"{render_formula(bad.formula)}: {bad.detail}")
    m = reference_or_countermodel()
    f = parse_formula("p | q")
    m2 = add_base(m)
    if not holds_everywhere(m, f, SMINUS_BOT) or evaluate(m2, m2.base, f, SMINUS_BOT) != 0:
        return ClaimResult("base-addition", "fail", "expected disjunction violation did not appear")
    return ClaimResult(
        "base-addition",
        "pass",
        "disjunction-free evaluations preserved to depth 3; p | q shows the restriction is tight",
    )


def _claim_weak_absurdity(max_worlds: int) -> ClaimResult:
    models = variant_models(SBOT_W, max_worlds)
    checked, failures = axiom_soundness_failures("s-bot-w", models)
    if failures:
        return ClaimResult("weak-absurdity", "fail", failures[0].describe(), _witness(failures[0].model))
    bad = sample_weak_absurdity()
    if bad:
        f, ts = bad[0]
        return ClaimResult(
            "weak-absurdity",
            "fail",
            f"{render_formula(f)} is true exactly on {sorted(ts)} in the probe model",
        )
    return ClaimResult(
        "weak-absurdity",
        "pass",
        "explosion-at-base axiom valid everywhere; 200 sampled formulas on the probe model are "
        "true everywhere or exactly off the base",
    )


def _claim_minimal_transport(max_worlds: int) -> ClaimResult:
    found, failures = minimal_transport_failures(max_worlds=max_worlds)
    if failures:
        return ClaimResult("minimal-transport", "fail", "a transported countermodel lost its refutation", failures[0])
    if found < 50:
        return ClaimResult("minimal-transport", "unresolved", f"only {found} refuted formulas found")
    return ClaimResult(
        "minimal-transport",
        "pass",
        f"{found} minimal-logic countermodels survive truncation plus fresh-root addition",
    )


def _claim_cipc_agreement(max_worlds: int) -> ClaimResult:
    bad = cipc_agreement_mismatch(max_worlds=max_worlds)
    if bad is not None:
        return ClaimResult("cipc-readings-agree", "fail", f"{render_formula(bad.formula)}: {bad.detail}")
    return ClaimResult(
        "cipc-readings-agree",
        "pass",
        "the three conditional readings agree on every rooted model to depth 3",
    )


def _claim_x3_divergence(max_worlds: int) -> ClaimResult:
    f = parse_formula("p => ((p => q) -> (p -> q))")
    local = bounded_valid(f, SearchBounds(variant=CIPC_A, max_worlds=max_worlds, rooted=False))
    if local.valid:
        return ClaimResult(
            "x3-divergence", "fail", f"no base-free countermodel under the downward reading at {max_worlds} worlds"
        )
    global_read = bounded_valid(f, SearchBounds(variant=CIPC_C, max_worlds=max_worlds, rooted=False))
    if not global_read.valid:
        return ClaimResult(
            "x3-divergence",
            "fail",
            "the global reading also refutes X3",
            _witness(global_read.model, global_read.world, f),
        )
    return ClaimResult(
        "x3-divergence",
        "pass",
        f"X3 refuted under the downward reading on a {len(local.model.worlds)}-world base-free model, "
        f"valid under the global reading up to {max_worlds} worlds",
        _witness(local.model, local.world, f),
    )


def _claim_or_distribution_cipc(max_worlds: int) -> ClaimResult:
    f = parse_formula("(p => r) -> ((q => r) -> ((p | q) => r))")
    res = bounded_valid(f, SearchBounds(variant=CIPC_C, max_worlds=2, rooted=False))
    if res.valid:
        return ClaimResult(
            "cipc-or-distribution-fails", "fail", "no base-free countermodel under the global reading"
        )
    return ClaimResult(
        "cipc-or-distribution-fails",
        "pass",
        "conditional distribution over disjunction refuted on a base-free model",
        _witness(res.model, res.world, f),
    )


def _claim_incomparability(max_worlds: int) -> ClaimResult:
    t_only = [
        parse_formula("(p => q) -> (((p -> p) => p) -> q)"),
        parse_formula("(p => q) -> (r => (p => q))"),
    ]
    s_only = [
        parse_formula("(p => (q -> r)) -> (q -> (p => r))"),
        parse_formula("(p -> (q => r)) -> (q => (p -> r))"),
    ]
    t_witness = None
    for f in t_only:
        res = bounded_valid(f, SearchBounds(variant=S, max_worlds=max_worlds))
        if not res.valid and evaluate(res.model, res.world, f, S) == 0:
            t_witness = (f, res)
            break
    s_witness = None
    for f in s_only:
        res = bounded_valid(f, SearchBounds(variant=T, max_worlds=max_worlds))
        if not res.valid and evaluate(res.model, res.world, f, T) == 0:
            s_witness = (f, res)
            break
    if t_witness is None or s_witness is None:
        return ClaimResult(
            "s-t-incomparability",
            "unresolved",
            f"no witness at bound {max_worlds}; the separation stays open here",
        )
    return ClaimResult(
        "s-t-incomparability",
        "pass",
        f"{render_formula(t_witness[0])} fails in the first semantics; "
        f"{render_formula(s_witness[0])} fails in the second",
        {
            "first": _witness(t_witness[1].model, t_witness[1].world, t_witness[0]),
            "second": _witness(s_witness[1].model, s_witness[1].world, s_witness[0]),
        },
    )


def run_claims(max_worlds: int = 3) -> list[ClaimResult]:
    """Run every registered claim; failures become report entries, never
    exceptions."""
    results: list[ClaimResult] = []

    def guarded(fn: Callable[[], ClaimResult], name: str) -> None:
        try:
            results.append(fn())
        except Exception as exc:  # claim bugs must not hide other results
            results.append(ClaimResult(name, "fail", f"claim raised {type(exc).__name__}: {exc}"))

    guarded(lambda: _claim_persistence(max_worlds), "persistence")
    for system_name, atom_names, classical in _SOUNDNESS_TARGETS:
        guarded(
            lambda s=system_name, a=atom_names, c=classical: _claim_soundness(s, a, c, max_worlds),
            f"soundness-{system_name}",
        )
    guarded(lambda: _claim_arrow_deduction_fails(max_worlds), "arrow-deduction-fails")
    guarded(lambda: _claim_or_indispensable(max_worlds), "or-indispensable")
    guarded(lambda: _claim_translations(max_worlds), "translation-correspondence")
    guarded(lambda: _claim_base_addition(max_worlds), "base-addition")
    guarded(lambda: _claim_weak_absurdity(max_worlds), "weak-absurdity")
    guarded(lambda: _claim_minimal_transport(max_worlds), "minimal-transport")
    guarded(lambda: _claim_cipc_agreement(max_worlds), "cipc-readings-agree")
    guarded(lambda: _claim_x3_divergence(max_worlds), "x3-divergence")
    guarded(lambda: _claim_or_distribution_cipc(max_worlds), "cipc-or-distribution-fails")
    guarded(lambda: _claim_incomparability(max_worlds), "s-t-incomparability")
    return results


def format_report(results: list[ClaimResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"{r.status.upper():10s} {r.name}: {r.detail}")
    passed = sum(r.status == "pass" for r in results)
    unresolved = sum(r.status == "unresolved" for r in results)
    failed = sum(r.status == "fail" for r in results)
    lines.append(f"-- {passed} passed, {failed} failed, {unresolved} unresolved --")
    return "\n".join(lines)
