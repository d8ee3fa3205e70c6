"""Machine-checked derivation corpus.

Each entry is a fully primitive proof built by a parameterized builder
function and shipped as a JSON data file under ``corpus_data/``.  Rule-style
entries (arrow detachment, conditional transitivity) are stored as their
canonical hypothesis-to-conclusion instances; the builder functions are the
reusable templates.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Callable

from .proof import ImpDerivation, Proof, ProofBuilder, check_proof, deduction_transform, proof_from_dict, proof_to_dict
from .syntax import Atom, BOT, Box, ClsImp, Formula, IntImp, Or, iff, imp_neg, sup_neg
from .systems import get_system


class CorpusError(Exception):
    """A shipped derivation failed to check."""


_P, _Q, _R = Atom("p"), Atom("q"), Atom("r")


def mp2_template(a: Formula, b: Formula, system: str = "s") -> Proof:
    """Arrow detachment as a derived rule: a, a -> b |- b."""
    bld = ProofBuilder(system, hypotheses=(a, IntImp(a, b)))
    bld.conclude(bld.mp2(bld.hyp(0), bld.hyp(1)))
    return bld.build()


def mp3_proof(a: Formula, b: Formula, system: str = "s") -> Proof:
    """a => ((a => b) -> b)"""
    bld = ProofBuilder(system)
    bld.conclude(bld.mp3(a, b))
    return bld.build()


def kmix_proof(a: Formula, b: Formula, system: str = "s") -> Proof:
    """a -> (b => a)"""
    bld = ProofBuilder(system)
    bld.conclude(bld.kmix(a, b))
    return bld.build()


def ksup_proof(a: Formula, b: Formula, system: str = "s") -> Proof:
    """a => (b => a)"""
    bld = ProofBuilder(system)
    bld.conclude(bld.ksup(a, b))
    return bld.build()


def ssup_proof(a: Formula, b: Formula, c: Formula, system: str = "s") -> Proof:
    """(a => (b => c)) => ((a => b) => (a => c))"""
    bld = ProofBuilder(system)
    bld.conclude(bld.ssup(a, b, c))
    return bld.build()


def excluded_conditional_proof(a: Formula, b: Formula, system: str = "s") -> Proof:
    """a | (a => b): the conditional's excluded-middle form."""
    bld = ProofBuilder(system)
    target = ClsImp(a, b)
    disj = Or(a, target)
    inj_right = bld.axiom("Ax7", {"A": a, "B": target})
    bridge1 = bld.axiom("AxM1", {"A": target, "B": disj})
    sup_right = bld.mp(inj_right, bridge1)  # (a=>b) => disj
    inj_left = bld.axiom("Ax6", {"A": a, "B": target})
    bridge2 = bld.axiom("AxM1", {"A": a, "B": disj})
    sup_left = bld.mp(inj_left, bridge2)  # a => disj
    peirceish = bld.axiom("AxM5", {"A": a, "B": b, "C": disj})
    partial = bld.mp2(sup_right, peirceish)
    bld.conclude(bld.mp2(sup_left, partial))
    return bld.build()


def trans_template(a: Formula, b: Formula, c: Formula, system: str = "s") -> Proof:
    """Conditional transitivity as a derived rule: a => b, b => c |- a => c."""
    bld = ProofBuilder(system, hypotheses=(ClsImp(a, b), ClsImp(b, c)))
    bld.conclude(bld.trans(bld.hyp(0), bld.hyp(1)))
    return bld.build()


def ex_proof(a: Formula, b: Formula, c: Formula, system: str = "s-minus-bot") -> Proof:
    """(a => (b => c)) -> (b => (a => c)); avoids the disjunction axioms."""
    bld = ProofBuilder(system)
    bld.conclude(bld.ex(a, b, c))
    return bld.build()


def pfix_proof(a: Formula, b: Formula, c: Formula, system: str = "s") -> Proof:
    """(b -> c) -> ((a => b) -> (a => c))"""
    sysname = get_system(system).name
    inner = ProofBuilder(sysname, hypotheses=(a,))
    m3 = inner.mp3(a, b)
    detach_b = inner.mp(inner.hyp(0), m3)  # (a => b) -> b
    ab = ClsImp(a, b)
    k = inner._k_axiom(IntImp(b, c), ab)
    s = inner._s_axiom(ab, b, c)
    chain = inner.imp_trans(k, s)  # (b -> c) -> (((a=>b) -> b) -> ((a=>b) -> c))
    inner.apply_under(chain, detach_b)  # (b -> c) -> ((a=>b) -> c)
    closed = deduction_transform(inner.build(), a)

    outer = ProofBuilder(sysname)
    seed = outer.absorb(closed)  # a => ((b -> c) -> ((a=>b) -> c))
    w = IntImp(ab, c)
    swap1 = outer.axiom("AxM3", {"A": a, "B": IntImp(b, c), "C": w})
    lifted = outer.mp2(seed, swap1)  # (b -> c) -> (a => ((a=>b) -> c))
    swap2 = outer.axiom("AxM3", {"A": a, "B": ab, "C": c})
    outer.conclude(outer.imp_trans(lifted, swap2))
    return outer.build()


def conditional_dni_proof(b: Formula, system: str = "s-minus-bot") -> Proof:
    """b => ~~b, where ~x abbreviates x => bot."""
    bld = ProofBuilder(system)
    bld.conclude(_emit_conditional_dni(bld, b))
    return bld.build()


def _emit_conditional_dni(bld: ProofBuilder, b: Formula) -> int:
    nb = sup_neg(b)
    ident = bld.sup_id(nb)
    swap = bld.ex(nb, b, BOT)  # (~b => (b => bot)) -> (b => ~~b)
    return bld.mp2(ident, swap)


def sup_imp_equiv_proof(b: Formula, c: Formula, system: str = "s-minus-bot") -> Proof:
    """(b => c) <-> (~~b -> c)"""
    sysname = get_system(system).name
    bld = ProofBuilder(sysname)
    nb, nnb = sup_neg(b), sup_neg(sup_neg(b))
    bc = ClsImp(b, c)
    w = IntImp(bc, IntImp(nnb, c))

    # left to right: both b and ~b force (b => c) -> (~~b -> c)
    from_b = bld.mp3(b, c)  # b => ((b => c) -> c)
    weaken_c = bld._k_axiom(c, nnb)  # c -> (~~b -> c)
    lift = bld.prefix(weaken_c, bc)
    b_forces = bld.sup_compose(from_b, lift)  # b => w
    from_nb = bld.mp3(nb, BOT)  # ~b => (~~b -> bot)
    explode = bld.axiom("Ax0", {"A": c})
    lift2 = bld.prefix(explode, nnb)  # (~~b -> bot) -> (~~b -> c)
    nb_almost = bld.sup_compose(from_nb, lift2)  # ~b => (~~b -> c)
    weaken_w = bld._k_axiom(IntImp(nnb, c), bc)
    nb_forces = bld.sup_compose(nb_almost, weaken_w)  # ~b => w
    cases = bld.axiom("AxM5", {"A": b, "B": BOT, "C": w})
    partial = bld.mp2(nb_forces, cases)
    ltr = bld.mp2(b_forces, partial)

    # right to left, through b => ~~b and the arrow assertion form
    dni = _emit_conditional_dni(bld, b)
    asrt = bld.assertion(nnb, c)  # ~~b -> ((~~b -> c) -> c)
    pfx = bld.absorb(pfix_proof(b, nnb, IntImp(IntImp(nnb, c), c), system=sysname))
    step = bld.mp2(asrt, pfx)  # (b => ~~b) -> (b => ((~~b -> c) -> c))
    step = bld.mp2(dni, step)
    swap = bld.axiom("AxM3", {"A": b, "B": IntImp(nnb, c), "C": c})
    rtl = bld.mp2(step, swap)  # (~~b -> c) -> (b => c)

    bld.conclude(bld.adjoin(ltr, rtl))
    return bld.build()


def box_fixpoint_proof(a: Formula, system: str = "l4") -> Proof:
    """[]a <-> -[]-[]a, with -x abbreviating x -> bot."""
    sysname = get_system(system).name
    sys = get_system(sysname)
    bld = ProofBuilder(sysname)
    x = Box(a)
    boxneg = Box(IntImp(x, BOT))
    nb = IntImp(boxneg, BOT)

    d = ImpDerivation([x, boxneg])
    h_x, h_bn = d.hyp(x), d.hyp(boxneg)
    unbox = d.axiom(sys, "Box2", {"A": IntImp(x, BOT)})
    nx = d.mp2(h_bn, unbox)
    d.mp2(h_x, nx)
    forward = d.discharge(boxneg).discharge(x).emit(bld)  # []a -> nb

    e = ImpDerivation([nb])
    h = e.hyp(nb)
    split = e.axiom(sys, "Box4", {"A": a, "B": BOT})  # x | boxneg
    ident = e.thm(IntImp(x, x), lambda b: b.imp_id(x))
    explode = e.axiom(sys, "Ax0", {"A": x})
    other = e.imp_trans(h, explode)  # boxneg -> x
    cases = e.axiom(sys, "Ax8", {"A": x, "B": boxneg, "C": x})
    step = e.mp2(ident, cases)
    step = e.mp2(other, step)
    e.mp2(split, step)
    backward = e.discharge(nb).emit(bld)  # nb -> []a

    bld.conclude(bld.adjoin(forward, backward))
    return bld.build()


# ---------------------------------------------------------------------------
# The shipped corpus

#: entry name -> (builder producing the canonical instance, file stem)
CORPUS_BUILDERS: dict[str, Callable[[], Proof]] = {
    "MP2": lambda: mp2_template(_P, _Q),
    "MP3": lambda: mp3_proof(_P, _Q),
    "Kmix": lambda: kmix_proof(_P, _Q),
    "Ksup": lambda: ksup_proof(_P, _Q),
    "Ssup": lambda: ssup_proof(_P, _Q, _R),
    "C": lambda: excluded_conditional_proof(_P, _Q),
    "Trans": lambda: trans_template(_P, _Q, _R),
    "Ex": lambda: ex_proof(_P, _Q, _R),
    "Pfix": lambda: pfix_proof(_P, _Q, _R),
    "SupImpEquiv": lambda: sup_imp_equiv_proof(_P, _Q),
    "SupDni": lambda: conditional_dni_proof(_P),
    "BoxFix": lambda: box_fixpoint_proof(_P),
}

#: expected conclusions, used as an integrity cross-check
CORPUS_CONCLUSIONS: dict[str, Formula] = {
    "MP2": _Q,
    "MP3": ClsImp(_P, IntImp(ClsImp(_P, _Q), _Q)),
    "Kmix": IntImp(_P, ClsImp(_Q, _P)),
    "Ksup": ClsImp(_P, ClsImp(_Q, _P)),
    "Ssup": ClsImp(
        ClsImp(_P, ClsImp(_Q, _R)), ClsImp(ClsImp(_P, _Q), ClsImp(_P, _R))
    ),
    "C": Or(_P, ClsImp(_P, _Q)),
    "Trans": ClsImp(_P, _R),
    "Ex": IntImp(ClsImp(_P, ClsImp(_Q, _R)), ClsImp(_Q, ClsImp(_P, _R))),
    "Pfix": IntImp(IntImp(_Q, _R), IntImp(ClsImp(_P, _Q), ClsImp(_P, _R))),
    "SupImpEquiv": iff(ClsImp(_P, _Q), IntImp(sup_neg(sup_neg(_P)), _Q)),
    "SupDni": ClsImp(_P, sup_neg(sup_neg(_P))),
    "BoxFix": iff(Box(_P), imp_neg(Box(imp_neg(Box(_P))))),
}


def build_corpus() -> dict[str, Proof]:
    """Rebuild every corpus entry from its builder."""
    return {name: make() for name, make in CORPUS_BUILDERS.items()}


def _data_dir():
    return resources.files("duolog").joinpath("corpus_data")


def load_corpus() -> dict[str, Proof]:
    """Load the shipped corpus files and re-check every proof."""
    corpus: dict[str, Proof] = {}
    data_dir = _data_dir()
    try:
        entries = sorted(p.name for p in data_dir.iterdir() if p.name.endswith(".json"))
    except FileNotFoundError:
        raise CorpusError("corpus data directory is missing") from None
    if not entries:
        raise CorpusError("corpus data directory is empty; run scripts/build_corpus.py")
    for filename in entries:
        raw = json.loads(data_dir.joinpath(filename).read_text())
        name = raw.get("name", filename[:-5])
        proof = proof_from_dict(raw)
        verdict = check_proof(proof)
        if not verdict.accepted:
            raise CorpusError(
                f"corpus entry {name!r} rejected at step {verdict.failed_step}: {verdict.reason}"
            )
        expected = CORPUS_CONCLUSIONS.get(name)
        if expected is not None and proof.conclusion != expected:
            raise CorpusError(f"corpus entry {name!r} concludes the wrong formula")
        corpus[name] = proof
    return corpus


def corpus_entry_to_dict(name: str, proof: Proof) -> dict:
    data = proof_to_dict(proof)
    data["name"] = name
    return data
