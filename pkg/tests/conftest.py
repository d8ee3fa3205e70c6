import hypothesis.strategies as st
import pytest
from hypothesis import settings

from duolog.search import SearchBounds, enumerate_models
from duolog.syntax import And, Atom, BOT, Box, ClsImp, IntImp, Or

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def formulas(
    atom_names=("p", "q"),
    connectives=(And, Or, IntImp, ClsImp),
    allow_bottom=False,
    allow_box=False,
):
    leaves = [Atom(a) for a in atom_names] + ([BOT] if allow_bottom else [])
    base = st.sampled_from(leaves)

    def extend(children):
        options = [st.builds(c, children, children) for c in connectives]
        if allow_box:
            options.append(st.builds(Box, children))
        return st.one_of(options)

    return st.recursive(base, extend, max_leaves=12)


@pytest.fixture(scope="session")
def rooted_s_models():
    return list(enumerate_models(SearchBounds(variant="s", max_worlds=3, atoms=("p", "q"))))


@pytest.fixture(scope="session")
def base_free_models():
    return list(enumerate_models(SearchBounds(variant="sminus-bot", max_worlds=3, atoms=("p", "q"))))


@pytest.fixture(scope="session")
def mpc_models():
    return list(enumerate_models(SearchBounds(variant="mpc", max_worlds=2, atoms=("p", "q"))))
