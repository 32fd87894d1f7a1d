import pytest
from hypothesis import strategies as st

from frobsurf.fields import make_field
from frobsurf.poly import Poly


@pytest.fixture(scope="session")
def gf2():
    return make_field(2, 1)


@pytest.fixture(scope="session")
def gf3():
    return make_field(3, 1)


@pytest.fixture(scope="session")
def gf4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def gf5():
    return make_field(5, 1)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


def monomials_of_degree(d):
    out = []
    for e0 in range(d, -1, -1):
        for e1 in range(d - e0, -1, -1):
            for e2 in range(d - e0 - e1, -1, -1):
                out.append((e0, e1, e2, d - e0 - e1 - e2))
    return out


@st.composite
def homogeneous_polys(draw, ps=(2, 3, 5), max_degree=5, max_terms=6, extension=False):
    p = draw(st.sampled_from(ps))
    e = draw(st.sampled_from([1, 2])) if extension else 1
    field = make_field(p, e)
    d = draw(st.integers(min_value=1, max_value=max_degree))
    monos = monomials_of_degree(d)
    idxs = draw(st.sets(st.integers(min_value=0, max_value=len(monos) - 1),
                        min_size=1, max_size=min(max_terms, len(monos))))
    chosen = [monos[i] for i in sorted(idxs)]
    terms = {}
    for m in chosen:
        idx = draw(st.integers(min_value=1, max_value=field.order - 1))
        terms[m] = field.from_index(idx)
    return Poly(field, terms)


@st.composite
def field_pairs(draw, ps=(2, 3, 5)):
    p = draw(st.sampled_from(ps))
    e = draw(st.sampled_from([1, 2, 3]))
    field = make_field(p, e)
    a = field.from_index(draw(st.integers(min_value=0, max_value=field.order - 1)))
    b = field.from_index(draw(st.integers(min_value=0, max_value=field.order - 1)))
    return field, a, b
