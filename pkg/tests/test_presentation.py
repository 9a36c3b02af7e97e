import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sylab.exactlinalg import PrimeField
from sylab.presentation import (
    AlgebraSpec,
    Arrow,
    PresentationError,
    Quiver,
    Relation,
    algebra_from_json,
    algebra_to_json,
    build_algebra,
    linear_path_algebra,
    multiply,
    nakayama_cyclic_algebra,
    opposite_algebra,
    paper_example_algebra,
    truncated_polynomial_algebra,
)


def commutative_square(p=3):
    q = Quiver(
        ("1", "2", "3", "4"),
        (Arrow("a", "1", "2"), Arrow("b", "1", "3"), Arrow("c", "2", "4"), Arrow("d", "3", "4")),
    )
    rel = Relation(((1, ("a", "c")), (-1, ("b", "d"))))
    return build_algebra(AlgebraSpec(PrimeField(p), q, (rel,), 3))


def count_paths(quiver, max_len, killed=()):
    """Brute-force count of arrow paths of length < max_len avoiding killed subwords."""
    src = {a.name: a.source for a in quiver.arrows}
    tgt = {a.name: a.target for a in quiver.arrows}
    total = len(quiver.vertices)
    layer = [(a.name,) for a in quiver.arrows]
    for _ in range(1, max_len):
        ok = [w for w in layer if not any(_contains(w, k) for k in killed)]
        total += len(ok)
        layer = [w + (a,) for w in ok for a in src if src[a] == tgt[w[-1]]]
    return total


def _contains(word, sub):
    n = len(sub)
    return any(word[i : i + n] == sub for i in range(len(word) - n + 1))


ALGEBRAS = [
    lambda: truncated_polynomial_algebra(3, 2),
    lambda: paper_example_algebra(3, 2),
    lambda: nakayama_cyclic_algebra(2, 3, 3),
    lambda: linear_path_algebra(3, 5),
    lambda: commutative_square(3),
]


def unit(a, k):
    v = np.zeros(a.dimension, dtype=np.int64)
    v[k] = 1
    return v


def test_loop_algebra():
    a = truncated_polynomial_algebra(2, 2)
    assert a.dimension == 2
    assert [a.path_label(b) for b in a.basis] == ["e1", "c1"]
    x = unit(a, 1)
    assert not multiply(a, x, x).any()


def test_paper_example_dimensions():
    a = paper_example_algebra(3, 2)
    assert a.dimension == 6
    assert sorted(a.path_label(b) for b in a.basis) == ["a1", "a2", "b", "e1", "e2", "e3"]
    assert paper_example_algebra(2, 2).dimension == 4
    assert paper_example_algebra(5, 3).dimension == 10
    a = paper_example_algebra(2, 2)
    b = unit(a, a.basis.index((1, (a.quiver.arrow_index["b"],))))
    assert not multiply(a, b, b).any()


def test_a1_a2_vanish():
    a = paper_example_algebra(3, 2)
    a1 = unit(a, a.basis_index[(0, (a.quiver.arrow_index["a1"],))])
    a2 = unit(a, a.basis_index[(1, (a.quiver.arrow_index["a2"],))])
    assert not multiply(a, a1, a2).any()


def test_a2_and_nakayama_dimensions():
    assert linear_path_algebra(2, 2).dimension == 3
    assert nakayama_cyclic_algebra(1, 2, 2).dimension == 2
    assert nakayama_cyclic_algebra(2, 2, 2).dimension == 4
    assert nakayama_cyclic_algebra(3, 4, 2).dimension == 12


@pytest.mark.parametrize("make", ALGEBRAS)
def test_dimension_matches_path_count(make):
    a = make()
    killed = []
    for rel in a.spec.relations:
        if len(rel.terms) == 1:
            killed.append(rel.terms[0][1])
    expected = count_paths(a.quiver, a.spec.nilpotency_bound, killed)
    # each binomial relation identifies two paths of length < m
    binomial = sum(1 for rel in a.spec.relations if len(rel.terms) == 2)
    assert a.dimension == expected - binomial


def test_commutative_square_identifies_paths():
    a = commutative_square()
    ia = a.quiver.arrow_index
    ac = a.path_vector((0, (ia["a"], ia["c"])))
    bd = a.path_vector((0, (ia["b"], ia["d"])))
    assert np.array_equal(ac, bd)
    assert a.dimension == 9


@pytest.mark.parametrize("make", ALGEBRAS)
def test_associativity_and_unit(make):
    a = make()
    d = a.dimension
    m = a.mult
    # (b_i b_j) b_k == b_i (b_j b_k) on every basis triple
    left = np.einsum("ijl,lkm->ijkm", m, m) % a.p
    right = np.einsum("jkl,ilm->ijkm", m, m) % a.p
    assert np.array_equal(left, right)
    one = np.zeros(d, dtype=np.int64)
    one[: a.n_vertices] = 1
    for k in range(d):
        x = unit(a, k)
        assert np.array_equal(multiply(a, one, x), x)
        assert np.array_equal(multiply(a, x, one), x)


@pytest.mark.parametrize("make", ALGEBRAS)
def test_idempotents_and_endpoints(make):
    a = make()
    n = a.n_vertices
    for i in range(n):
        for j in range(n):
            prod = multiply(a, unit(a, i), unit(a, j))
            assert np.array_equal(prod, unit(a, i) if i == j else 0 * prod)
    for i, b1 in enumerate(a.basis):
        assert len(b1[1]) < a.spec.nilpotency_bound
        for j, b2 in enumerate(a.basis):
            if a.end(b1) != a.start(b2):
                assert not a.mult[i, j].any()


def test_opposite():
    a = truncated_polynomial_algebra(2, 2)
    assert opposite_algebra(a).dimension == 2
    a2 = linear_path_algebra(2, 2)
    op = opposite_algebra(a2)
    assert (op.arrows[0].source, op.arrows[0].target) == ("2", "1")
    pe = paper_example_algebra(3, 2)
    twice = opposite_algebra(opposite_algebra(pe))
    assert sorted(map(pe.path_label, pe.basis)) == sorted(map(twice.path_label, twice.basis))
    assert twice == pe


@pytest.mark.parametrize(
    "bad",
    [
        lambda: Quiver((), ()),
        lambda: Quiver(("1", "1"), ()),
        lambda: Quiver(("1",), (Arrow("a", "1", "2"),)),
        lambda: AlgebraSpec(
            PrimeField(2), Quiver(("1",), (Arrow("a", "1", "1"),)), (Relation(((1, ("a",)),)),), 2
        ),
        lambda: AlgebraSpec(
            PrimeField(2), Quiver(("1",), (Arrow("a", "1", "1"),)), (Relation(((2, ("a", "a")),)),), 2
        ),
        lambda: AlgebraSpec(PrimeField(2), Quiver(("1",), ()), (), 1),
        lambda: commutative_square().spec.__class__(
            PrimeField(3),
            commutative_square().quiver,
            (Relation(((1, ("a", "c")), (1, ("b",)))),),
            3,
        ),
    ],
)
def test_invalid_specs_rejected(bad):
    with pytest.raises(PresentationError):
        bad()


def test_json_round_trip_and_strictness():
    a = commutative_square()
    data = algebra_to_json(a)
    again = algebra_from_json(json.dumps(data))
    assert again == a
    assert algebra_to_json(again) == data
    data["extra"] = 1
    with pytest.raises(PresentationError):
        algebra_from_json(data)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(2, 4), st.sampled_from([2, 3, 5]))
def test_nakayama_dimension_is_n_times_m(n, m, p):
    assert nakayama_cyclic_algebra(n, m, p).dimension == n * m
