import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbim_specialise.coxeter import (
    CLASSICAL_ORDERS,
    INF,
    CoxeterMatrix,
    braid_words,
    build_realisation,
    check_reflection_faithful,
    element_from_word,
    enumerate_group,
    enumerate_reflections,
    finite_group,
    inversion_count,
    length,
    product_order,
    right_descents,
)
from sbim_specialise.errors import CapExceeded, RealisationError, UnsupportedFieldError
from sbim_specialise.field import FieldScalar
from sbim_specialise.linalg import mat_mul

FINITE = ["A1", "A1xA1", "A2", "B2", "G2", "A3", "B3", "I2(5)"]


def pairing_matrix(real):
    return [[str(real.pairing(real.simple_roots[i], j)) for j in range(real.rank)]
            for i in range(real.rank)]


class TestRealisations:
    def test_a2_pairings(self):
        assert pairing_matrix(build_realisation("A2")) == [["2", "-1"], ["-1", "2"]]

    def test_b2_pairings(self):
        assert pairing_matrix(build_realisation("B2")) == [["2", "-1"], ["-2", "2"]]

    def test_m7_needs_unsupported_field(self):
        with pytest.raises(UnsupportedFieldError, match="unsupported field"):
            build_realisation(CoxeterMatrix([[1, 7], [7, 1]]))

    def test_m5_needs_root5(self):
        with pytest.raises(UnsupportedFieldError):
            build_realisation([[1, 5], [5, 1]])
        real = build_realisation([[1, 5], [5, 1]], d=5)
        assert len(finite_group(real)) == 10

    def test_h3_needs_d5(self):
        with pytest.raises(UnsupportedFieldError):
            build_realisation("H3", d=2)

    def test_affine_pair(self):
        real = build_realisation([[1, "inf"], [INF, 1]])
        assert real.coxmat[0, 1] == INF
        assert not enumerate_group(real, 6).complete

    def test_user_roots(self):
        # A2 realised in the plane x+y+z = 0 of Q^3
        roots = [[1, -1, 0], [0, 1, -1]]
        real = build_realisation([[1, 3], [3, 1]], roots=roots, coroots=roots)
        assert real.dim == 3
        assert len(finite_group(real)) == 6
        assert len(enumerate_reflections(real)) == 3

    def test_root_coroot_pairing_must_be_two(self):
        with pytest.raises(RealisationError, match="must be 2"):
            build_realisation([[1, 3], [3, 1]], roots=[[1, 0], [0, 1]], coroots=[[1, -1], [-1, 2]])

    def test_roots_without_coroots(self):
        with pytest.raises(RealisationError):
            build_realisation([[1, 3], [3, 1]], roots=[[1, 0], [0, 1]])

    def test_braid_order_failure_names_pair(self):
        with pytest.raises(RealisationError) as info:
            build_realisation([[1, 4], [4, 1]], roots=[[1, 0], [0, 1]], coroots=[[2, -1], [-1, 2]])
        assert info.value.pair == (0, 1)

    @pytest.mark.parametrize("rows", [[[1, 3], [2, 1]], [[2, 3], [3, 1]], [[1, 1], [1, 1]], [[1, 3]]])
    def test_invalid_coxeter_matrix(self, rows):
        with pytest.raises(RealisationError):
            CoxeterMatrix(rows)


class TestWords:
    def test_identity_and_braid(self):
        real = build_realisation("A2")
        assert element_from_word(real, ()).is_identity()
        assert element_from_word(real, (0, 1, 0)) == element_from_word(real, (1, 0, 1))
        assert element_from_word(real, (0, 0)).is_identity()

    def test_lengths(self):
        a2 = build_realisation("A2")
        assert length(a2, element_from_word(a2, (0, 1, 0))) == 3
        b2 = build_realisation("B2")
        assert max(length(b2, g) for g in finite_group(b2)) == 4

    @pytest.mark.parametrize("name,count", [("A2", 3), ("B2", 4), ("A1", 1), ("G2", 6), ("B3", 9),
                                            ("H3", 15)])
    def test_reflection_counts(self, name, count):
        assert len(enumerate_reflections(build_realisation(name))) == count

    def test_enumeration_examples(self):
        a2 = build_realisation("A2")
        g = enumerate_group(a2, 10)
        assert (len(g), g.complete) == (6, True)
        assert len(enumerate_group(build_realisation("B2"))) == 8
        g = enumerate_group(build_realisation("A1xA1"), 1)
        assert (len(g), g.complete) == (3, False)
        with pytest.raises(CapExceeded):
            finite_group(build_realisation("A1xA1"), 1)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            element_from_word(build_realisation("A2"), (2,))


@pytest.mark.parametrize("name", FINITE + ["H3"])
def test_group_order(name):
    assert len(finite_group(build_realisation(name))) == CLASSICAL_ORDERS[name]


@pytest.mark.parametrize("name", FINITE)
def test_braid_relations(name):
    real = build_realisation(name)
    for s, t in itertools.combinations(range(real.rank), 2):
        m = real.coxmat[s, t]
        u, v = braid_words(s, t, m)
        assert element_from_word(real, u) == element_from_word(real, v)
        st_ = mat_mul(real.generator_matrices[s], real.generator_matrices[t])
        assert product_order(st_, 20) == m
    for s in range(real.rank):
        assert element_from_word(real, (s, s)).is_identity()


@pytest.mark.parametrize("name", FINITE)
def test_length_statistics(name):
    real = build_realisation(name)
    group = finite_group(real)
    n_refl = len(enumerate_reflections(real))
    lengths = [length(real, g) for g in group]
    # the longest element inverts every positive root
    assert max(lengths) == n_refl
    assert lengths.count(max(lengths)) == 1
    assert all(len(g.word) == ell for g, ell in zip(group, lengths))
    assert check_reflection_faithful(real) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "A3", "B3"]), st.lists(st.integers(0, 2), max_size=8))
def test_length_properties(name, word):
    real = build_realisation(name)
    word = [i % real.rank for i in word]
    g = element_from_word(real, word)
    ell = length(real, g)
    assert ell <= len(word) and ell % 2 == len(word) % 2
    assert ell == inversion_count(real, g)
    assert length(real, g.inverse()) == ell
    for s in range(real.rank):
        gs = element_from_word(real, word + [s])
        assert (length(real, gs) < ell) == (s in right_descents(real, g))


def test_root_sign_rejects_non_roots():
    real = build_realisation("A2")
    one, zero = FieldScalar(1), FieldScalar(0)
    assert real.root_sign((one, one)) == 1
    with pytest.raises(RealisationError):
        real.root_sign((one, -one))
    assert real.root_sign((zero, -one)) == -1
