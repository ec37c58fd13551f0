import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbim_specialise.coxeter import build_realisation, element_from_word
from sbim_specialise.engine import (
    FIX,
    SHIFT,
    STAY,
    BSWord,
    check_local_simplicity,
    decomposition_to_json,
    res_point,
    specialise,
    standard_flag_prediction,
)
from sbim_specialise.errors import NotInOrbitError
from sbim_specialise.sweep import dominant_sample, wall_subsets
from sbim_specialise.tits import act, make_point, orbit_table

A2 = build_realisation("A2")
A = make_point(A2, pairings=[0, 1])


def image(word, p=A):
    return act(element_from_word(A2, word), p)


def summary(dec):
    return sorted((s.point.coords, tuple(r.element.word for r in s.letters)) for s in dec.summands)


class TestWorkedExample:
    def test_single_fixing_letter(self):
        dec = specialise(A2, (0,), A)
        assert summary(dec) == [(A.coords, ((0,),))]

    def test_single_moving_letter(self):
        dec = specialise(A2, (1,), A)
        assert summary(dec) == sorted([(A.coords, ()), (image((1,)).coords, ())])

    def test_two_letters(self):
        dec = specialise(A2, (1, 0), A)
        assert summary(dec) == sorted([(A.coords, ((0,),)), (image((1,)).coords, ((1, 0, 1),))])
        assert all(s.in_local_simple_system for s in dec.summands)

    def test_flag_prediction(self):
        assert standard_flag_prediction(A2, (1, 0), A) == {A: 2, image((1,)): 2}

    def test_empty_residue(self):
        dec = specialise(A2, (1, 0), A)
        assert res_point(dec, image((0, 1))) == []
        with pytest.raises(NotInOrbitError):
            res_point(dec, make_point(A2, pairings=[1, 1]))

    def test_traces(self):
        dec = specialise(A2, (1, 0), A)
        traces = {s.point: s.origin_trace for s in dec.summands}
        assert traces[A] == ((FIX, 0), (STAY, 1))
        assert traces[image((1,))] == ((FIX, 0), (SHIFT, 1))

    def test_identity_word(self):
        dec = specialise(A2, (), A)
        assert summary(dec) == [(A.coords, ())]
        assert dec.total_dim() == 1

    def test_word_validation(self):
        with pytest.raises(IndexError, match="generator index out of range"):
            specialise(A2, (8,), A)
        with pytest.raises(IndexError):
            BSWord((0, 3)).validate(2)

    def test_table_must_match(self):
        table = orbit_table(A2, make_point(A2, pairings=[1, 1]))
        with pytest.raises(ValueError):
            specialise(A2, (0,), A, table)

    def test_json(self):
        out = decomposition_to_json(specialise(A2, (1, 0), A))
        assert out["word"] == [2, 1]
        assert [s["dim"] for s in out["summands"]] == [2, 2]
        assert out["summands"][1]["letters"][0]["word"] == [2, 1, 2]


@pytest.mark.parametrize("name", ["A1", "A1xA1", "A2", "B2", "G2", "A3", "B3"])
def test_degenerate_endpoints(name, real):
    real = real(name)
    zero = dominant_sample(real, tuple(range(real.rank)))
    regular = dominant_sample(real, ())
    for word in [(), (0,), tuple(range(real.rank)) * 2]:
        dec = specialise(real, word, zero)
        assert len(dec.summands) == 1 and len(dec.summands[0].letters) == len(word)
        dec = specialise(real, word, regular)
        assert len(dec.summands) == 2 ** len(word)
        assert all(s.dim == 1 for s in dec.summands)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "A3", "B3", "H3"]), st.data())
def test_flag_and_dimension(name, data):
    real = build_realisation(name)
    walls = data.draw(st.sampled_from(wall_subsets(real.rank)))
    table = orbit_table(real, dominant_sample(real, walls))
    a = data.draw(st.sampled_from(table.points))
    word = tuple(data.draw(st.lists(st.integers(0, real.rank - 1), max_size=6)))
    dec = specialise(real, word, a)
    assert dec.total_dim() == 2 ** len(word)
    assert dec.dims_by_point() == standard_flag_prediction(real, word, a)
    assert set(dec.points()) <= set(dec.table.points)
    for s in dec.summands:
        # each letter is a reflection fixing the summand's point
        assert all(r.fixes(s.point.coords) for r in s.letters)
        assert len(s.origin_trace) == len(word)
    report = check_local_simplicity(real, dec)
    assert len(report.summand_flags) == len(dec.summands)
