import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalcount import InputError, LimitError
from modalcount.modal import (
    AXIOMS,
    And,
    Atom,
    Box,
    Diamond,
    GeachIndex,
    Implies,
    Model,
    Not,
    Or,
    box_pow,
    diamond_pow,
    eval_formula,
    frame_validates,
    geach_formula,
    geach_property,
    is_s5,
    parse_formula,
)
from modalcount.relations import Frame, all_frames, complete, frame_from_edges, has_property, identity

p, q = Atom("p"), Atom("q")


def small_frames():
    for n in (1, 2, 3):
        yield from all_frames(n)


def test_eval_examples():
    m = Model(frame_from_edges(2, [(0, 1)]), {"p": frozenset({1})})
    assert eval_formula(m, 0, Diamond(p))
    assert eval_formula(m, 1, Box(p))
    assert not eval_formula(m, 1, Diamond(p))


def test_missing_atom_is_false():
    m = Model(identity(2), {})
    assert not eval_formula(m, 0, Atom("r"))
    assert eval_formula(m, 0, Not(Atom("r")))


def test_eval_rejects_bad_world():
    with pytest.raises(InputError):
        eval_formula(Model(identity(2)), 2, p)
    with pytest.raises(InputError):
        Model(identity(2), {"p": frozenset({5})})


def test_frame_validates_examples():
    for f in all_frames(2):
        assert frame_validates(f, AXIOMS["K"])
    assert frame_validates(identity(3), AXIOMS["T"])
    assert not frame_validates(frame_from_edges(2, [(0, 1)]), AXIOMS["T"])
    # the refuting valuation named in the docs
    m = Model(frame_from_edges(2, [(0, 1)]), {"p": frozenset({1})})
    assert not eval_formula(m, 0, AXIOMS["T"])


def test_frame_validates_budget():
    with pytest.raises(LimitError, match="valuations"):
        frame_validates(identity(9), AXIOMS["K"], budget=1 << 17)


def test_geach_formula_examples():
    assert geach_formula(GeachIndex(0, 1, 0, 0)) == Implies(Box(p), p)
    assert geach_formula(GeachIndex(1, 0, 1, 1)) == Implies(Diamond(p), Box(Diamond(p)))
    assert geach_formula(GeachIndex(0, 1, 2, 0)) == Implies(Box(p), Box(Box(p)))


def test_geach_property_examples():
    assert geach_property(identity(3), GeachIndex(0, 1, 0, 0))
    assert not geach_property(frame_from_edges(2, [(0, 1)]), GeachIndex(0, 0, 1, 1))
    f = frame_from_edges(3, [(0, 1), (1, 1), (1, 2), (2, 2), (2, 1)])
    assert geach_property(f, GeachIndex(1, 0, 1, 1))


def test_geach_index_nonnegative():
    with pytest.raises(InputError):
        GeachIndex(0, -1, 0, 0)


def test_is_s5_examples():
    assert all(is_s5(identity(n)) for n in range(1, 6))
    assert is_s5(complete(3))
    assert not is_s5(frame_from_edges(2, [(0, 1), (1, 0)]))


def test_k_valid_on_all_small_frames():
    assert all(frame_validates(f, AXIOMS["K"]) for f in small_frames())


def test_s5_axioms_match_equivalence():
    for f in small_frames():
        both = frame_validates(f, AXIOMS["T"]) and frame_validates(f, AXIOMS["5"])
        assert both == has_property(f, "equivalence") == is_s5(f)


def test_reflexive_euclidean_gives_equivalence_but_euclidean_alone_does_not():
    five = GeachIndex(1, 0, 1, 1)
    witnesses = []
    for f in small_frames():
        if has_property(f, "reflexive") and geach_property(f, five):
            assert has_property(f, "transitive") and has_property(f, "symmetric")
        if f.n == 3 and geach_property(f, five) and not has_property(f, "transitive"):
            witnesses.append(f)
    assert witnesses


def test_axiom_5_alone_does_not_give_4():
    f = frame_from_edges(3, [(0, 1), (1, 1), (1, 2), (2, 2), (2, 1)])
    assert frame_validates(f, AXIOMS["5"])
    assert not frame_validates(f, AXIOMS["4"])


@pytest.mark.parametrize("n", [1, 2])
def test_correspondence_sweep_small(n):
    # the n = 3 sweep lives in the acceptance suite
    for f in all_frames(n):
        for idx in itertools.product(range(3), repeat=4):
            g = GeachIndex(*idx)
            assert frame_validates(f, geach_formula(g)) == geach_property(f, g)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p", p),
        ("~p", Not(p)),
        ("p & q | p", Or(And(p, q), p)),
        ("p -> q -> p", Implies(p, Implies(q, p))),
        ("[](p -> <>q)", Box(Implies(p, Diamond(q)))),
        ("<>^3 p", diamond_pow(3, p)),
        ("[]^0 p", p),
        ("<>^2 []^1 p -> []^0 <> p", Implies(diamond_pow(2, Box(p)), Diamond(p))),
    ],
)
def test_parse(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("text", ["", "p &", "(p", "p q", "<>^x p", "p $ q"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_formula(text)


def test_str_parses_back():
    for name, f in AXIOMS.items():
        assert parse_formula(str(f)) == f, name


def test_box_pow_zero_is_identity():
    assert box_pow(0, p) == p == diamond_pow(0, p)


positive = st.recursive(
    st.sampled_from([p, q]),
    lambda sub: st.one_of(
        st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Box, sub), st.builds(Diamond, sub)
    ),
    max_leaves=8,
)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (n * n)) - 1))),
    positive,
    st.data(),
)
def test_negation_free_formulas_are_monotone(frame_code, phi, data):
    n, code = frame_code
    f = Frame.from_code(n, code)
    worlds = st.frozensets(st.integers(0, n - 1))
    small = {"p": data.draw(worlds), "q": data.draw(worlds)}
    big = {k: v | data.draw(worlds) for k, v in small.items()}
    for w in range(n):
        if eval_formula(Model(f, small), w, phi):
            assert eval_formula(Model(f, big), w, phi)
