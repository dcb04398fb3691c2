import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kolakoski.constant_length import block_substitution, theta_tilde
from kolakoski.errors import ParameterError, ValidationError
from kolakoski.exact import charpoly
from kolakoski.substitution import (
    KolParams,
    Substitution,
    apply,
    check_self_encoding,
    compose,
    fixed_point_prefix,
    format_values,
    is_constant_length,
    is_primitive,
    kolakoski_bi_prefix,
    kolakoski_iterates,
    kolakoski_prefix,
    kolakoski_stream,
    kolakoski_substitutions,
    lengths,
    parity_substitution,
    prefix_stream,
    primitivity_witness,
    run_length_encode,
    substitution_matrix,
    verify_self_encoding,
)

K21 = KolParams(2, 1)


def digits(text):
    return [int(c) for c in text]


def test_sigma0_applied_to_two():
    sigma0, _ = kolakoski_substitutions(K21)
    assert sigma0.format(apply(sigma0, sigma0.word("2")), "") == "22"
    assert apply(sigma0, ()) == ()


def test_apply_theta_tilde():
    t = theta_tilde(2).sub
    assert t.format(apply(t, t.word("a1"))) == "a1 a2 a1"


def test_kol21_prefix_both_methods():
    assert kolakoski_prefix(K21, 10).tolist() == digits("2211212212")
    assert kolakoski_prefix(K21, 10, method="alternating").tolist() == digits("2211212212")


def test_iteration_chain():
    chain = ["".join(map(str, w)) for w in kolakoski_iterates(K21, 5)]
    assert chain == ["2", "22", "2211", "221121", "221121221"]


def test_kol42_prefix():
    assert kolakoski_prefix(KolParams(4, 2), 16).tolist() == digits("4444222244442222")


@pytest.mark.parametrize("pq", [(2, 1), (1, 2), (3, 1), (4, 2), (2, 4), (10, 6), (5, 7)])
def test_methods_agree_long(pq):
    params = KolParams(*pq)
    a = kolakoski_prefix(params, 200_000)
    b = kolakoski_prefix(params, 200_000, method="alternating")
    assert np.array_equal(a, b)


def test_bi_prefix():
    left, right = kolakoski_bi_prefix(K21, 14)
    assert format_values(right) == "22112122122112"
    assert format_values(left[::-1]) == "11221221211221"
    empty_left, empty_right = kolakoski_bi_prefix(K21, 0)
    assert empty_left.size == 0 and empty_right.size == 0


def test_stream_restarts_identically():
    s1 = kolakoski_stream(KolParams(4, 2))
    s2 = kolakoski_stream(KolParams(4, 2))
    a = [next(s1) for _ in range(500)]
    assert a == [next(s2) for _ in range(500)]
    assert a == kolakoski_prefix(KolParams(4, 2), 500).tolist()
    left = kolakoski_stream(KolParams(4, 2), side="left")
    assert [next(left) for _ in range(50)] == kolakoski_prefix(KolParams(2, 4), 50).tolist()


def test_run_length_encode():
    # full runs, the last one included
    assert run_length_encode(digits("22112122122112"), drop_last=False).tolist() == digits("221121221")
    assert run_length_encode(digits("4444"), drop_last=False).tolist() == [4]
    # by default the last run may be truncated and is dropped
    assert run_length_encode(digits("22112122122112")).tolist() == digits("22112122")
    assert run_length_encode(digits("4444222244442222")).tolist() == [4, 4, 4]
    assert run_length_encode(digits("4444")).tolist() == []


@pytest.mark.parametrize("pq", [(2, 1), (4, 2), (3, 1), (1, 3)])
def test_self_encoding(pq):
    assert verify_self_encoding(KolParams(*pq), 100_000).ok


def test_self_encoding_negative_control():
    u = kolakoski_prefix(K21, 1000).copy()
    u[37] = 3 - u[37]
    rep = check_self_encoding(u)
    assert not rep.ok
    assert rep.first_mismatch is not None and rep.first_mismatch <= 37


def test_params_validation():
    with pytest.raises(ParameterError):
        KolParams(2, 2)
    with pytest.raises(ParameterError):
        KolParams(0, 1)
    with pytest.raises(ParameterError):
        KolParams(2, 4).even_pair()
    with pytest.raises(ParameterError):
        KolParams(3, 1).even_pair()
    assert KolParams.from_mn(2, 1) == KolParams(4, 2)
    assert str(KolParams(4, 2)) == "Kol(4,2)"


def test_matrices_and_lengths():
    sigma = block_substitution(KolParams.from_mn(3, 2)).sub
    assert substitution_matrix(sigma) == [[3, 3], [2, 2]]
    assert lengths(sigma) == (6, 4)
    assert is_constant_length(sigma) is None
    t = theta_tilde(2).sub
    assert substitution_matrix(t) == [[2, 1, 0], [0, 1, 2], [1, 1, 1]]
    assert lengths(t) == (3, 3, 3) and is_constant_length(t) == 3
    ident = Substitution(("a", "b"), ((0,), (1,)))
    assert substitution_matrix(ident) == [[1, 0], [0, 1]]
    assert not is_primitive(ident)
    assert is_constant_length(Substitution(("a",), ((0,),))) == 1


@pytest.mark.parametrize("mn", [(2, 1), (3, 1), (4, 3), (5, 2), (7, 6)])
def test_primitivity(mn):
    params = KolParams.from_mn(*mn)
    assert is_primitive(block_substitution(params).sub)
    par = parity_substitution(params)
    assert primitivity_witness(par) == 2


def test_parity_substitution_kol42():
    par = parity_substitution(KolParams(4, 2))
    t = "\u0303"
    assert par.to_text() == (
        f"4 -> 4 4{t} 4 4{t}\n4{t} -> 2 2{t} 2 2{t}\n2 -> 4 4{t}\n2{t} -> 2 2{t}\n"
    )
    assert charpoly(substitution_matrix(par)) == [1, -3, 0, 0, 0]


def test_fixed_point_prefixes():
    t = theta_tilde(2).sub
    assert t.format(fixed_point_prefix(t, "a1", 9)) == "a1 a2 a1 a2 b1 b1 a1 a2 a1"
    sigma = block_substitution(KolParams.from_mn(2, 1)).sub
    twice = apply(sigma, apply(sigma, sigma.word("A")))
    assert fixed_point_prefix(sigma, "A", 6).tolist() == list(twice[:6])
    assert sigma.format(fixed_point_prefix(sigma, "A", 6), "") == "AABBAA"
    assert fixed_point_prefix(t, "a1", 0).size == 0
    with pytest.raises(ValidationError, match="prefix-stable"):
        fixed_point_prefix(t, "b1", 5)


def test_text_and_json_round_trip():
    t = theta_tilde(2).sub
    assert t.to_text() == "a1 -> a1 a2 a1\na2 -> a2 b1 b1\nb1 -> a1 a2 b1\n"
    assert Substitution.from_text(t.to_text()).rules == t.rules
    assert Substitution.from_json(t.to_json()) == t
    with pytest.raises(ValidationError):
        Substitution.from_text("a -> a b\n")
    with pytest.raises(ValidationError):
        Substitution.from_text("a b c\n")
    with pytest.raises(ValidationError):
        Substitution((), ())


# random substitutions over up to 4 letters
subs = st.integers(1, 4).flatmap(
    lambda r: st.lists(st.lists(st.integers(0, r - 1), min_size=1, max_size=4), min_size=r, max_size=r).map(
        lambda rules: Substitution(tuple("abcd"[:r]), tuple(tuple(x) for x in rules))
    )
)


@settings(max_examples=100, deadline=None)
@given(sub=subs, data=st.data())
def test_morphism_law(sub, data):
    letters = st.lists(st.integers(0, sub.size - 1), max_size=10)
    u, v = tuple(data.draw(letters)), tuple(data.draw(letters))
    assert apply(sub, u + v) == apply(sub, u) + apply(sub, v)


@settings(max_examples=100, deadline=None)
@given(sub=subs)
def test_matrix_of_composition_is_square(sub):
    m = np.array(substitution_matrix(sub))
    assert (np.array(substitution_matrix(compose(sub, sub))) == m @ m).all()
    assert m.sum(axis=1).tolist() == list(lengths(sub))


@settings(max_examples=60, deadline=None)
@given(sub=subs, n=st.integers(0, 200), extra=st.integers(0, 200))
def test_prefixes_nest(sub, n, extra):
    seeds = [i for i, img in enumerate(sub.rules) if img[0] == i and len(img) > 1]
    if not seeds:
        return
    short = fixed_point_prefix(sub, seeds[0], n)
    long = fixed_point_prefix(sub, seeds[0], n + extra)
    assert np.array_equal(long[:n], short)
    stream = prefix_stream(sub, seeds[0])
    assert [next(stream) for _ in range(n)] == short.tolist()
