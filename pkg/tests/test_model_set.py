from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kolakoski.constant_length import block_substitution, spectrum_report, theta, theta_tilde
from kolakoski.errors import ValidationError
from kolakoski.model_set import (
    LatticeCoset,
    column_letters,
    coset_decomposition,
    cut_project_descriptor,
    ifs_system,
    letter_frequencies,
    substitution_scheme,
    unresolved_density,
    verify_cosets_against_prefix,
)
from kolakoski.substitution import KolParams, Substitution, fixed_point_prefix, power

T2 = theta_tilde(2).sub


def test_ifs_theta_tilde_2():
    ifs = ifs_system(T2)
    assert ifs.describe().splitlines() == [
        "U_a1 = 3 U_a1 ∪ 3 U_a1+2 ∪ 3 U_b1",
        "U_a2 = 3 U_a1+1 ∪ 3 U_a2 ∪ 3 U_b1+1",
        "U_b1 = 3 U_a2+1 ∪ 3 U_a2+2 ∪ 3 U_b1+2",
    ]
    assert ifs.branch_count() == 9


def test_ifs_single_letter():
    ifs = ifs_system(Substitution(("a",), ((0, 0),)))
    assert ifs.describe() == "U_a = 2 U_a ∪ 2 U_a+1"


def test_b1_cosets_depth_4():
    dec = coset_decomposition(T2, "b1", 4)
    assert [str(c) for c in dec.cosets] == ["9Z+5", "27Z+17", "27Z+22", "81Z+53", "81Z+58", "81Z+64", "81Z+65"]
    assert dec.covered_density == Fraction(1, 9) + Fraction(2, 27) + Fraction(4, 81) == Fraction(19, 81)
    assert dec.frequency == Fraction(1, 3)


def test_a1_a2_depth_2():
    assert LatticeCoset(2, 6, 3) in coset_decomposition(T2, "a1", 2).cosets
    assert LatticeCoset(2, 7, 3) in coset_decomposition(T2, "a2", 2).cosets


def test_frequencies():
    assert letter_frequencies(T2) == (Fraction(1, 3),) * 3
    tm = Substitution(("a", "b"), ((0, 1), (1, 0)))
    assert letter_frequencies(tm) == (Fraction(1, 2),) * 2
    for mn in [(2, 1), (5, 3), (7, 2)]:
        assert letter_frequencies(block_substitution(KolParams.from_mn(*mn))) == (Fraction(1, 2),) * 2
    with pytest.raises(ValidationError):
        letter_frequencies(Substitution(("a", "b"), ((0,), (1,))))


def test_frequencies_match_prefix_counts():
    t = theta(KolParams.from_mn(5, 3)).sub
    u = fixed_point_prefix(t, 0, 8**6)
    counts = np.bincount(u, minlength=t.size) / u.size
    assert np.allclose(counts, [float(f) for f in letter_frequencies(t)], atol=2e-3)


def test_verification_and_negative_control():
    dec = coset_decomposition(T2, "b1", 4)
    rep = verify_cosets_against_prefix(T2, dec, 3**9)
    assert rep.ok and rep.checked > 0
    assert 0 <= rep.frequency_gap <= float(rep.residual_density) + 1e-3
    single = replace(dec, cosets=(LatticeCoset(2, 5, 3),))
    rep = verify_cosets_against_prefix(T2, single, 100)
    assert rep.ok and rep.checked == len(range(5, 100, 9))
    bad = replace(dec, cosets=(LatticeCoset(2, 4, 3),))
    assert not verify_cosets_against_prefix(T2, bad, 100).ok


@pytest.mark.parametrize("letter", ["a1", "a2", "b1"])
def test_coverage_monotone_and_bounded(letter):
    prev = Fraction(0)
    for depth in range(1, 9):
        dec = coset_decomposition(T2, letter, depth)
        assert prev <= dec.covered_density < dec.frequency
        prev = dec.covered_density


def test_partition_of_residues():
    depth = 5
    ell = 3
    decs = [coset_decomposition(T2, i, depth) for i in range(3)]
    owner = np.full(ell**depth, -1)
    for i, dec in enumerate(decs):
        for c in dec.cosets:
            sel = np.arange(c.residue, ell**depth, c.modulus)
            assert (owner[sel] == -1).all()
            owner[sel] = i
    unresolved = np.count_nonzero(owner == -1)
    assert Fraction(unresolved, ell**depth) == unresolved_density(T2, depth)


def test_cosets_pairwise_disjoint():
    cosets = coset_decomposition(T2, "b1", 8).cosets
    for i, a in enumerate(cosets):
        for b in cosets[i + 1 :]:
            assert a.disjoint(b)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_columns_against_powers(r):
    pr = power(T2, r)
    direct = [
        col[0] if len(set(col)) == 1 else -1 for col in zip(*pr.rules)
    ]
    assert column_letters(T2, r).tolist() == direct


@settings(max_examples=40, deadline=None)
@given(mn=st.sampled_from([(2, 1), (3, 1), (3, 2), (4, 3)]), depth=st.integers(1, 4))
def test_emitted_cosets_hold_on_prefix(mn, depth):
    sub = theta_tilde(KolParams.from_mn(*mn)) if mn[1] == 1 else theta(KolParams.from_mn(*mn))
    ell = sum(mn)
    n = min(ell**9, 300_000)
    for i in range(sub.sub.size):
        dec = coset_decomposition(sub, i, depth)
        assert verify_cosets_against_prefix(sub, dec, max(n, ell**depth)).ok


def test_cut_and_project_descriptors():
    d21 = cut_project_descriptor(KolParams.from_mn(2, 1))
    assert d21.internal() == "Z_3 × Z/4Z"
    assert d21.lattice == "{(z, z, z mod 4)}"
    d53 = cut_project_descriptor(KolParams.from_mn(5, 3))
    assert d53.internal() == "Z_2" and d53.cyclic_order == 1
    for mn in [(2, 1), (4, 2), (5, 3), (6, 1)]:
        params = KolParams.from_mn(*mn)
        rep = spectrum_report(params, check=False)
        desc = cut_project_descriptor(params)
        assert (desc.internal_primes, desc.cyclic_order) == (rep.ladic_primes, rep.cyclic_order)
    assert substitution_scheme(T2).lattice == "{(z, z)}"


def test_lattice_coset_basics():
    c = LatticeCoset(2, 5, 3)
    assert c.modulus == 9 and c.density == Fraction(1, 9)
    assert 14 in c and 13 not in c
    assert c.digits() == (2, 1)
    assert LatticeCoset(1, 2, 3).contains_coset(c)
    assert not LatticeCoset(1, 0, 3).contains_coset(c)
    with pytest.raises(ValueError):
        LatticeCoset(1, 3, 3)
