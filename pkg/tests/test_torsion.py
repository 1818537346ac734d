from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebras import d_dx, dual_numbers, f2xf2, upper_triangular, zmod
from localix.errors import InvalidDerivationError, PreconditionError, SizeLimitError
from localix.config import using_bounds
from localix.finmod import FinModule, Submodule, enumerate_subgroups, image
from localix.monad import (
    AlgebraDerivation,
    EMModule,
    ModuleDerivation,
    check_derivation,
    em_quotient,
    em_span,
    enumerate_module_derivations,
    free_module,
    regular_module,
)
from localix.torsion import (
    GabrielFilter,
    annihilator,
    brute_force_gabriel_filters,
    check_delta_invariance,
    check_differential,
    check_radical_invariants,
    classify,
    delta_invariant_J,
    enumerate_gabriel_filters,
    enumerate_left_ideals,
    filter_is_intersection_closed,
    gabriel_filter_of_radical,
    improper_filter,
    is_gabriel_filter,
    is_left_ideal,
    is_torsion,
    radical_of,
    torsion_radical,
    torsion_theory,
    trivial_filter,
)

ALGEBRAS = [dual_numbers(), zmod(4), f2xf2(), upper_triangular(), zmod(6)]
IDS = [",".join(A.labels) + f"/{A.modulus}" for A in ALGEBRAS]


def ideal(A, *gens):
    return em_span(regular_module(A), list(gens))


def zero_module(A):
    return EMModule(A, FinModule(A.modulus, ()), ((),) * A.rank)


def e1_filter():
    A = f2xf2()
    return A, GabrielFilter(A, (A.carrier.whole(), ideal(A, (1, 0))))


def corpus(A):
    R = regular_module(A)
    out = {"A": R, "0": zero_module(A)}
    for I in enumerate_left_ideals(A):
        if not I.is_zero() and not I.is_whole():
            out[f"A/{I}"] = em_quotient(R, I)[0]
    if len(A.carrier) <= 4:
        out["A+A"] = free_module(A, FinModule(A.modulus, (A.modulus,) * 2))
    return out


# -- left ideals -----------------------------------------------------------------


@pytest.mark.parametrize("A,count", [(dual_numbers(), 3), (f2xf2(), 4), (zmod(4), 3)])
def test_left_ideal_counts(A, count):
    ideals = enumerate_left_ideals(A)
    assert len(ideals) == count
    # oracle: subgroups closed under left multiplication by every element
    oracle = [S for S in enumerate_subgroups(A.carrier)
              if all(A.mul(a, x) in S for a in A.elements() for x in S.elements())]
    assert sorted(ideals) == sorted(oracle)
    assert all(is_left_ideal(A, I) for I in ideals)


def test_upper_triangular_left_ideals_are_not_all_right_ideals():
    A = upper_triangular()
    ideals = enumerate_left_ideals(A)
    two_sided = [I for I in ideals if all(A.mul(x, a) in I for a in A.elements() for x in I.elements())]
    assert len(two_sided) < len(ideals)


# -- Gabriel filters ---------------------------------------------------------------


def test_trivial_and_improper_filters_pass():
    for A in ALGEBRAS:
        assert is_gabriel_filter(A, trivial_filter(A)).passed
        assert is_gabriel_filter(A, improper_filter(A)).passed


def test_axiom_four_witness_on_dual_numbers():
    A = dual_numbers()
    v = is_gabriel_filter(A, [A.carrier.whole(), ideal(A, (0, 1))])
    assert not v.passed
    assert v.axiom == "(4)"
    assert v.witness == {"I": str(A.carrier.zero_submodule()), "J": str(ideal(A, (0, 1)))}


def test_missing_whole_ring_fails_axiom_one():
    A = dual_numbers()
    v = is_gabriel_filter(A, [ideal(A, (0, 1))])
    assert v.axiom == "(1)"


def test_non_upward_closed_fails_axiom_two():
    A = f2xf2()
    v = is_gabriel_filter(A, [A.carrier.whole(), A.carrier.zero_submodule()])
    assert v.axiom == "(2)"


@pytest.mark.parametrize("A,count", [(dual_numbers(), 2), (zmod(4), 2), (f2xf2(), 4)])
def test_filter_counts(A, count):
    assert len(enumerate_gabriel_filters(A)) == count


def test_f2xf2_filters_are_the_expected_four():
    A = f2xf2()
    one, e1, e2 = A.carrier.whole(), ideal(A, (1, 0)), ideal(A, (0, 1))
    zero = A.carrier.zero_submodule()
    expected = {frozenset(s) for s in ([one], [one, e1], [one, e2], [one, e1, e2, zero])}
    assert {frozenset(L) for L in enumerate_gabriel_filters(A)} == expected


@pytest.mark.parametrize("A", ALGEBRAS, ids=IDS)
def test_filters_match_brute_force(A):
    found = enumerate_gabriel_filters(A)
    assert found == brute_force_gabriel_filters(A)
    for L in found:
        assert filter_is_intersection_closed(L)


def test_filter_lattice_bound():
    with using_bounds(lattice=3):
        with pytest.raises(SizeLimitError, match="lattice"):
            enumerate_gabriel_filters(upper_triangular())


# -- torsion and radicals ----------------------------------------------------------------


@pytest.mark.parametrize("A", ALGEBRAS, ids=IDS)
def test_zero_module_is_torsion_for_every_filter(A):
    for L in enumerate_gabriel_filters(A):
        assert is_torsion(zero_module(A), L).passed


@pytest.mark.parametrize("A", ALGEBRAS, ids=IDS)
def test_trivial_filter_torsion_means_zero(A):
    L = trivial_filter(A)
    for name, M in corpus(A).items():
        assert is_torsion(M, L).passed == (len(M.carrier) == 1)
        assert torsion_radical(M, L).is_zero()
        assert torsion_radical(M, improper_filter(A)).is_whole()


def test_f2xf2_regular_not_torsion():
    A, L = e1_filter()
    v = is_torsion(regular_module(A), L)
    assert not v.passed
    assert annihilator(regular_module(A), (1, 0)) == ideal(A, (0, 1))


def test_f2xf2_radical_is_e2a():
    A, L = e1_filter()
    assert torsion_radical(regular_module(A), L) == ideal(A, (0, 1))


def test_classification_examples():
    A, L = e1_filter()
    th = torsion_theory(A, L, corpus(A))
    assert th.classes["A"] == "mixed"
    assert th.classes["0"] == "T+F"
    triv = torsion_theory(A, trivial_filter(A), corpus(A))
    assert {c for n, c in triv.classes.items() if n != "0"} == {"F"}
    full = torsion_theory(A, improper_filter(A), corpus(A))
    assert {c for n, c in full.classes.items() if n != "0"} == {"T"}


def test_classify_labels():
    M = FinModule(2, (2,))
    assert classify(M.whole()) == "T"
    assert classify(M.zero_submodule()) == "F"
    assert classify(FinModule(2, ()).whole()) == "T+F"
    assert classify(Submodule.span(FinModule(2, (2, 2)), [(1, 0)])) == "mixed"


@pytest.mark.parametrize("A", ALGEBRAS, ids=IDS)
def test_radical_laws_and_round_trip(A):
    mods = corpus(A)
    for L in enumerate_gabriel_filters(A):
        for M in mods.values():
            for rep in check_radical_invariants(M, L):
                assert rep.passed, rep
        assert gabriel_filter_of_radical(A, radical_of(L)) == L


def test_round_trip_examples():
    A, L = e1_filter()
    assert gabriel_filter_of_radical(A, radical_of(L)) == L
    assert gabriel_filter_of_radical(A, radical_of(trivial_filter(A))) == trivial_filter(A)
    assert gabriel_filter_of_radical(A, radical_of(improper_filter(A))) == improper_filter(A)


# -- delta invariance -----------------------------------------------------------------


def test_j_of_whole_ring_is_whole():
    for A in ALGEBRAS:
        for d in [AlgebraDerivation.zero(A)]:
            assert delta_invariant_J(A, A.carrier.whole(), d, improper_filter(A)).is_whole()


def test_j_of_x_under_d_dx_is_zero():
    A = dual_numbers()
    J = delta_invariant_J(A, ideal(A, (0, 1)), d_dx(A), improper_filter(A))
    assert J.is_zero()


def test_j_of_zero_is_zero():
    A = dual_numbers()
    assert delta_invariant_J(A, A.carrier.zero_submodule(), d_dx(A), improper_filter(A)).is_zero()


def test_j_requires_member():
    A = dual_numbers()
    with pytest.raises(PreconditionError):
        delta_invariant_J(A, ideal(A, (0, 1)), d_dx(A), trivial_filter(A))


def algebra_derivations(A):
    r = A.rank
    for entries in product(range(A.modulus), repeat=r * r):
        d = AlgebraDerivation(A, tuple(tuple(entries[i * r:(i + 1) * r]) for i in range(r)))
        if check_derivation(A, d):
            yield d


@pytest.mark.parametrize("A", ALGEBRAS, ids=IDS)
def test_delta_invariance_for_every_derivation_and_filter(A):
    for d in algebra_derivations(A):
        for L in enumerate_gabriel_filters(A):
            v = check_delta_invariance(A, d, L)
            assert v.passed, v.witness
            if d.is_zero():
                assert all(I == J for I, J in v.pairs)


def test_inner_derivation_upper_triangular_invariance():
    A = upper_triangular()
    d = AlgebraDerivation.inner(A, (1, 0, 0))
    for L in enumerate_gabriel_filters(A):
        assert check_delta_invariance(A, d, L).passed


# -- differential torsion theories ---------------------------------------------------------


@pytest.mark.parametrize("A", [dual_numbers(), f2xf2(), zmod(4), upper_triangular()],
                         ids=lambda A: ",".join(A.labels))
def test_every_theory_is_differential(A):
    for d in algebra_derivations(A):
        for M in corpus(A).values():
            derivations = enumerate_module_derivations(M, d)
            for L in enumerate_gabriel_filters(A):
                for D in derivations:
                    assert check_differential(L, M, D).passed


def test_f2xf2_derivations_are_right_multiplications():
    A, L = e1_filter()
    R = regular_module(A)
    found = enumerate_module_derivations(R, AlgebraDerivation.zero(A))
    assert {D.matrix for D in found} == {A.right_matrix(c).matrix for c in A.elements()}
    for D in found:
        assert check_differential(L, R, D).passed
        assert image(D.as_map()) is not None


def test_differential_rejects_invalid_derivation():
    A = dual_numbers()
    R = regular_module(A)
    D = ModuleDerivation(R, ((0, 0), (0, 0)), d_dx(A))
    with pytest.raises(InvalidDerivationError):
        check_differential(improper_filter(A), R, D)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([dual_numbers(), f2xf2(), zmod(4)]), st.data())
def test_radical_is_the_elements_with_filtered_annihilator(A, data):
    L = data.draw(st.sampled_from(enumerate_gabriel_filters(A)))
    M = data.draw(st.sampled_from(list(corpus(A).values())))
    sigma = torsion_radical(M, L)
    assert set(sigma.elements()) == {x for x in M.carrier.elements() if annihilator(M, x) in L}
