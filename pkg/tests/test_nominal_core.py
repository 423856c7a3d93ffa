import pytest

from nomuni.error import SignatureError, SortError, UnknownSymbolError
from nomuni.models.nominal import (
    IDENTITY, Abs, AbstractionSort, Arity, Atom, AtomTerm, BaseSort, Eq, Fresh, Fun, NominalProblem,
    NominalSubst, Permutation, Signature, Susp, Swapping, atoms_of, check_problem, perm_apply, perm_inverse,
    problem_atoms, problem_size, problem_vars, sort_of, subst_apply, subst_compose, subst_restrict, term_size,
    var, vars_of,
)

import generators
from generators import ATOMS, D, N, SIGNATURE

a, b, c, d = ATOMS


def swap(x, y):
    return Permutation.of((x, y))


def test_swapping_images():
    assert perm_apply(swap(a, b), AtomTerm(a)) == AtomTerm(b)
    assert perm_apply(swap(a, b), AtomTerm(c)) == AtomTerm(c)
    # the rightmost swapping is applied first
    assert Permutation.of((a, b), (b, c))(c) == a


def test_empty_permutation_is_identity(rng):
    for _ in range(50):
        t = generators.random_term(rng)
        assert perm_apply(IDENTITY, t) is t


def test_permutation_pushed_through_abstraction():
    assert perm_apply(swap(a, b), Abs(c, AtomTerm(a))) == Abs(c, AtomTerm(b))
    assert perm_apply(swap(a, b), Abs(a, AtomTerm(c))) == Abs(b, AtomTerm(c))


def test_permutation_concatenates_on_suspension():
    assert perm_apply(swap(a, b), Susp(swap(b, c), "X")) == Susp(Permutation.of((a, b), (b, c)), "X")


def test_inverse():
    assert perm_inverse(swap(a, b)) == swap(a, b)
    assert perm_inverse(IDENTITY) == IDENTITY
    pi = Permutation.of((a, b), (b, c))
    inverse = perm_inverse(pi)
    assert inverse == Permutation.of((b, c), (a, b))
    for atom in (a, b, c):
        assert inverse(pi(atom)) == atom


def test_inverse_cancels_on_suspensions(rng):
    for _ in range(200):
        pi = generators.random_perm(rng)
        t = generators.random_term(rng)
        assert perm_apply(pi, perm_apply(perm_inverse(pi), t)) == t


def test_reduction_drops_trivial_and_repeated_swappings():
    assert Permutation.of((a, a)) == IDENTITY
    assert Permutation.of((a, b), (b, a)) == IDENTITY
    assert len(Permutation.of((a, b), (c, d), (d, c), (a, c))) == 2


def test_swapping_atoms_of_different_sorts():
    with pytest.raises(SortError):
        Swapping(a, Atom("m", "M"))


def test_from_mapping_decomposes_cycles():
    pi = Permutation.from_mapping({a: b, b: c, c: a}, [a, b, c])
    assert pi == Permutation.of((a, c), (a, b))
    assert (pi(a), pi(b), pi(c)) == (b, c, a)
    assert Permutation.from_mapping({a: a, b: b}, [a, b]) == IDENTITY
    with pytest.raises(ValueError):
        Permutation.from_mapping({a: b, b: b}, [a, b])


def test_differing_atoms():
    assert swap(a, b).differing_atoms(IDENTITY) == {a, b}
    assert Permutation.of((a, b), (b, c)).differing_atoms(Permutation.of((b, c), (a, c))) == set()


def test_subst_apply_captures_atoms():
    assert subst_apply(NominalSubst({"X": AtomTerm(a)}), Abs(a, var("X"))) == Abs(a, AtomTerm(a))


def test_subst_apply_applies_suspended_permutation():
    sigma = NominalSubst({"X": Fun("g", (AtomTerm(a),))})
    t = Fun("f", (Susp(swap(a, b), "X"), var("X")))
    assert subst_apply(sigma, t) == Fun("f", (Fun("g", (AtomTerm(b),)), Fun("g", (AtomTerm(a),))))
    assert subst_apply(NominalSubst(), t) is t


def test_compose():
    s1 = NominalSubst({"Y": AtomTerm(a)})
    s2 = NominalSubst({"X": Susp(swap(a, b), "Y")})
    composed = subst_compose(s1, s2)
    assert composed.bindings == {"X": AtomTerm(b), "Y": AtomTerm(a)}
    assert subst_compose(NominalSubst(), s2) == s2
    assert subst_compose(s2, NominalSubst()) == s2


def test_restrict():
    sigma = NominalSubst({"X": AtomTerm(a), "Y": AtomTerm(b)})
    assert subst_restrict(sigma, {"X"}).bindings == {"X": AtomTerm(a)}
    assert len(subst_restrict(sigma, set())) == 0
    assert subst_restrict(NominalSubst({"X": AtomTerm(a)}), {"X", "Y"}).domain == ["X"]


def test_identity_bindings_count_toward_domain():
    sigma = NominalSubst({"X": var("X")})
    assert sigma.domain == ["X"]
    assert sigma.image("Y") == var("Y")


def test_sort_of():
    assert sort_of(Fun("h", (Abs(a, Fun("k")),)), SIGNATURE) == D
    assert sort_of(Abs(a, var("X")), SIGNATURE) == AbstractionSort("N", D)
    assert sort_of(Susp(swap(a, b), "V"), SIGNATURE) == N
    with pytest.raises(SortError):
        sort_of(Fun("g", (Fun("k"),)), SIGNATURE)
    with pytest.raises(SortError):
        sort_of(Fun("f", (Fun("k"),)), SIGNATURE)
    with pytest.raises(UnknownSymbolError):
        sort_of(var("Nope"), SIGNATURE)


def test_generated_terms_are_well_sorted(rng):
    for _ in range(200):
        t = generators.random_term(rng)
        assert sort_of(t, SIGNATURE) == D
        assert sort_of(perm_apply(generators.random_perm(rng), t), SIGNATURE) == D
        sigma = generators.random_subst(rng)
        assert sort_of(subst_apply(sigma, t), SIGNATURE) == D


def test_check_problem_rejects_mixed_sorts():
    with pytest.raises(SortError):
        check_problem(NominalProblem((Eq(AtomTerm(a), Fun("k")),), SIGNATURE))
    with pytest.raises(SortError):
        check_problem(NominalProblem((Fresh(Atom("m", "M"), Fun("k")),), SIGNATURE))
    check_problem(NominalProblem((Fresh(a, var("X")), Eq(var("X"), Fun("k"))), SIGNATURE))


@pytest.mark.parametrize("kwargs", [
    dict(atom_sorts={"N"}, data_sorts={"N"}),
    dict(atom_sorts={"N"}, data_sorts={"D"}, function_symbols={"f": Arity((BaseSort("E"),), "D")}),
    dict(atom_sorts={"N"}, data_sorts={"D"}, function_symbols={"f": Arity((), "N")}),
    dict(atom_sorts={"N"}, data_sorts={"D"}, function_symbols={"f": Arity((AbstractionSort("D", D),), "D")}),
    dict(atom_sorts={"N"}, data_sorts={"D"}, variable_sorts={"X": "E"}),
    dict(atom_sorts={"N"}, data_sorts={"D"}, atoms={"a": Atom("a", "D")}),
    dict(atom_sorts={"N"}, data_sorts={"D"}, atoms={"a": Atom("a", "N")}, variable_sorts={"a": "D"}),
])
def test_invalid_signatures(kwargs):
    with pytest.raises(SignatureError):
        Signature(**kwargs)


def test_signature_lookups():
    assert SIGNATURE.atom("a") == a
    assert SIGNATURE.arity("f") == Arity((D, D), "D")
    assert SIGNATURE.variable_sort("V") == "N"
    assert SIGNATURE.atoms_of_sort("N") == list(ATOMS)
    for lookup in (SIGNATURE.atom, SIGNATURE.arity, SIGNATURE.variable_sort):
        with pytest.raises(UnknownSymbolError):
            lookup("missing")
    extended = SIGNATURE.with_atom(Atom("e", "N")).with_variables({"Q": "D"})
    assert extended.atom("e") == Atom("e", "N")
    assert extended.variable_sort("Q") == "D"
    assert "e" not in SIGNATURE.atoms


def test_occurrence_orders():
    t = Fun("f", (Abs(c, Susp(swap(b, a), "Y")), Fun("g", (AtomTerm(d),))))
    assert atoms_of(t) == [c, b, a, d]
    assert vars_of(Fun("f", (var("Y"), Fun("f", (var("X"), var("Y")))))) == ["Y", "X"]
    p = NominalProblem((Fresh(d, var("W")), Eq(t, var("X"))), SIGNATURE)
    assert problem_atoms(p) == [d, c, b, a]
    assert problem_vars(p) == ["W", "Y", "X"]


def test_sizes():
    assert term_size(AtomTerm(a)) == 1
    assert term_size(Susp(Permutation.of((a, b), (b, c)), "X")) == 3
    assert term_size(Fun("h", (Abs(a, Fun("k")),))) == 3
    p = NominalProblem((Eq(Abs(a, var("X")), Abs(b, Susp(swap(a, b), "X"))), Fresh(a, var("X"))), SIGNATURE)
    assert problem_size(p) == 2 + 3 + 1 + 1


def test_rendering():
    t = Fun("f", (Abs(a, Susp(swap(a, b), "X")), Fun("k")))
    assert str(t) == "f(a.(a b).X, k)"
    assert str(Eq(var("X"), Fun("k"))) == "X ~ k"
    assert str(Fresh(a, var("X"))) == "a # X"
