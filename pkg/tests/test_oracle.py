from nomuni.models.nominal import (
    EMPTY_ENV, IDENTITY, Abs, Atom, AtomTerm, FreshnessEnv, Fun, NominalSubst, Permutation, Susp, perm_apply, var,
)
from nomuni.oracle import (
    alpha_eq_check, check_more_general, check_solution, find_equivalence_witness, find_more_general_witness,
    fresh_check, solution_atoms, solution_vars, sort_preserving_permutations,
)

import generators
from conftest import load_problem
from generators import ATOMS

a, b, c, d = ATOMS


def swap(x, y):
    return Permutation.of((x, y))


def test_fresh_check_rules():
    assert fresh_check(EMPTY_ENV, a, Abs(a, AtomTerm(a)))
    assert not fresh_check(EMPTY_ENV, a, AtomTerm(a))
    assert fresh_check(EMPTY_ENV, a, AtomTerm(b))
    assert fresh_check(FreshnessEnv.of((a, "X")), b, Susp(swap(a, b), "X"))
    assert not fresh_check(FreshnessEnv.of((a, "X")), a, Susp(swap(a, b), "X"))
    assert fresh_check(EMPTY_ENV, c, Fun("f", (Abs(c, AtomTerm(c)), Fun("g", (AtomTerm(d),)))))
    assert not fresh_check(EMPTY_ENV, c, Fun("f", (Abs(d, AtomTerm(c)), Fun("k"))))


def test_alpha_eq_rules():
    assert alpha_eq_check(FreshnessEnv.of((b, "X")), Abs(a, var("X")), Abs(b, Susp(swap(a, b), "X")))
    assert not alpha_eq_check(EMPTY_ENV, Abs(a, var("X")), Abs(b, Susp(swap(a, b), "X")))
    assert not alpha_eq_check(EMPTY_ENV, Abs(a, AtomTerm(b)), Abs(b, AtomTerm(b)))
    assert alpha_eq_check(EMPTY_ENV, Abs(a, AtomTerm(a)), Abs(b, AtomTerm(b)))
    assert alpha_eq_check(FreshnessEnv.of((a, "X"), (b, "X")), Susp(swap(a, b), "X"), var("X"))
    assert not alpha_eq_check(FreshnessEnv.of((a, "X")), Susp(swap(a, b), "X"), var("X"))
    assert not alpha_eq_check(EMPTY_ENV, var("X"), var("Y"))
    assert not alpha_eq_check(EMPTY_ENV, Fun("k"), AtomTerm(a))


def test_alpha_eq_reflexive_and_symmetric(rng):
    for _ in range(300):
        nabla = generators.random_env(rng)
        t = generators.random_term(rng)
        assert alpha_eq_check(nabla, t, t)
        u = perm_or_same(rng, t)
        assert alpha_eq_check(nabla, t, u) == alpha_eq_check(nabla, u, t)


def perm_or_same(rng, t):
    if rng.random() < 0.5:
        return perm_apply(generators.random_perm(rng), t)
    return generators.random_term(rng)


def test_check_solution_on_examples():
    swap_problem = load_problem("swap")
    atom = swap_problem.signature.atom
    assert check_solution(swap_problem, EMPTY_ENV, NominalSubst({"X2": AtomTerm(atom("b")), "X3": AtomTerm(atom("a"))}))
    assert not check_solution(swap_problem, EMPTY_ENV,
                              NominalSubst({"X2": AtomTerm(atom("a")), "X3": AtomTerm(atom("a"))}))

    fresh_env = load_problem("fresh_env")
    atom = fresh_env.signature.atom
    nabla = FreshnessEnv.of((atom("b"), "X7"))
    sigma = NominalSubst({"X6": Susp(Permutation.of((atom("b"), atom("a"))), "X7"), "X7": var("X7")})
    assert check_solution(fresh_env, nabla, sigma)
    assert not check_solution(fresh_env, EMPTY_ENV, sigma)


def test_check_solution_with_freshness_equations():
    p = load_problem("freshness")
    atom = p.signature.atom
    sigma = NominalSubst({"X": var("X")})
    assert check_solution(p, FreshnessEnv.of((atom("a"), "X"), (atom("b"), "X")), sigma)
    assert not check_solution(p, FreshnessEnv.of((atom("b"), "X")), sigma)


def test_check_more_general():
    sol1 = (FreshnessEnv.of((a, "Y")), NominalSubst({"X": Susp(swap(a, b), "Y")}))
    sol2 = (FreshnessEnv.of((b, "X")), NominalSubst({"Y": Susp(swap(a, b), "X")}))
    assert check_more_general(sol1, sol2, NominalSubst({"Y": Susp(swap(a, b), "X")}))
    assert check_more_general(sol1, sol1, NominalSubst())
    assert not check_more_general((EMPTY_ENV, NominalSubst({"X": var("X")})),
                                  (EMPTY_ENV, NominalSubst({"X": AtomTerm(a)})),
                                  NominalSubst({"X": AtomTerm(b)}))


def test_find_witness_between_most_general_solutions():
    sol1 = (FreshnessEnv.of((a, "Y")), NominalSubst({"X": Susp(swap(a, b), "Y")}))
    sol2 = (FreshnessEnv.of((b, "X")), NominalSubst({"Y": Susp(swap(a, b), "X")}))
    witness = find_equivalence_witness(sol1, sol2)
    assert witness is not None
    assert witness.bindings == {"Y": Susp(swap(a, b), "X")}
    assert check_more_general(sol1, sol2, witness)
    assert find_more_general_witness(sol2, sol1) is not None


def test_find_witness_identical_solutions():
    sol = (FreshnessEnv.of((c, "Z")), NominalSubst({"X": var("Z")}))
    witness = find_equivalence_witness(sol, sol)
    assert witness is not None
    assert witness.image("Z") == var("Z")


def test_find_witness_absent():
    assert find_equivalence_witness((EMPTY_ENV, NominalSubst({"X": AtomTerm(a)})),
                                    (EMPTY_ENV, NominalSubst({"X": Fun("g", (AtomTerm(a),))}))) is None
    # more general in one direction only
    general = (EMPTY_ENV, NominalSubst({"X": var("X")}))
    special = (FreshnessEnv.of((a, "X")), NominalSubst({"X": var("X")}))
    assert find_more_general_witness(general, special) is not None
    assert find_equivalence_witness(general, special) is None


def test_solution_names():
    sol = (FreshnessEnv.of((d, "W")), NominalSubst({"X": Fun("f", (Susp(swap(b, a), "Y"), var("W")))}))
    assert solution_vars(sol) == ["X", "Y", "W"]
    assert solution_atoms(sol) == [b, a, d]


def test_sort_preserving_permutations():
    m = Atom("m", "M")
    perms = list(sort_preserving_permutations([a, b, m]))
    assert perms[0] == IDENTITY
    assert len(perms) == 2
    assert all(pi(m) == m for pi in perms)
    assert len(list(sort_preserving_permutations([a, b, c]))) == 6
