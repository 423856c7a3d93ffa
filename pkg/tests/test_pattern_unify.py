import pytest

from nomuni.error import NotAPatternError, PreconditionError
from nomuni.lambda_core import alpha_equal, bound_names, eta_long_normalize, free_vars
from nomuni.models.lam import Arrow, Base, BoundVar, Const, FreeVar, arrows, format_term, mk_app, mk_lams
from nomuni.models.nominal import AbstractionSort, Arity, Atom, BaseSort, Signature
from nomuni.pattern import (
    CLASH, OCCURS_CHECK, Failure, Unifier, UnifyState, initial_state, is_unifier, match_pattern_subst, step, unify,
)
from nomuni.syntax import parse_lambda_term
from nomuni.translate import AtomList, PatternProblem, PatternSubst, translate_problem

import generators
from conftest import load_problem

N, D = Base("N"), Base("D")
SIGNATURE = Signature(
    atom_sorts={"N"},
    data_sorts={"D"},
    function_symbols={
        "f": Arity((AbstractionSort("N", BaseSort("D")),), "D"),
        "g": Arity((BaseSort("N"),), "D"),
        "p": Arity((BaseSort("D"), BaseSort("D")), "D"),
        "k": Arity((), "D"),
    },
    variable_sorts={name: "D" for name in ("X", "Y", "Y1", "Z1")},
    atoms={name: Atom(name, "N") for name in ("a", "b", "x", "y")},
)


def term(text):
    return parse_lambda_term(text, SIGNATURE)


def problem(*pairs):
    return PatternProblem(tuple((term(l), term(r)) for l, r in pairs))


def unary(name):
    return FreeVar(name, Arrow(N, D))


def test_binder_alignment_never_invents_names():
    p = problem(("\\x y y. X x y", "\\y y x. Y x y"))
    result = unify(p, trace=True)
    assert isinstance(result, Unifier)
    assert [entry.rule for entry in result.trace] == [
        "alpha-swap", "alpha-swap", "alpha-prune", "alpha-strip", "alpha-prune", "alpha-swap", "alpha-strip",
        "flex-flex",
    ]
    assert result.subst.domain == ["X", "Y"]
    z3 = unary("Z3")
    assert alpha_equal(result.subst["X"], mk_lams([("x", N), ("y", N)], mk_app(z3, [BoundVar("y", N)])))
    assert alpha_equal(result.subst["Y"], mk_lams([("x", N), ("y", N)], mk_app(z3, [BoundVar("x", N)])))
    assert is_unifier(p, result.subst)
    for t in result.subst.bindings.values():
        assert bound_names(t) <= {"x", "y"}


def test_trace_is_off_by_default():
    result = unify(problem(("\\x. X x", "\\x. X x")))
    assert isinstance(result, Unifier)
    assert result.trace == ()
    assert len(result.subst) == 0


def test_flex_rigid_step():
    p = problem(("\\x. X x", "\\x. f (\\x. g x)"))
    state = step(initial_state(p, fresh_prefix="X"))
    assert isinstance(state, UnifyState)
    x = BoundVar("x", N)
    x1 = unary("X1")
    f = Const("f", Arrow(Arrow(N, D), D))
    assert len(state.pending) == 1
    assert state.pending[0].lhs == mk_lams([("x", N), ("x", N)], mk_app(x1, [x]))
    assert state.pending[0].rhs == mk_lams([("x", N), ("x", N)], mk_app(Const("g", Arrow(N, D)), [x]))
    assert state.pending[0].path == (0,)
    assert state.accumulated["X"] == mk_lams([("x", N)], mk_app(f, [mk_lams([("x", N)], mk_app(x1, [x]))]))


def test_flex_rigid_solves_to_imitation():
    p = problem(("\\x. X x", "\\x. f (\\x. g x)"))
    result = unify(p)
    assert isinstance(result, Unifier)
    assert result.subst.domain == ["X"]
    assert alpha_equal(result.subst["X"], term("\\x. f (\\x. g x)"))


def test_rigid_clash_reports_equation_and_path():
    p = problem(("k", "k"), ("\\x. p (g x) k", "\\x. p (g x) (g x)"))
    result = unify(p)
    assert isinstance(result, Failure)
    assert result.reason == CLASH
    assert result.equation == 1
    assert result.path == (1,)
    assert str(result).startswith("clash in equation 2 at 1")


def test_head_clash():
    result = unify(problem(("\\x. g x", "\\y. g x")))
    assert isinstance(result, Failure)
    assert result.reason == CLASH


def test_occurs_check():
    result = unify(problem(("\\x. X x", "\\x. p (X x) k")))
    assert isinstance(result, Failure)
    assert result.reason == OCCURS_CHECK


def test_non_patterns_are_rejected():
    with pytest.raises(NotAPatternError):
        unify(problem(("\\x. X x x", "\\x. g x")))


def test_names_both_free_and_bound_are_rejected():
    x = FreeVar("x", D)
    p = PatternProblem(((mk_lams([("x", N)], x), mk_lams([("x", N)], x)),))
    with pytest.raises(PreconditionError):
        unify(p)


def test_step_limit():
    with pytest.raises(PreconditionError):
        unify(problem(("\\x. X x", "\\x. f (\\x. g x)")), max_steps=1)


def test_seed_and_prefix_choose_fresh_names():
    p = problem(("\\x y. X x", "\\x y. X y"))
    result = unify(p, seed=7, fresh_prefix="W")
    assert isinstance(result, Unifier)
    assert set(free_vars(result.subst["X"])) == {"W7"}


def test_corpus_through_translation():
    swap = load_problem("swap")
    solved = unify(translate_problem(swap, AtomList.of_problem(swap)))
    assert isinstance(solved, Unifier)
    assert solved.subst.domain == ["X2", "X3"]

    clash = load_problem("clash")
    failed = unify(translate_problem(clash, AtomList.of_problem(clash)))
    assert isinstance(failed, Failure)
    assert failed.reason == CLASH


def test_solvable_problems_get_unifiers(rng):
    atoms = AtomList(generators.ATOMS, generators.SIGNATURE)
    for _ in range(200):
        p, _ = generators.random_solvable_problem(rng)
        translated = translate_problem(p, atoms)
        result = unify(translated)
        assert isinstance(result, Unifier), str(result)
        assert is_unifier(translated, result.subst)


def _run(p):
    states = [initial_state(p, trace=True)]
    while isinstance(after := step(states[-1]), UnifyState):
        states.append(after)
    return states, after


def _assert_measure_decreases(p):
    states, outcome = _run(p)
    assert isinstance(outcome, Unifier), str(outcome)
    solution = states[-1].accumulated
    for before, after in zip(states, states[1:]):
        assert after.measure(solution) < before.measure(solution), after.trace[-1]


def test_measure_decreases_on_every_rule(rng):
    atoms = AtomList(generators.ATOMS, generators.SIGNATURE)
    rules = set()
    for _ in range(100):
        p, _ = generators.random_solvable_problem(rng)
        translated = translate_problem(p, atoms)
        _assert_measure_decreases(translated)
        rules |= {entry.rule for entry in unify(translated, trace=True).trace}
    for p in (
        problem(("\\x y y. X x y", "\\y y x. Y x y")),
        problem(("\\x. X x", "\\x. f (\\x. g x)")),
        problem(("\\a b a b. X b a", "\\a b b b. X b a")),
        _higher_order_problem(),
    ):
        _assert_measure_decreases(p)
        rules |= {entry.rule for entry in unify(p, trace=True).trace}
    assert rules >= {"alpha-swap", "alpha-strip", "alpha-prune", "rigid-rigid", "flex-rigid", "flex-flex"}


FN = Arrow(N, D)


def _higher_order_problem():
    a = BoundVar("a", N)
    f = BoundVar("F", FN)
    binders = [("F", FN), ("a", N)]
    x = FreeVar("X", arrows([FN, N], D))
    lhs = mk_lams(binders, mk_app(x, [mk_lams([("b", N)], mk_app(f, [BoundVar("b", N)])), a]))
    rhs = mk_lams(binders, mk_app(Const("p", arrows([D, D], D)), [mk_app(f, [a]), Const("k", D)]))
    return PatternProblem(((lhs, rhs),))


def test_imitation_keeps_function_arguments_eta_long():
    p = _higher_order_problem()
    state = step(initial_state(p))
    assert isinstance(state, UnifyState)
    assert state.pending
    for eq in state.pending:
        for side in (eq.lhs, eq.rhs):
            assert alpha_equal(eta_long_normalize(side), side), format_term(side)
    for binding in state.accumulated.bindings.values():
        assert alpha_equal(eta_long_normalize(binding), binding), format_term(binding)

    result = unify(p)
    assert isinstance(result, Unifier)
    assert is_unifier(p, result.subst)
    assert alpha_equal(result.subst["X"], p.equations[0][1])


def test_flex_flex_keeps_function_arguments_eta_long():
    a = BoundVar("a", N)
    f = BoundVar("F", FN)
    binders = [("F", FN), ("a", N)]
    eta_f = mk_lams([("b", N)], mk_app(f, [BoundVar("b", N)]))
    x = FreeVar("X", arrows([FN, N], D))
    y = FreeVar("Y", arrows([N, FN], D))
    p = PatternProblem(((mk_lams(binders, mk_app(x, [eta_f, a])), mk_lams(binders, mk_app(y, [a, eta_f]))),))
    result = unify(p)
    assert isinstance(result, Unifier)
    assert is_unifier(p, result.subst)
    for binding in result.subst.bindings.values():
        assert alpha_equal(eta_long_normalize(binding), binding), format_term(binding)


def test_more_general_by_matching():
    p = problem(("\\a b a b. X b a", "\\a b b b. X b a"))
    result = unify(p)
    assert isinstance(result, Unifier)
    assert alpha_equal(result.subst["X"], term("\\b a. Z1 b"))

    sigma1 = PatternSubst({"X": term("\\a b. Y1 a")})
    assert is_unifier(p, sigma1)
    assert match_pattern_subst(result.subst, sigma1) is not None
    assert match_pattern_subst(sigma1, result.subst) is not None

    sigma2 = PatternSubst({"X": term("\\a b. Y1 a"), "Y": term("\\a b. Y1 b")})
    assert is_unifier(p, sigma2)
    assert match_pattern_subst(result.subst, sigma2) is not None
    assert match_pattern_subst(sigma2, result.subst) is None


def test_match_finds_renaming_witness():
    s1 = PatternSubst({"X": term("\\a b. Y1 a")})
    s2 = PatternSubst({"X": term("\\a b. g a")})
    witness = match_pattern_subst(s1, s2)
    assert witness is not None
    assert alpha_equal(witness["Y1"], term("\\a. g a"))
    assert match_pattern_subst(s2, s1) is None
