import pytest

from nomuni.error import LambdaTypeError, PreconditionError
from nomuni.lambda_core import (
    alpha_equal, apply_subst, beta_apply, beta_substitute, bound_names, eta_contract, eta_long_normalize,
    free_bound_names, free_vars, is_pattern, name_perm_apply, name_perm_mapping, pattern_args, pi_n,
    rename_names, substitute_bound, swap_names, term_size, type_of,
)
from nomuni.models.lam import (
    App, Arrow, Base, BoundVar, Const, FreeVar, Lam, arrows, format_term, mk_app, mk_lams, spine, split_type,
    strip_lams,
)

N = Base("N")
D = Base("D")

x, y, z = BoundVar("x", N), BoundVar("y", N), BoundVar("z", N)
Y = FreeVar("Y", arrows([N, N], D))
f = Const("f", Arrow(Arrow(N, D), D))
g = Const("g", Arrow(N, D))
pair = Const("pair", arrows([N, N], D))


def lam(names, body, ty=N):
    return mk_lams([(n, ty) for n in names], body)


def assert_alpha_equal(t, u):
    assert alpha_equal(t, u), f"{format_term(t)} is not α-equal to {format_term(u)}"


def test_types():
    assert arrows([N, N], D) == Arrow(N, Arrow(N, D))
    assert split_type(arrows([N, D], D)) == ([N, D], D)
    assert type_of(lam("xy", mk_app(Y, [x, y]))) == arrows([N, N], D)
    assert type_of(mk_app(f, [lam("x", mk_app(g, [x]))])) == D
    with pytest.raises(LambdaTypeError):
        type_of(mk_app(g, [lam("x", mk_app(g, [x]))]))
    with pytest.raises(LambdaTypeError):
        type_of(mk_app(g, [x, y]))


def test_spine_and_binders():
    t = lam("xy", mk_app(mk_app(pair, [x]), [y]))
    binders, body = strip_lams(t)
    assert binders == [("x", N), ("y", N)]
    assert spine(body) == (pair, (x, y))
    assert mk_app(pair, []) is pair


def test_format():
    t = lam("xy", mk_app(f, [lam("x", mk_app(Y, [x, y]))]))
    assert format_term(t) == "\\x y. f (\\x. Y x y)"


def test_names():
    t = lam("x", mk_app(pair, [x, y]))
    assert free_bound_names(t) == {"y"}
    assert bound_names(t) == {"x", "y"}
    assert list(free_vars(mk_app(pair, [x, y]))) == []
    assert list(free_vars(mk_app(f, [lam("z", mk_app(Y, [z, x]))]))) == ["Y"]
    assert term_size(t) == 4


def test_swap_names_exchanges_binders_too():
    t = lam("x", mk_app(pair, [x, y]))
    assert swap_names("x", "y", t) == lam("y", mk_app(pair, [y, x]))
    assert swap_names("x", "x", t) is t
    assert rename_names({"x": "z"}, t) == lam("z", mk_app(pair, [z, y]))


def test_pi_n():
    perm = pi_n(["x", "y"], ["y", "x"])
    assert name_perm_mapping(perm) == {"x": "y", "y": "x"}
    perm = pi_n(["x", "y", "z"], ["y", "z", "x"])
    assert [name_perm_apply(perm, n) for n in ("x", "y", "z")] == ["y", "z", "x"]
    with pytest.raises(PreconditionError):
        pi_n(["x"], [])


def test_beta_by_name_permutation():
    abstraction = lam("xy", mk_app(f, [lam("x", mk_app(Y, [x, y]))]))
    result = beta_apply(abstraction, [y, x])
    assert result == mk_app(f, [lam("y", mk_app(Y, [y, x]))])
    assert_alpha_equal(result, beta_substitute(abstraction, [y, x]))


def test_beta_without_new_names():
    a, b = BoundVar("a", N), BoundVar("b", N)
    abstraction = mk_lams([("a", N), ("b", N), ("b", N)], a)
    result = beta_apply(abstraction, [b, a])
    assert result == Lam("a", N, b)
    assert bound_names(result) <= {"a", "b"}
    assert_alpha_equal(result, beta_substitute(abstraction, [b, a]))


def test_beta_falls_back_to_substitution():
    abstraction = lam("xy", mk_app(pair, [x, y]))
    assert beta_apply(abstraction, [z, z]) == mk_app(pair, [z, z])
    with pytest.raises(LambdaTypeError):
        beta_apply(lam("x", x), [x, y])
    with pytest.raises(LambdaTypeError):
        beta_apply(lam("x", x), [lam("y", mk_app(g, [y]))])


def test_substitution_avoids_capture():
    t = lam("y", mk_app(pair, [x, y]))
    result = substitute_bound(t, {"x": y})
    binder, ty, body = result.binder, result.binder_type, result.body
    assert binder != "y"
    assert body == mk_app(pair, [y, BoundVar(binder, ty)])


def test_substitution_reduces_created_redexes():
    h = BoundVar("h", Arrow(N, D))
    t = mk_app(h, [x])
    assert substitute_bound(t, {"h": lam("z", mk_app(pair, [z, z]))}) == mk_app(pair, [x, x])


def test_apply_subst():
    t = lam("xy", mk_app(pair, [x, y]))
    X = FreeVar("X", arrows([N, N], D))
    assert apply_subst({"X": lam("xy", mk_app(Y, [y, x]))}, lam("yx", mk_app(X, [y, x]))) == lam("yx", mk_app(Y, [x, y]))
    assert apply_subst({}, t) is t
    assert apply_subst({"X": t}, lam("xy", mk_app(X, [x, y]))) == lam("xy", mk_app(pair, [x, y]))


def test_alpha_equal():
    assert_alpha_equal(lam("x", mk_app(g, [x])), lam("y", mk_app(g, [y])))
    assert not alpha_equal(lam("xy", mk_app(pair, [x, y])), lam("yx", mk_app(pair, [x, y])))
    assert not alpha_equal(lam("x", mk_app(g, [y])), lam("y", mk_app(g, [y])))
    assert not alpha_equal(lam("x", mk_app(g, [x])), Lam("x", D, mk_app(g, [x])))


def test_eta_contract_and_patterns():
    h = BoundVar("h", Arrow(N, D))
    assert eta_contract(lam("x", mk_app(h, [x]))) == h
    assert eta_contract(lam("x", mk_app(g, [x]))) == lam("x", mk_app(g, [x]))
    assert pattern_args([x, lam("z", mk_app(h, [z]))]) == [x, h]
    assert pattern_args([x, x]) is None
    assert pattern_args([mk_app(g, [x])]) is None
    assert is_pattern(lam("xy", mk_app(f, [lam("z", mk_app(Y, [z, x]))])))
    assert not is_pattern(lam("x", mk_app(Y, [x, x])))
    assert not is_pattern(App(lam("x", mk_app(g, [x])), (y,)))


def test_eta_long_normal_form():
    h = BoundVar("h", Arrow(N, D))
    t = lam("x", mk_app(f, [h]))
    assert eta_long_normalize(t) == lam("x", mk_app(f, [lam("x", mk_app(h, [x]))]))
    fresh = eta_long_normalize(mk_app(f, [h]), pool={})
    assert fresh == mk_app(f, [Lam("z1", N, mk_app(h, [BoundVar("z1", N)]))])
    assert eta_long_normalize(App(lam("x", mk_app(g, [x])), (y,))) == mk_app(g, [y])
    with pytest.raises(LambdaTypeError):
        eta_long_normalize(mk_app(g, [mk_app(g, [x])]))
