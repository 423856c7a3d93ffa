"""
Higher-order pattern unification by a transformation system that never invents bound-variable
names.

Equations are unoriented. The α-transformation rules first make the outer binder lists of both
sides equal: rename a binder by swapping names, drop a binder that neither side uses, or prune
an argument position of a free variable when only one side can use a binder. The rigid-rigid,
flex-rigid and flex-flex rules then work on the bodies under that common prefix.
"""
import logging
import typing
from dataclasses import dataclass, field, replace
from functools import cached_property

from nomuni.error import LambdaTypeError, NotAPatternError, PreconditionError
from nomuni.lambda_core import (
    alpha_equal, apply_subst, beta_apply, bound_name_types, bound_names, eta_long_normalize, free_bound_names,
    free_vars, is_pattern, pattern_args, rename_names, swap_names, type_of,
)
from nomuni.log import getLogger
from nomuni.models.lam import (
    App, Base, Binder, BoundVar, Const, FreeVar, Lam, LambdaTerm, LambdaType, arrows, format_term, mk_app,
    mk_lams, spine, split_type, strip_lams, unknowns_of,
)
from nomuni.translate import PatternProblem, PatternSubst
from nomuni.utils import deep_recursion, fresh_name

logger = getLogger(__name__)

CLASH = "clash"
OCCURS_CHECK = "occurs-check"
TYPE_MISMATCH = "type-mismatch"


def _body_size(t: LambdaTerm) -> int:
    """ size of `t` without its λ-binders """
    size, todo = 0, [t]
    while todo:
        u = todo.pop()
        match u:
            case Lam(_, _, body):
                todo.append(body)
            case App(head, args):
                todo.append(head)
                todo.extend(args)
            case _:
                size += 1
    return size


def _identity_size(ty: LambdaType) -> int:
    """ body size of the η-expanded identity on a variable of type `ty` """
    params, _ = split_type(ty)
    return 1 + sum(_identity_size(p) for p in params)


@dataclass(frozen=True)
class Equation:
    lhs: LambdaTerm
    rhs: LambdaTerm
    origin: int = 0
    path: typing.Tuple[int, ...] = ()

    @cached_property
    def free(self) -> typing.Dict[str, LambdaType]:
        return {**free_vars(self.lhs), **free_vars(self.rhs)}

    @cached_property
    def bound_types(self) -> typing.Dict[str, LambdaType]:
        return {**bound_name_types(self.lhs), **bound_name_types(self.rhs)}

    def body_size(self) -> int:
        return _body_size(self.lhs) + _body_size(self.rhs)

    def binders(self) -> typing.Tuple[int, int]:
        """ (binders of both sides, binders from the first position where the sides differ) """
        left, _ = strip_lams(self.lhs)
        right, _ = strip_lams(self.rhs)
        common = next((i for i, (l, r) in enumerate(zip(left, right)) if l != r), min(len(left), len(right)))
        return len(left) + len(right), max(len(left), len(right)) - common

    def __str__(self):
        return f"{format_term(self.lhs)} =? {format_term(self.rhs)}"


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    equation: str
    bindings: typing.Mapping[str, str] = field(default_factory=dict)

    def __str__(self):
        text = f"{self.rule}: {self.equation}"
        if self.bindings:
            text += "  [" + ", ".join(f"{x} -> {t}" for x, t in self.bindings.items()) + "]"
        return text


@dataclass(frozen=True)
class Unifier:
    subst: PatternSubst
    trace: typing.Tuple[TraceEntry, ...] = ()


@dataclass(frozen=True)
class Failure:
    reason: str
    equation: int
    path: typing.Tuple[int, ...]
    message: str
    trace: typing.Tuple[TraceEntry, ...] = ()

    def __str__(self):
        where = f"equation {self.equation + 1}"
        if self.path:
            where += " at " + ".".join(str(i) for i in self.path)
        return f"{self.reason} in {where}: {self.message}"


UnifyOutcome = typing.Union[Unifier, Failure]


@dataclass(frozen=True)
class UnifyState:
    pending: typing.Tuple[Equation, ...]
    accumulated: PatternSubst
    fresh_counter: int
    taken: typing.FrozenSet[str]
    problem_vars: typing.Tuple[str, ...]
    fresh_prefix: str = "Z"
    trace: typing.Optional[typing.Tuple[TraceEntry, ...]] = None
    steps: int = 0

    def measure(self, solution: PatternSubst) -> typing.Tuple[int, int, int, int]:
        """
        Termination measure for a run that ends with the accumulated substitution `solution`:
        (size of `solution` on the free variables of the pending equations, size of the pending
        equations, misaligned binders, binders). Sizes leave out λ-binders; variables `solution`
        does not bind count as their η-expanded identity. Every step decreases it lexicographically.
        """
        free = {}
        for eq in self.pending:
            free.update(eq.free)
        remaining = sum(_body_size(solution[x]) if x in solution else _identity_size(ty) for x, ty in free.items())
        binders = [eq.binders() for eq in self.pending]
        return (
            remaining,
            sum(eq.body_size() for eq in self.pending),
            sum(misaligned for _, misaligned in binders),
            sum(count for count, _ in binders),
        )


class _Rewrite(typing.NamedTuple):
    rule: str
    replacement: typing.Tuple[Equation, ...]
    bindings: typing.Dict[str, LambdaTerm]


# region analysis of outer binders

class _Side:
    def __init__(self, t: LambdaTerm):
        self.binders, self.body = strip_lams(t)
        self.last = {name: i for i, (name, _) in enumerate(self.binders)}
        self.body_free = free_bound_names(self.body)

    def free_from(self, name: str, i: int) -> bool:
        """ name occurs free in λBᵢ….λBₖ.body """
        return name in self.body_free and self.last.get(name, -1) < i

    def binder_free(self, p: int) -> bool:
        """ the binder at position p is used by the rest of the term """
        name = self.binders[p][0]
        return self.last[name] == p and name in self.body_free

    def rest(self, i: int) -> LambdaTerm:
        return mk_lams(self.binders[i:], self.body)

    def rebuild(self, i: int, rest: LambdaTerm) -> LambdaTerm:
        return mk_lams(self.binders[:i], rest)

    def without(self, p: int) -> LambdaTerm:
        return mk_lams(self.binders[:p] + self.binders[p + 1:], self.body)


def _flex_occurrence(t: LambdaTerm, name: str) -> typing.Optional[typing.Tuple[FreeVar, typing.List[BoundVar]]]:
    """ first X(y⃗) in `t` with the free bound variable `name` among y⃗ """
    match t:
        case Lam(binder, _, body):
            return None if binder == name else _flex_occurrence(body, name)
        case BoundVar() | FreeVar() | Const():
            return None
    head, args = spine(t)
    if isinstance(head, FreeVar):
        ys = pattern_args(args)
        if ys is not None and any(y.name == name for y in ys):
            return head, ys
        return None
    for arg in args:
        found = _flex_occurrence(arg, name)
        if found is not None:
            return found
    return None

# endregion


class _Fresh:
    def __init__(self, state: UnifyState):
        self.counter = state.fresh_counter
        self.taken = set(state.taken)
        self.prefix = state.fresh_prefix

    def var(self, args: typing.Sequence[BoundVar], result) -> FreeVar:
        name, self.counter = fresh_name(self.prefix, self.taken, self.counter)
        self.taken.add(name)
        return FreeVar(name, arrows([a.type for a in args], result))


def _result_type(v: FreeVar):
    return split_type(v.type)[1]


def _binders_of(args: typing.Sequence[BoundVar]) -> typing.List[Binder]:
    return [(a.name, a.type) for a in args]


def _apply(head: FreeVar, args: typing.Sequence[BoundVar], eq: Equation) -> LambdaTerm:
    """ head(args) with function-typed arguments η-expanded over the binder names of `eq` """
    return mk_app(head, [a if isinstance(a.type, Base) else eta_long_normalize(a, eq.bound_types) for a in args])



def _alpha(eq: Equation, fresh: _Fresh) -> typing.Union[_Rewrite, Failure, None]:
    left, right = _Side(eq.lhs), _Side(eq.rhs)
    if len(left.binders) != len(right.binders):
        return Failure(TYPE_MISMATCH, eq.origin, eq.path, f"binder lists of different length in {eq}")
    n = len(left.binders)
    common = next((i for i in range(n) if left.binders[i] != right.binders[i]), n)
    if common < n and left.binders[common][1] != right.binders[common][1]:
        return Failure(TYPE_MISMATCH, eq.origin, eq.path, f"binder types differ in {eq}")

    # rename the right binder: λw⃗.λx.t ≈ λw⃗.λy.u to λw⃗.λx.t ≈ λw⃗.(x y)·(λy.u) when x ∉ FV(λy.u)
    if common < n:
        x, y = left.binders[common][0], right.binders[common][0]
        if not right.free_from(x, common):
            rhs = right.rebuild(common, swap_names(x, y, right.rest(common)))
            return _Rewrite("alpha-swap", (Equation(eq.lhs, rhs, eq.origin, eq.path),), {})

    # drop a shared binder neither side uses
    for p in range(common):
        if not left.binder_free(p) and not right.binder_free(p):
            return _Rewrite("alpha-strip", (Equation(left.without(p), right.without(p), eq.origin, eq.path),), {})

    # a shared binder only one side uses must be pruned from a flexible occurrence on that side
    for p in range(common):
        used_left, used_right = left.binder_free(p), right.binder_free(p)
        if used_left == used_right:
            continue
        name = left.binders[p][0]
        side = left if used_left else right
        found = _flex_occurrence(side.body, name)
        if found is None:
            return Failure(CLASH, eq.origin, eq.path, f"bound variable {name} occurs rigidly on one side only of {eq}")
        head, ys = found
        zs = [y for y in ys if y.name != name]
        z = fresh.var(zs, _result_type(head))
        binding = mk_lams(_binders_of(ys), _apply(z, zs, eq))
        return _Rewrite("alpha-prune", (eq,), {head.name: binding})

    if common < n:
        x, y = left.binders[common][0], right.binders[common][0]
        if not left.free_from(y, common):
            lhs = left.rebuild(common, swap_names(x, y, left.rest(common)))
            return _Rewrite("alpha-swap", (Equation(lhs, eq.rhs, eq.origin, eq.path),), {})
        return Failure(CLASH, eq.origin, eq.path, f"binders {x} and {y} cannot be aligned in {eq}")
    return None


def _same_head(h1: LambdaTerm, h2: LambdaTerm) -> bool:
    return type(h1) is type(h2) and h1.name == h2.name and h1.type == h2.type


def _heads(eq: Equation, fresh: _Fresh) -> typing.Union[_Rewrite, Failure]:
    binders, body_l = strip_lams(eq.lhs)
    _, body_r = strip_lams(eq.rhs)
    head_l, args_l = spine(body_l)
    head_r, args_r = spine(body_r)
    flex_l, flex_r = isinstance(head_l, FreeVar), isinstance(head_r, FreeVar)

    if not flex_l and not flex_r:
        if not _same_head(head_l, head_r) or len(args_l) != len(args_r):
            return Failure(CLASH, eq.origin, eq.path, f"{head_l} and {head_r} differ in {eq}")
        return _Rewrite("rigid-rigid", tuple(
            Equation(mk_lams(binders, l), mk_lams(binders, r), eq.origin, eq.path + (i,))
            for i, (l, r) in enumerate(zip(args_l, args_r))
        ), {})

    if flex_l and flex_r:
        xs, ys = pattern_args(args_l), pattern_args(args_r)
        if head_l.name == head_r.name:
            if [x.name for x in xs] == [y.name for y in ys]:
                return _Rewrite("flex-flex", (), {})
            zs = [x for x, y in zip(xs, ys) if x.name == y.name]
            z = fresh.var(zs, _result_type(head_l))
            return _Rewrite("flex-flex", (), {head_l.name: mk_lams(_binders_of(xs), _apply(z, zs, eq))})
        y_names = {y.name for y in ys}
        zs = [x for x in xs if x.name in y_names]
        z = fresh.var(zs, _result_type(head_l))
        return _Rewrite("flex-flex", (), {
            head_l.name: mk_lams(_binders_of(xs), _apply(z, zs, eq)),
            head_r.name: mk_lams(_binders_of(ys), _apply(z, zs, eq)),
        })

    if flex_r:
        head_l, args_l, head_r, args_r = head_r, args_r, head_l, args_l
    xs = pattern_args(args_l)
    if isinstance(head_r, BoundVar) and head_r.name not in {x.name for x in xs}:
        return Failure(CLASH, eq.origin, eq.path, f"{head_l.name} cannot produce bound variable {head_r.name} in {eq}")
    if any(head_l.name in free_vars(u) for u in args_r):
        return Failure(OCCURS_CHECK, eq.origin, eq.path, f"{head_l.name} occurs in the rigid side of {eq}")
    imitated = []
    equations = []
    for i, u in enumerate(args_r):
        ys, u_body = strip_lams(u)
        y_names = {name for name, _ in ys}
        zs = [x for x in xs if x.name not in y_names] + [BoundVar(name, ty) for name, ty in ys]
        xi = fresh.var(zs, type_of(u_body))
        term = mk_lams(ys, _apply(xi, zs, eq))
        imitated.append(term)
        equations.append(Equation(mk_lams(binders, term), mk_lams(binders, u), eq.origin, eq.path + (i,)))
    binding = mk_lams(_binders_of(xs), mk_app(head_r, imitated))
    return _Rewrite("flex-rigid", tuple(equations), {head_l.name: binding})


def step(state: UnifyState) -> typing.Union[UnifyState, UnifyOutcome]:
    """ applies one rule to the leftmost pending equation """
    if not state.pending:
        return Unifier(state.accumulated.restrict(state.problem_vars), state.trace or ())
    eq, rest = state.pending[0], state.pending[1:]
    fresh = _Fresh(state)
    result = _alpha(eq, fresh)
    if result is None:
        result = _heads(eq, fresh)
    if isinstance(result, Failure):
        return replace(result, trace=state.trace or ())

    trace = state.trace
    if trace is not None:
        trace = trace + (TraceEntry(result.rule, str(eq), {x: format_term(t) for x, t in result.bindings.items()}),)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"{result.rule}: {eq}")

    pending = result.replacement + rest
    accumulated = state.accumulated
    if result.bindings:
        rho = result.bindings
        pending = tuple(
            Equation(apply_subst(rho, e.lhs), apply_subst(rho, e.rhs), e.origin, e.path)
            if any(y in e.free for y in rho) else e
            for e in pending
        )
        accumulated = PatternSubst({
            **{x: apply_subst(rho, t) if any(y in unknowns_of(t) for y in rho) else t
               for x, t in accumulated.items()},
            **rho,
        })
    return replace(state, pending=pending, accumulated=accumulated, fresh_counter=fresh.counter,
                   taken=frozenset(fresh.taken), trace=trace, steps=state.steps + 1)


def check_pattern_problem(p: PatternProblem):
    """ raises when `p` is not a well-typed pattern problem with disjoint free and bound names """
    free, bound = set(), set()
    for i, (lhs, rhs) in enumerate(p.equations):
        left, right = type_of(lhs), type_of(rhs)
        if left != right:
            raise LambdaTypeError(f"equation {i + 1} relates types {left} and {right}")
        for side in (lhs, rhs):
            if not is_pattern(side):
                raise NotAPatternError(f"equation {i + 1}: {format_term(side)} is not a pattern")
            free |= set(free_vars(side))
            bound |= bound_names(side)
    if clash := free & bound:
        raise PreconditionError(f"names used both free and bound: {', '.join(sorted(clash))}")


def initial_state(p: PatternProblem, trace: bool = False, seed: int = 0, fresh_prefix: str = "Z") -> UnifyState:
    check_pattern_problem(p)
    problem_vars = {}
    taken = set()
    for lhs, rhs in p.equations:
        for side in (lhs, rhs):
            problem_vars.update(dict.fromkeys(free_vars(side)))
            taken |= bound_names(side)
    taken |= set(problem_vars)
    if p.atom_list is not None:
        taken |= p.atom_list.signature.names
    return UnifyState(
        pending=tuple(Equation(l, r, i) for i, (l, r) in enumerate(p.equations)),
        accumulated=PatternSubst(),
        fresh_counter=max(1, int(seed)),
        taken=frozenset(taken),
        problem_vars=tuple(problem_vars),
        fresh_prefix=fresh_prefix,
        trace=() if trace else None,
    )


@deep_recursion
def unify(p: PatternProblem, trace: bool = False, seed: int = 0, fresh_prefix: str = "Z",
          max_steps: typing.Optional[int] = None) -> UnifyOutcome:
    """
    A most general unifier of `p`, restricted to the free variables of `p`, or the first failure
    found. The unifier uses no bound-variable names besides those of `p`.
    """
    state = initial_state(p, trace=trace, seed=seed, fresh_prefix=fresh_prefix)
    while True:
        if max_steps is not None and state.steps >= max_steps:
            raise PreconditionError(f"no unifier found within {max_steps} steps")
        result = step(state)
        if not isinstance(result, UnifyState):
            logger.debug(f"unify finished after {state.steps} steps: {type(result).__name__}")
            return result
        state = result


def is_unifier(p: PatternProblem, sigma: PatternSubst) -> bool:
    return all(alpha_equal(apply_subst(sigma.bindings, l), apply_subst(sigma.bindings, r)) for l, r in p.equations)


# region more-generality of pattern substitutions

def identity_binding(name: str, ty, pool=None) -> LambdaTerm:
    return eta_long_normalize(FreeVar(name, ty), pool)


def _image(sigma: PatternSubst, name: str, other: PatternSubst) -> LambdaTerm:
    if name in sigma:
        return sigma[name]
    t = other[name]
    binders, _ = strip_lams(t)
    return identity_binding(name, type_of(t), dict(binders))


def check_pattern_more_general(s1: PatternSubst, s2: PatternSubst, witness: PatternSubst) -> bool:
    """ witness ∘ s1 =α s2 on Dom(s1) ∪ Dom(s2) """
    for name in dict.fromkeys([*s1.domain, *s2.domain]):
        left = apply_subst(witness.bindings, _image(s1, name, s2))
        if not alpha_equal(left, _image(s2, name, s1)):
            return False
    return True


def _standardize(t: LambdaTerm, depth: int = 0) -> LambdaTerm:
    """ renames every binder after its depth, so α-equal terms become equal """
    match t:
        case Lam(binder, ty, body):
            name = f"%{depth}"
            return Lam(name, ty, _standardize(rename_names({binder: name, name: binder}, body) if binder != name
                                              else body, depth + 1))
    head, args = spine(t)
    return mk_app(head, [_standardize(a, depth) for a in args])


def _match(pattern: LambdaTerm, term: LambdaTerm, unknowns: typing.Set[str],
           bindings: typing.Dict[str, LambdaTerm]) -> bool:
    match pattern, term:
        case Lam(_, ty, body), Lam(_, ty2, body2):
            return ty == ty2 and _match(body, body2, unknowns, bindings)
        case Lam(), _:
            return False
    head, args = spine(pattern)
    if isinstance(head, FreeVar) and head.name in unknowns:
        xs = pattern_args(args)
        if xs is None or not free_bound_names(term) <= {x.name for x in xs}:
            return False
        if head.name in bindings:
            return alpha_equal(beta_apply(bindings[head.name], xs), term)
        bindings[head.name] = mk_lams(_binders_of(xs), term)
        return True
    if isinstance(term, Lam):
        return False
    head2, args2 = spine(term)
    if not _same_head(head, head2) or len(args) != len(args2):
        return False
    for a, b in zip(args, args2):
        if not _match(a, b, unknowns, bindings):
            return False
    return True


def match_pattern_subst(s1: PatternSubst, s2: PatternSubst) -> typing.Optional[PatternSubst]:
    """ a witness σ′ with σ′ ∘ s1 =α s2, found by pattern matching, or None """
    unknowns = set()
    for t in s1.bindings.values():
        unknowns |= set(free_vars(t))
    unknowns |= {x for x in s2.domain if x not in s1}
    bindings: typing.Dict[str, LambdaTerm] = {}
    for name in dict.fromkeys([*s1.domain, *s2.domain]):
        pattern = _standardize(_image(s1, name, s2))
        term = _standardize(_image(s2, name, s1))
        if not _match(pattern, term, unknowns, bindings):
            return None
    witness = PatternSubst(bindings)
    return witness if check_pattern_more_general(s1, s2, witness) else None

# endregion
