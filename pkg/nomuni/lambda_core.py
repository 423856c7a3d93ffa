"""
Operations on simply-typed λ-terms: typing, name swapping, β-reduction of pattern redexes by name
permutations, α-equality, pattern recognition and η-long normalization.
"""
import typing

from nomuni.error import LambdaTypeError, PreconditionError
from nomuni.models.lam import (
    App, Arrow, Binder, BoundVar, Const, FreeVar, Lam, LambdaTerm, LambdaType,
    free_names_of, mk_app, mk_lams, spine, split_type, strip_lams, unknowns_of,
)
from nomuni.utils import compose_swaps, fresh_name

NamePermutation = typing.Tuple[typing.Tuple[str, str], ...]


def type_of(t: LambdaTerm) -> LambdaType:
    match t:
        case BoundVar(_, ty) | FreeVar(_, ty) | Const(_, ty):
            return ty
        case Lam(_, ty, body):
            return Arrow(ty, type_of(body))
        case App(head, args):
            ty = type_of(head)
            for arg in args:
                if not isinstance(ty, Arrow):
                    raise LambdaTypeError(f"{head} of type {type_of(head)} applied to too many arguments in {t}")
                arg_ty = type_of(arg)
                if arg_ty != ty.source:
                    raise LambdaTypeError(f"argument {arg} has type {arg_ty}, expected {ty.source} in {t}")
                ty = ty.target
            return ty
    raise TypeError(f"not a λ-term: {t!r}")


# region names

def free_bound_names(t: LambdaTerm) -> typing.FrozenSet[str]:
    """ names of bound variables occurring free in `t` """
    return free_names_of(t)


def free_vars(t: LambdaTerm) -> typing.Dict[str, LambdaType]:
    """ free (unknown) variables of `t` with their types, in first-occurrence order """
    return dict(unknowns_of(t))


def bound_names(t: LambdaTerm) -> typing.Set[str]:
    """ every bound-variable name used in `t`, as binder or occurrence """
    match t:
        case BoundVar(name, _):
            return {name}
        case FreeVar() | Const():
            return set()
        case Lam(binder, _, body):
            return bound_names(body) | {binder}
        case App(head, args):
            names = bound_names(head)
            for arg in args:
                names |= bound_names(arg)
            return names
    raise TypeError(f"not a λ-term: {t!r}")


def bound_name_types(t: LambdaTerm) -> typing.Dict[str, LambdaType]:
    found = {}

    def walk(u):
        match u:
            case BoundVar(name, ty):
                found.setdefault(name, ty)
            case Lam(binder, ty, body):
                found.setdefault(binder, ty)
                walk(body)
            case App(head, args):
                walk(head)
                for arg in args:
                    walk(arg)

    walk(t)
    return found


def term_size(t: LambdaTerm) -> int:
    size, todo = 0, [t]
    while todo:
        u = todo.pop()
        match u:
            case Lam(_, _, body):
                size += 1
                todo.append(body)
            case App(head, args):
                todo.append(head)
                todo.extend(args)
            case _:
                size += 1
    return size

# endregion


# region swapping

def _swap(x: str, y: str, name: str) -> str:
    if name == x:
        return y
    if name == y:
        return x
    return name


def swap_names(x: str, y: str, t: LambdaTerm) -> LambdaTerm:
    """ (x y)·t, exchanging x and y everywhere, binders included """
    if x == y:
        return t
    match t:
        case BoundVar(name, ty):
            return BoundVar(_swap(x, y, name), ty)
        case FreeVar() | Const():
            return t
        case Lam(binder, ty, body):
            return Lam(_swap(x, y, binder), ty, swap_names(x, y, body))
        case App(head, args):
            return App(swap_names(x, y, head), tuple([swap_names(x, y, a) for a in args]))
    raise TypeError(f"not a λ-term: {t!r}")


def rename_names(mapping: typing.Mapping[str, str], t: LambdaTerm) -> LambdaTerm:
    """ applies a bijection on bound-variable names everywhere, binders included """
    match t:
        case BoundVar(name, ty):
            return BoundVar(mapping.get(name, name), ty)
        case FreeVar() | Const():
            return t
        case Lam(binder, ty, body):
            return Lam(mapping.get(binder, binder), ty, rename_names(mapping, body))
        case App(head, args):
            return App(rename_names(mapping, head), tuple([rename_names(mapping, a) for a in args]))
    raise TypeError(f"not a λ-term: {t!r}")


def pi_n(xs: typing.Sequence[str], ys: typing.Sequence[str]) -> NamePermutation:
    """
    Πₙ(x⃗, y⃗): Π₁(⟨x⟩,⟨y⟩) = (x y) and Πₙ(x⃗, y⃗) = Πₙ₋₁(⟨(x₁ y₁)·x₂,…,(x₁ y₁)·xₙ⟩, ⟨y₂,…,yₙ⟩)·(x₁ y₁).
    The result is a swap list whose leftmost swap is applied last.
    """
    if len(xs) != len(ys):
        raise PreconditionError(f"Πₙ needs lists of equal length, got {len(xs)} and {len(ys)}")
    # image and preimage of the swaps so far, so each x is renamed in constant time
    image, preimage = {}, {}
    swaps = []
    for x, y in zip(xs, ys):
        x = image.get(x, x)
        swaps.append((x, y))
        if x != y:
            wx, wy = preimage.get(x, x), preimage.get(y, y)
            image[wx], image[wy] = y, x
            preimage[y], preimage[x] = wx, wy
    return tuple(reversed(swaps))


def name_perm_apply(perm: NamePermutation, name: str) -> str:
    for x, y in reversed(perm):
        name = _swap(x, y, name)
    return name


def name_perm_mapping(perm: NamePermutation) -> typing.Dict[str, str]:
    images = compose_swaps(reversed(perm))
    return {n: images.get(n, n) for pair in perm for n in pair}


def apply_name_perm(perm: NamePermutation, t: LambdaTerm) -> LambdaTerm:
    mapping = {k: v for k, v in name_perm_mapping(perm).items() if k != v}
    return rename_names(mapping, t) if mapping else t

# endregion


# region β-reduction

def _check_redex(abstraction: LambdaTerm, args: typing.Sequence[LambdaTerm]):
    binders, _ = strip_lams(abstraction)
    if len(binders) < len(args):
        raise LambdaTypeError(f"{abstraction} takes {len(binders)} arguments, got {len(args)}")
    for (name, ty), arg in zip(binders, args):
        if type_of(arg) != ty:
            raise LambdaTypeError(f"argument {arg} for {name} has type {type_of(arg)}, expected {ty}")
    return binders


def is_pattern_redex(abstraction: LambdaTerm, args: typing.Sequence[LambdaTerm]) -> bool:
    if not all(isinstance(a, BoundVar) for a in args):
        return False
    names = {a.name for a in args}
    if len(names) != len(args):
        return False
    binders, body = strip_lams(abstraction)
    return not (names & free_bound_names(body)) - {name for name, _ in binders}


def beta_apply(abstraction: LambdaTerm, args: typing.Sequence[LambdaTerm]) -> LambdaTerm:
    """
    (λx⃗.t)(args). When the arguments are pairwise distinct bound variables y⃗ not free in λx⃗.t the
    result is Πₙ(x⃗, y⃗)·t, which introduces no new bound names. Otherwise capture-avoiding
    substitution is used.
    """
    if not args:
        return abstraction
    binders = _check_redex(abstraction, args)
    if is_pattern_redex(abstraction, args):
        n = len(args)
        body = abstraction
        for _ in range(n):
            body = body.body
        perm = pi_n([name for name, _ in binders[:n]], [a.name for a in args])
        return apply_name_perm(perm, body)
    return beta_substitute(abstraction, args)


def beta_substitute(abstraction: LambdaTerm, args: typing.Sequence[LambdaTerm]) -> LambdaTerm:
    """ (λx⃗.t)(args) by simultaneous capture-avoiding substitution, reducing created redexes """
    binders = _check_redex(abstraction, args)
    body = abstraction
    for _ in range(len(args)):
        body = body.body
    return substitute_bound(body, {name: arg for (name, _), arg in zip(binders, args)})


def _apply_args(f: LambdaTerm, args: typing.Sequence[LambdaTerm]) -> LambdaTerm:
    if not args:
        return f
    if isinstance(f, Lam):
        binders, _ = strip_lams(f)
        k = min(len(binders), len(args))
        return _apply_args(beta_substitute(f, args[:k]), args[k:])
    return mk_app(f, args)


def substitute_bound(t: LambdaTerm, mapping: typing.Mapping[str, LambdaTerm]) -> LambdaTerm:
    if not mapping:
        return t
    match t:
        case Lam(binder, ty, body):
            inner = {k: v for k, v in mapping.items() if k != binder}
            if not inner:
                return t
            incoming = set()
            for value in inner.values():
                incoming |= free_bound_names(value)
            if binder in incoming:
                taken = incoming | bound_names(body) | set(inner)
                renamed, _ = fresh_name(binder, taken)
                body = substitute_bound(body, {binder: BoundVar(renamed, ty)})
                binder = renamed
            return Lam(binder, ty, substitute_bound(body, inner))
        case BoundVar(name, _):
            return mapping.get(name, t)
        case FreeVar() | Const():
            return t
        case App():
            head, args = spine(t)
            args = [substitute_bound(a, mapping) for a in args]
            if isinstance(head, BoundVar) and head.name in mapping:
                return _apply_args(mapping[head.name], args)
            return mk_app(head, args)
    raise TypeError(f"not a λ-term: {t!r}")


def apply_subst(sigma: typing.Mapping[str, LambdaTerm], t: LambdaTerm) -> LambdaTerm:
    """ simultaneous instantiation of free variables, β-reducing the created redexes """
    if not sigma:
        return t
    match t:
        case Lam(binder, ty, body):
            return Lam(binder, ty, apply_subst(sigma, body))
        case FreeVar(name, _) if name in sigma:
            return sigma[name]
        case BoundVar() | FreeVar() | Const():
            return t
        case App():
            head, args = spine(t)
            args = [apply_subst(sigma, a) for a in args]
            if isinstance(head, FreeVar) and head.name in sigma:
                return beta_apply(sigma[head.name], args)
            return mk_app(head, args)
    raise TypeError(f"not a λ-term: {t!r}")

# endregion


# region α-equality

def canonical(t: LambdaTerm):
    """ a nameless rendering of `t`: bound occurrences become binder depths """
    env: typing.Dict[str, typing.List[int]] = {}

    def walk(u, depth):
        match u:
            case BoundVar(name, ty):
                if env.get(name):
                    return "bv", depth - env[name][-1], ty
                return "free", name, ty
            case FreeVar(name, ty):
                return "fv", name, ty
            case Const(name, ty):
                return "c", name, ty
            case Lam(binder, ty, body):
                env.setdefault(binder, []).append(depth)
                try:
                    return "lam", ty, walk(body, depth + 1)
                finally:
                    env[binder].pop()
            case App(head, args):
                if not args:
                    return walk(head, depth)
                head, args = spine(u)
                return "app", walk(head, depth), tuple([walk(a, depth) for a in args])
        raise TypeError(f"not a λ-term: {u!r}")

    return walk(t, 0)


def alpha_equal(t: LambdaTerm, u: LambdaTerm) -> bool:
    return t == u or canonical(t) == canonical(u)

# endregion


# region patterns

def eta_contract(t: LambdaTerm) -> LambdaTerm:
    """ λz⃗.x(z⃗) ↦ x when x ∉ z⃗; other terms are returned unchanged """
    binders, body = strip_lams(t)
    if not binders:
        return t
    head, args = spine(body)
    names = [name for name, _ in binders]
    if not isinstance(head, BoundVar) or head.name in names or len(args) != len(names):
        return t
    for arg, name in zip(args, names):
        arg = eta_contract(arg)
        if not isinstance(arg, BoundVar) or arg.name != name:
            return t
    return BoundVar(head.name, type_of(t))


def pattern_args(args: typing.Sequence[LambdaTerm]) -> typing.Optional[typing.List[BoundVar]]:
    """ the η-contracted arguments when they are pairwise distinct bound variables, else None """
    contracted = [eta_contract(a) for a in args]
    if not all(isinstance(a, BoundVar) for a in contracted):
        return None
    if len({a.name for a in contracted}) != len(contracted):
        return None
    return contracted


def is_pattern(t: LambdaTerm) -> bool:
    match t:
        case Lam(_, _, body):
            return is_pattern(body)
        case BoundVar() | FreeVar() | Const():
            return True
        case App():
            head, args = spine(t)
            if isinstance(head, FreeVar):
                return pattern_args(args) is not None
            if isinstance(head, Lam):
                return False
            for a in args:
                if not is_pattern(a):
                    return False
            return True
    raise TypeError(f"not a λ-term: {t!r}")


def eta_long_normalize(t: LambdaTerm, pool: typing.Optional[typing.Mapping[str, LambdaType]] = None) -> LambdaTerm:
    """
    η-long β-normal form of a well-typed term. Names for the binders introduced by η-expansion are
    taken from `pool` (by default the bound names of `t`) when one of the right type is free to use.
    """
    type_of(t)
    if pool is None:
        pool = bound_name_types(t)
    pool = dict(pool)

    def pick(ty, avoid):
        for name, pool_ty in pool.items():
            if pool_ty == ty and name not in avoid:
                return name
        name, _ = fresh_name("z", avoid | set(pool), start=1)
        return name

    def normalize(u):
        if isinstance(u, Lam):
            return Lam(u.binder, u.binder_type, normalize(u.body))
        head, args = spine(u)
        args = [normalize(a) for a in args]
        if isinstance(head, Lam):
            return normalize(_apply_args(head, args))
        u = mk_app(head, args)
        params, _ = split_type(type_of(u))
        if not params:
            return u
        avoid = free_bound_names(u)
        binders: typing.List[Binder] = []
        for ty in params:
            name = pick(ty, avoid)
            avoid = avoid | {name}
            binders.append((name, ty))
        extra = [normalize(BoundVar(name, ty)) for name, ty in binders]
        return mk_lams(binders, mk_app(head, [*args, *extra]))

    return normalize(t)

# endregion
