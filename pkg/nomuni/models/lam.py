"""
Simply-typed λ-terms. Terms are kept in η-long β-normal form λx₁…xₙ.h(t₁,…,tₘ): an App always has a
variable or constant head and at least one argument.
"""
import typing
from dataclasses import dataclass


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    source: "LambdaType"
    target: "LambdaType"

    def __str__(self):
        source = f"({self.source})" if isinstance(self.source, Arrow) else str(self.source)
        return f"{source} -> {self.target}"


LambdaType = typing.Union[Base, Arrow]


def arrows(args: typing.Sequence[LambdaType], result: LambdaType) -> LambdaType:
    for arg in reversed(args):
        result = Arrow(arg, result)
    return result


def split_type(ty: LambdaType) -> typing.Tuple[typing.List[LambdaType], Base]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.source)
        ty = ty.target
    return args, ty


@dataclass(frozen=True)
class BoundVar:
    name: str
    type: LambdaType

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class FreeVar:
    name: str
    type: LambdaType

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Const:
    name: str
    type: LambdaType

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Lam:
    binder: str
    binder_type: LambdaType
    body: "LambdaTerm"

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class App:
    head: "LambdaTerm"
    args: typing.Tuple["LambdaTerm", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return format_term(self)


Head = typing.Union[BoundVar, FreeVar, Const]
LambdaTerm = typing.Union[BoundVar, FreeVar, Const, Lam, App]
Binder = typing.Tuple[str, LambdaType]

_NO_NAMES: typing.FrozenSet[str] = frozenset()
_NO_UNKNOWNS: typing.Mapping[str, LambdaType] = {}


def _children(t: LambdaTerm) -> typing.Tuple[LambdaTerm, ...]:
    if isinstance(t, Lam):
        return (t.body,)
    return (t.head, *t.args)


def _names_of_compound(t: LambdaTerm) -> typing.FrozenSet[str]:
    if isinstance(t, Lam):
        names = free_names_of(t.body)
        return names - {t.binder} if t.binder in names else names
    parts = [p for p in [free_names_of(u) for u in _children(t)] if p]
    if len(parts) <= 1:
        return parts[0] if parts else _NO_NAMES
    return frozenset().union(*parts)


def _unknowns_of_compound(t: LambdaTerm) -> typing.Mapping[str, LambdaType]:
    parts = [p for p in [unknowns_of(u) for u in _children(t)] if p]
    if len(parts) <= 1:
        return parts[0] if parts else _NO_UNKNOWNS
    merged = {}
    for part in parts:
        for name, ty in part.items():
            merged.setdefault(name, ty)
    return merged


def _cached(t: LambdaTerm, key: str, compute: typing.Callable[[LambdaTerm], typing.Any]):
    """ `compute(t)` memoized on the term, filling the subterm caches bottom-up without recursion """
    todo = [t]
    while todo:
        u = todo[-1]
        if key in u.__dict__:
            todo.pop()
            continue
        missing = [c for c in _children(u) if isinstance(c, (Lam, App)) and key not in c.__dict__]
        if missing:
            todo.extend(missing)
            continue
        todo.pop()
        u.__dict__[key] = compute(u)
    return t.__dict__[key]


def free_names_of(t: LambdaTerm) -> typing.FrozenSet[str]:
    """ names of bound variables occurring free in `t`, cached on compound terms """
    if isinstance(t, BoundVar):
        return frozenset((t.name,))
    if isinstance(t, (Lam, App)):
        return _cached(t, "_free_names", _names_of_compound)
    return _NO_NAMES


def unknowns_of(t: LambdaTerm) -> typing.Mapping[str, LambdaType]:
    """ free variables of `t` in first-occurrence order; the mapping is shared and must not be changed """
    if isinstance(t, FreeVar):
        return {t.name: t.type}
    if isinstance(t, (Lam, App)):
        return _cached(t, "_unknowns", _unknowns_of_compound)
    return _NO_UNKNOWNS


def mk_app(head: LambdaTerm, args: typing.Sequence[LambdaTerm]) -> LambdaTerm:
    if not args:
        return head
    if isinstance(head, App):
        return App(head.head, head.args + tuple(args))
    return App(head, tuple(args))


def spine(t: LambdaTerm) -> typing.Tuple[LambdaTerm, typing.Tuple[LambdaTerm, ...]]:
    """ head and arguments of a non-abstraction """
    args = ()
    while isinstance(t, App):
        args = t.args + args
        t = t.head
    return t, args


def strip_lams(t: LambdaTerm) -> typing.Tuple[typing.List[Binder], LambdaTerm]:
    binders = []
    while isinstance(t, Lam):
        binders.append((t.binder, t.binder_type))
        t = t.body
    return binders, t


def mk_lams(binders: typing.Sequence[Binder], body: LambdaTerm) -> LambdaTerm:
    for name, ty in reversed(binders):
        body = Lam(name, ty, body)
    return body


def format_term(t: LambdaTerm) -> str:
    """ `\\a b. f (X a b) b` """
    binders, body = strip_lams(t)
    head, args = spine(body)
    text = " ".join([_atomic(head), *(_atomic(a) for a in args)])
    if binders:
        return "\\" + " ".join(name for name, _ in binders) + ". " + text
    return text


def _atomic(t: LambdaTerm) -> str:
    if isinstance(t, (BoundVar, FreeVar, Const)):
        return t.name
    return f"({format_term(t)})"
