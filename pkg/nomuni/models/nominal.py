"""
Sorted nominal terms: signatures, atoms, permutations, suspensions, freshness environments
and substitutions.
"""
import typing
from dataclasses import dataclass, field
from functools import cached_property

from nomuni.error import SignatureError, SortError, UnknownSymbolError
from nomuni.utils import compose_swaps, deep_recursion, natural_key


# region sorts

@dataclass(frozen=True)
class BaseSort:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class AbstractionSort:
    """ ⟨ν⟩τ, the sort of an abstraction of an atom of sort ν over a body of sort τ """
    atom_sort: str
    body: "Sort"

    def __str__(self):
        return f"<{self.atom_sort}>{self.body}"


Sort = typing.Union[BaseSort, AbstractionSort]


@dataclass(frozen=True)
class Arity:
    args: typing.Tuple[Sort, ...]
    result: str

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return self.result
        return " * ".join(str(a) for a in self.args) + f" -> {self.result}"


def sort_names(sort: Sort) -> typing.Iterator[str]:
    match sort:
        case BaseSort(name):
            yield name
        case AbstractionSort(atom_sort, body):
            yield atom_sort
            yield from sort_names(body)

# endregion


@dataclass(frozen=True)
class Atom:
    name: str
    sort: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Swapping:
    left: Atom
    right: Atom

    def __post_init__(self):
        if self.left.sort != self.right.sort:
            raise SortError(f"cannot swap {self.left}:{self.left.sort} with {self.right}:{self.right.sort}")

    def apply(self, atom: Atom) -> Atom:
        if atom == self.left:
            return self.right
        if atom == self.right:
            return self.left
        return atom

    def same_as(self, other: "Swapping") -> bool:
        return {self.left, self.right} == {other.left, other.right}

    def __str__(self):
        return f"({self.left} {self.right})"


def _reduce(swaps: typing.Iterable[Swapping]) -> typing.Tuple[Swapping, ...]:
    reduced = []
    for swap in swaps:
        if swap.left == swap.right:
            continue
        if reduced and reduced[-1].same_as(swap):
            reduced.pop()
        else:
            reduced.append(swap)
    return tuple(reduced)


@dataclass(frozen=True)
class Permutation:
    """
    A list of swappings, the leftmost applied last: (a₁ b₁)…(aₙ bₙ)·t = (a₁ b₁)·((a₂ b₂)…(aₙ bₙ)·t).

    Adjacent repeated swappings and (a a) are dropped on construction, so the inverse of a permutation
    concatenated with it is the empty list.
    """
    swaps: typing.Tuple[Swapping, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "swaps", _reduce(self.swaps))

    @cached_property
    def support(self) -> typing.FrozenSet[Atom]:
        return frozenset(a for s in self.swaps for a in (s.left, s.right))

    @cached_property
    def atom_map(self) -> typing.Dict[Atom, Atom]:
        images = compose_swaps((s.left, s.right) for s in reversed(self.swaps))
        return {atom: images.get(atom, atom) for atom in self.support}

    def __call__(self, atom: Atom) -> Atom:
        return self.atom_map.get(atom, atom)

    def __add__(self, other: "Permutation") -> "Permutation":
        """ self ∘ other, `other` is applied first """
        return Permutation(self.swaps + other.swaps)

    def __bool__(self):
        return bool(self.swaps)

    def __len__(self):
        return len(self.swaps)

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.atom_map.items())

    def differing_atoms(self, other: "Permutation") -> typing.Set[Atom]:
        """ the atoms a of the joint support with self·a ≠ other·a """
        return {a for a in self.support | other.support if self(a) != other(a)}

    @classmethod
    def of(cls, *pairs: typing.Tuple[Atom, Atom]) -> "Permutation":
        return cls(tuple(Swapping(a, b) for a, b in pairs))

    @classmethod
    def from_mapping(cls, mapping: typing.Mapping[Atom, Atom], order: typing.Sequence[Atom]) -> "Permutation":
        """
        Decomposes a bijection into swappings, cycle by cycle. Cycles start at their first atom in
        `order` and a cycle c₁ ↦ c₂ ↦ … ↦ cₖ ↦ c₁ becomes (c₁ cₖ)…(c₁ c₂).
        """
        position = {a: i for i, a in enumerate(order)}
        seen = set()
        swaps = []
        for start in sorted(mapping, key=lambda a: position.get(a, len(position))):
            if start in seen or mapping[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            nxt = mapping[start]
            while nxt != start:
                if nxt in seen or nxt not in mapping:
                    raise ValueError(f"not a bijection at {nxt}")
                cycle.append(nxt)
                seen.add(nxt)
                nxt = mapping[nxt]
            swaps.extend(Swapping(start, c) for c in reversed(cycle[1:]))
        return cls(tuple(swaps))

    def __str__(self):
        return "".join(str(s) for s in self.swaps)


IDENTITY = Permutation()


# region terms

@dataclass(frozen=True)
class Fun:
    symbol: str
    args: typing.Tuple["NominalTerm", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class AtomTerm:
    atom: Atom

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Abs:
    atom: Atom
    body: "NominalTerm"

    def __str__(self):
        return f"{self.atom}.{self.body}"


@dataclass(frozen=True)
class Susp:
    perm: Permutation
    var: str

    def __str__(self):
        if not self.perm:
            return self.var
        return f"{self.perm}.{self.var}"


NominalTerm = typing.Union[Fun, AtomTerm, Abs, Susp]


def var(name: str) -> Susp:
    return Susp(IDENTITY, name)

# endregion


@dataclass(frozen=True)
class FreshConstraint:
    atom: Atom
    var: str

    def __str__(self):
        return f"{self.atom} # {self.var}"


@dataclass(frozen=True)
class FreshnessEnv:
    """ ∇, a finite set of constraints a # X """
    constraints: typing.FrozenSet[FreshConstraint] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "constraints", frozenset(self.constraints))

    @classmethod
    def of(cls, *pairs: typing.Tuple[Atom, str]) -> "FreshnessEnv":
        return cls(frozenset(FreshConstraint(a, x) for a, x in pairs))

    def is_fresh(self, atom: Atom, var: str) -> bool:
        return FreshConstraint(atom, var) in self.constraints

    def sorted(self) -> typing.List[FreshConstraint]:
        return sorted(self.constraints, key=lambda c: (natural_key(c.var), natural_key(c.atom.name)))

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.constraints)

    def __str__(self):
        return ", ".join(str(c) for c in self.sorted())


EMPTY_ENV = FreshnessEnv()


@dataclass(frozen=True)
class NominalSubst:
    """
    Maps variable names to nominal terms. Identity bindings X ↦ X are kept and count toward the
    domain.
    """
    bindings: typing.Mapping[str, NominalTerm] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bindings", dict(self.bindings))

    @property
    def domain(self) -> typing.List[str]:
        return list(self.bindings)

    def image(self, name: str) -> NominalTerm:
        """ σ(X), X itself when unbound """
        return self.bindings.get(name, var(name))

    def __getitem__(self, name: str) -> NominalTerm:
        return self.bindings[name]

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def __iter__(self):
        return iter(self.bindings)

    def __len__(self):
        return len(self.bindings)

    def items(self):
        return self.bindings.items()

    def __str__(self):
        return " ; ".join(f"{x} -> {t}" for x, t in self.bindings.items())


@dataclass(frozen=True)
class Eq:
    lhs: NominalTerm
    rhs: NominalTerm

    def __str__(self):
        return f"{self.lhs} ~ {self.rhs}"


@dataclass(frozen=True)
class Fresh:
    atom: Atom
    term: NominalTerm

    def __str__(self):
        return f"{self.atom} # {self.term}"


Equation = typing.Union[Eq, Fresh]


@dataclass(frozen=True)
class Signature:
    atom_sorts: typing.FrozenSet[str] = frozenset()
    data_sorts: typing.FrozenSet[str] = frozenset()
    function_symbols: typing.Mapping[str, Arity] = field(default_factory=dict)
    variable_sorts: typing.Mapping[str, str] = field(default_factory=dict)
    atoms: typing.Mapping[str, Atom] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "atom_sorts", frozenset(self.atom_sorts))
        object.__setattr__(self, "data_sorts", frozenset(self.data_sorts))
        object.__setattr__(self, "function_symbols", dict(self.function_symbols))
        object.__setattr__(self, "variable_sorts", dict(self.variable_sorts))
        object.__setattr__(self, "atoms", dict(self.atoms))
        self.validate()

    def validate(self):
        if overlap := self.atom_sorts & self.data_sorts:
            raise SignatureError(f"sorts declared both as atom and data sorts: {', '.join(sorted(overlap))}")
        sorts = self.atom_sorts | self.data_sorts
        for symbol, arity in self.function_symbols.items():
            for name in (n for s in arity.args for n in sort_names(s)):
                if name not in sorts:
                    raise SignatureError(f"undeclared sort {name} in the arity of {symbol}")
            if arity.result not in self.data_sorts:
                raise SignatureError(f"result sort of {symbol} must be a data sort, not {arity.result}")
            for s in arity.args:
                if isinstance(s, AbstractionSort):
                    self._check_abstraction_sort(symbol, s)
        for name, sort in self.variable_sorts.items():
            if sort not in sorts:
                raise SignatureError(f"undeclared sort {sort} for variable {name}")
        for name, atom in self.atoms.items():
            if atom.sort not in self.atom_sorts:
                raise SignatureError(f"atom {name} has sort {atom.sort} which is not an atom sort")
        seen = {}
        for kind, names in (("atom", self.atoms), ("variable", self.variable_sorts),
                            ("function symbol", self.function_symbols)):
            for name in names:
                if name in seen:
                    raise SignatureError(f"{name} is declared as both {seen[name]} and {kind}")
                seen[name] = kind

    def _check_abstraction_sort(self, symbol, sort):
        while isinstance(sort, AbstractionSort):
            if sort.atom_sort not in self.atom_sorts:
                raise SignatureError(f"{sort.atom_sort} in the arity of {symbol} is not an atom sort")
            sort = sort.body

    @property
    def names(self) -> typing.Set[str]:
        return set(self.atoms) | set(self.variable_sorts) | set(self.function_symbols)

    def atom(self, name: str) -> Atom:
        try:
            return self.atoms[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown atom {name}") from None

    def arity(self, symbol: str) -> Arity:
        try:
            return self.function_symbols[symbol]
        except KeyError:
            raise UnknownSymbolError(f"unknown function symbol {symbol}") from None

    def variable_sort(self, name: str) -> str:
        try:
            return self.variable_sorts[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown variable {name}") from None

    def atoms_of_sort(self, sort: str) -> typing.List[Atom]:
        return [a for a in self.atoms.values() if a.sort == sort]

    def with_atom(self, atom: Atom) -> "Signature":
        return Signature(self.atom_sorts, self.data_sorts, self.function_symbols, self.variable_sorts,
                         {**self.atoms, atom.name: atom})

    def with_variables(self, variable_sorts: typing.Mapping[str, str]) -> "Signature":
        return Signature(self.atom_sorts, self.data_sorts, self.function_symbols,
                         {**self.variable_sorts, **variable_sorts}, self.atoms)


@dataclass(frozen=True)
class NominalProblem:
    equations: typing.Tuple[Equation, ...]
    signature: Signature

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))

    def __str__(self):
        return "\n".join(("eq " if isinstance(e, Eq) else "fresh ") + f"{e}." for e in self.equations)


# region operations

def perm_apply(pi: Permutation, t: NominalTerm) -> NominalTerm:
    if not pi:
        return t
    match t:
        case AtomTerm(atom):
            return AtomTerm(pi(atom))
        case Fun(symbol, args):
            return Fun(symbol, tuple([perm_apply(pi, a) for a in args]))
        case Abs(atom, body):
            return Abs(pi(atom), perm_apply(pi, body))
        case Susp(perm, name):
            return Susp(pi + perm, name)
    raise TypeError(f"not a nominal term: {t!r}")


def perm_inverse(pi: Permutation) -> Permutation:
    return Permutation(tuple(reversed(pi.swaps)))


def subst_apply(sigma: NominalSubst, t: NominalTerm) -> NominalTerm:
    if not sigma:
        return t
    match t:
        case AtomTerm():
            return t
        case Fun(symbol, args):
            return Fun(symbol, tuple([subst_apply(sigma, a) for a in args]))
        case Abs(atom, body):
            return Abs(atom, subst_apply(sigma, body))
        case Susp(perm, name):
            if name in sigma:
                return perm_apply(perm, sigma[name])
            return t
    raise TypeError(f"not a nominal term: {t!r}")


def subst_compose(s1: NominalSubst, s2: NominalSubst) -> NominalSubst:
    """ s1 ∘ s2 over Dom(s1) ∪ Dom(s2) """
    bindings = {x: subst_apply(s1, t) for x, t in s2.items()}
    for x, t in s1.items():
        bindings.setdefault(x, t)
    return NominalSubst(bindings)


def subst_restrict(sigma: NominalSubst, names: typing.Iterable[str]) -> NominalSubst:
    names = set(names)
    return NominalSubst({x: t for x, t in sigma.items() if x in names})


def sort_of(t: NominalTerm, signature: Signature) -> Sort:
    """ The sort of `t`, raising SortError/UnknownSymbolError when it is ill-sorted. """
    match t:
        case AtomTerm(atom):
            if atom.sort not in signature.atom_sorts:
                raise SortError(f"atom {atom} has undeclared atom sort {atom.sort}")
            return BaseSort(atom.sort)
        case Fun(symbol, args):
            arity = signature.arity(symbol)
            if len(args) != len(arity.args):
                raise SortError(f"{symbol} expects {len(arity.args)} arguments, got {len(args)}: {t}")
            for arg, expected in zip(args, arity.args):
                actual = sort_of(arg, signature)
                if actual != expected:
                    raise SortError(f"argument {arg} of {symbol} has sort {actual}, expected {expected}")
            return BaseSort(arity.result)
        case Abs(atom, body):
            if atom.sort not in signature.atom_sorts:
                raise SortError(f"atom {atom} has undeclared atom sort {atom.sort}")
            return AbstractionSort(atom.sort, sort_of(body, signature))
        case Susp(perm, name):
            for atom in perm.support:
                if atom.sort not in signature.atom_sorts:
                    raise SortError(f"atom {atom} has undeclared atom sort {atom.sort}")
            return BaseSort(signature.variable_sort(name))
    raise TypeError(f"not a nominal term: {t!r}")


@deep_recursion
def check_problem(p: NominalProblem):
    for equation in p.equations:
        match equation:
            case Eq(lhs, rhs):
                left, right = sort_of(lhs, p.signature), sort_of(rhs, p.signature)
                if left != right:
                    raise SortError(f"sides of {equation} have different sorts {left} and {right}")
            case Fresh(atom, term):
                if atom.sort not in p.signature.atom_sorts:
                    raise SortError(f"{atom} in {equation} is not an atom")
                sort_of(term, p.signature)


def _subterms(t: NominalTerm) -> typing.Iterator[NominalTerm]:
    """ `t` and its subterms, left to right and outside in """
    todo = [t]
    while todo:
        u = todo.pop()
        yield u
        match u:
            case Fun(_, args):
                todo.extend(reversed(args))
            case Abs(_, body):
                todo.append(body)


def vars_of(t: NominalTerm) -> typing.List[str]:
    """ variables of `t` in first-occurrence order """
    return list(dict.fromkeys(u.var for u in _subterms(t) if isinstance(u, Susp)))


def atoms_of(t: NominalTerm) -> typing.List[Atom]:
    """ atoms of `t` (binders, occurrences and permutations) in first-occurrence order """
    found = {}
    for u in _subterms(t):
        match u:
            case AtomTerm(atom) | Abs(atom, _):
                found.setdefault(atom, None)
            case Susp(perm, _):
                for swap in perm.swaps:
                    found.setdefault(swap.left, None)
                    found.setdefault(swap.right, None)
    return list(found)


def equation_terms(equation: Equation) -> typing.List[NominalTerm]:
    match equation:
        case Eq(lhs, rhs):
            return [lhs, rhs]
        case Fresh(atom, term):
            return [AtomTerm(atom), term]
    raise TypeError(f"not an equation: {equation!r}")


def problem_vars(p: NominalProblem) -> typing.List[str]:
    found = {}
    for equation in p.equations:
        for t in equation_terms(equation):
            for x in vars_of(t):
                found.setdefault(x, None)
    return list(found)


def problem_atoms(p: NominalProblem) -> typing.List[Atom]:
    found = {}
    for equation in p.equations:
        for t in equation_terms(equation):
            for a in atoms_of(t):
                found.setdefault(a, None)
    return list(found)


def term_size(t: NominalTerm) -> int:
    return sum(1 + len(u.perm) if isinstance(u, Susp) else 1 for u in _subterms(t))


def problem_size(p: NominalProblem) -> int:
    return sum(term_size(t) for e in p.equations for t in equation_terms(e))

# endregion
