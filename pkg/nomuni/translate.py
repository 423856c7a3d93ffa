"""
Forward translation from nominal terms, problems and substitutions to simply-typed λ-terms.

Atoms become bound variables of the same name, and a suspension π·X becomes the free variable X
applied to the permuted list of atoms that X may capture. Problem equations are closed under the
full list of atoms, λa₁…aₙ, so atoms never turn into instantiable variables.
"""
import typing
from dataclasses import dataclass, field
from functools import cached_property

from nomuni.error import InputError, PreconditionError, TranslationError
from nomuni.lambda_core import substitute_bound
from nomuni.models.lam import (
    Base, BoundVar, Const, FreeVar, Lam, LambdaTerm, LambdaType, arrows, format_term, mk_app, mk_lams,
)
from nomuni.models.nominal import (
    Abs, AbstractionSort, Arity, Atom, AtomTerm, BaseSort, EMPTY_ENV, Eq, Fresh, FreshnessEnv, Fun,
    NominalProblem, NominalSubst, NominalTerm, Signature, Sort, Susp, problem_atoms,
)
from nomuni.oracle import fresh_check
from nomuni.utils import deep_recursion, natural_key


@dataclass(frozen=True)
class AtomList:
    """ the fixed, finite and ordered list of distinct atoms a pipeline run works with """
    atoms: typing.Tuple[Atom, ...]
    signature: Signature

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(set(self.atoms)) != len(self.atoms):
            raise InputError(f"atom list has repeated atoms: {', '.join(a.name for a in self.atoms)}")

    @classmethod
    def of_problem(cls, p: NominalProblem, order: typing.Optional[typing.Sequence[str]] = None) -> "AtomList":
        occurring = problem_atoms(p)
        if order is None:
            return cls(tuple(occurring), p.signature)
        atoms = tuple(p.signature.atom(name) for name in order)
        if missing := [a.name for a in occurring if a not in atoms]:
            raise InputError(f"atom list does not cover {', '.join(missing)}")
        return cls(atoms, p.signature)

    def with_signature(self, signature: Signature) -> "AtomList":
        return AtomList(self.atoms, signature)

    @property
    def names(self) -> typing.List[str]:
        return [a.name for a in self.atoms]

    def binders(self) -> typing.List[typing.Tuple[str, LambdaType]]:
        return [(a.name, Base(a.sort)) for a in self.atoms]

    @cached_property
    def _by_name(self) -> typing.Dict[str, Atom]:
        return {a.name: a for a in self.atoms}

    @cached_property
    def _bound_vars(self) -> typing.Dict[Atom, BoundVar]:
        return {a: BoundVar(a.name, Base(a.sort)) for a in self.atoms}

    def by_name(self, name: str) -> typing.Optional[Atom]:
        return self._by_name.get(name)

    def bound(self, atom: Atom) -> BoundVar:
        """ the bound variable standing for `atom` """
        bound = self._bound_vars.get(atom)
        if bound is None:
            raise TranslationError(f"atom {atom} is missing from the atom list {self}")
        return bound

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __contains__(self, atom):
        return atom in self._bound_vars

    def __str__(self):
        return "<" + ", ".join(self.names) + ">"


@dataclass(frozen=True)
class PatternProblem:
    equations: typing.Tuple[typing.Tuple[LambdaTerm, LambdaTerm], ...]
    atom_list: typing.Optional[AtomList] = None

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(tuple(e) for e in self.equations))

    def __str__(self):
        return "\n".join(f"{format_term(l)} =? {format_term(r)}" for l, r in self.equations)


@dataclass(frozen=True)
class PatternSubst:
    bindings: typing.Mapping[str, LambdaTerm] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bindings", dict(self.bindings))

    @property
    def domain(self) -> typing.List[str]:
        return list(self.bindings)

    def __getitem__(self, name: str) -> LambdaTerm:
        return self.bindings[name]

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def __iter__(self):
        return iter(self.bindings)

    def __len__(self):
        return len(self.bindings)

    def items(self):
        return self.bindings.items()

    def restrict(self, names: typing.Iterable[str]) -> "PatternSubst":
        names = set(names)
        return PatternSubst({x: t for x, t in self.bindings.items() if x in names})

    def __str__(self):
        return " ; ".join(f"{x} -> {format_term(self.bindings[x])}" for x in sorted(self.bindings, key=natural_key))


def translate_sort(s: typing.Union[Sort, Arity], signature: typing.Optional[Signature] = None) -> LambdaType:
    match s:
        case BaseSort(name):
            if signature is not None and name not in signature.atom_sorts | signature.data_sorts:
                raise TranslationError(f"undeclared sort {name}")
            return Base(name)
        case AbstractionSort(atom_sort, body):
            return arrows([translate_sort(BaseSort(atom_sort), signature)], translate_sort(body, signature))
        case Arity(args, result):
            return arrows([translate_sort(a, signature) for a in args], translate_sort(BaseSort(result), signature))
    raise TypeError(f"not a sort: {s!r}")


def capturable_atoms(x: str, nabla: FreshnessEnv, atoms: AtomList) -> typing.List[Atom]:
    """ the atoms of the list that X may capture, i.e. those with a # X ∉ ∇ """
    if not nabla:
        return list(atoms)
    return [a for a in atoms if not nabla.is_fresh(a, x)]


def variable_type(x: str, nabla: FreshnessEnv, atoms: AtomList) -> LambdaType:
    """ X : ν₁→…→νₘ→τ for the capturable atoms b₁:ν₁ … bₘ:νₘ of X """
    result = translate_sort(BaseSort(atoms.signature.variable_sort(x)))
    return arrows([Base(b.sort) for b in capturable_atoms(x, nabla, atoms)], result)


def translate_term(t: NominalTerm, nabla: FreshnessEnv, atoms: AtomList) -> LambdaTerm:
    match t:
        case AtomTerm(atom):
            return atoms.bound(atom)
        case Fun(symbol, args):
            head = Const(symbol, translate_sort(atoms.signature.arity(symbol)))
            return mk_app(head, [translate_term(a, nabla, atoms) for a in args])
        case Abs(atom, body):
            return Lam(atoms.bound(atom).name, Base(atom.sort), translate_term(body, nabla, atoms))
        case Susp(perm, name):
            head = FreeVar(name, variable_type(name, nabla, atoms))
            return mk_app(head, [atoms.bound(perm(b)) for b in capturable_atoms(name, nabla, atoms)])
    raise TypeError(f"not a nominal term: {t!r}")


@deep_recursion
def translate_problem(p: NominalProblem, atoms: AtomList, outer_binders: bool = True) -> PatternProblem:
    """
    Each equation t ≈? u becomes λa₁…aₙ.⟦t⟧∅ =? λa₁…aₙ.⟦u⟧∅.

    With `outer_binders` false the prefix is left out and atoms not bound inside a term become free
    variables, so unsolvable problems like a ≈? b turn solvable.
    """
    prefix = atoms.binders()
    unbound = {name: FreeVar(name, ty) for name, ty in prefix}

    def side(t: NominalTerm) -> LambdaTerm:
        translated = translate_term(t, EMPTY_ENV, atoms)
        if outer_binders:
            return mk_lams(prefix, translated)
        return substitute_bound(translated, unbound)

    equations = []
    for equation in p.equations:
        if isinstance(equation, Fresh):
            raise TranslationError(f"freshness equation {equation} must be eliminated before translation")
        assert isinstance(equation, Eq)
        equations.append((side(equation.lhs), side(equation.rhs)))
    return PatternProblem(tuple(equations), atoms)


def translate_subst(sigma: NominalSubst, nabla: FreshnessEnv, atoms: AtomList) -> PatternSubst:
    return translate_subst_general(sigma, nabla, EMPTY_ENV, atoms)


def translate_subst_general(sigma: NominalSubst, nabla: FreshnessEnv, nabla_prime: FreshnessEnv,
                            atoms: AtomList) -> PatternSubst:
    """ ⟦σ⟧_∇^∇′, each binding abstracted over the atoms its variable may capture under ∇′ """
    for constraint in nabla_prime:
        if not fresh_check(nabla, constraint.atom, sigma.image(constraint.var)):
            raise PreconditionError(f"{nabla} does not entail {constraint.atom} # {sigma.image(constraint.var)}")
    bindings = {}
    for x, t in sigma.items():
        prefix = [(b.name, Base(b.sort)) for b in capturable_atoms(x, nabla_prime, atoms)]
        bindings[x] = mk_lams(prefix, translate_term(t, nabla, atoms))
    return PatternSubst(bindings)
