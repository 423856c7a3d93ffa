"""
Back-translation of pattern unifiers into nominal unifiers.

A λ-term is ∇-compatible when it has a nominal counterpart: every binder is base typed and named
after an atom, bound variables are never applied, and the arguments of each free variable X can be
obtained by permuting the atoms that X may capture under ∇.
"""
import itertools
import typing

from nomuni.error import CompatibilityError
from nomuni.lambda_core import beta_apply, free_vars
from nomuni.log import getLogger
from nomuni.models.lam import App, Base, BoundVar, Const, FreeVar, Lam, LambdaTerm, LambdaType, spine, split_type
from nomuni.models.nominal import (
    Abs, Atom, AtomTerm, EMPTY_ENV, FreshConstraint, FreshnessEnv, Fun, NominalSubst, NominalTerm,
    Permutation, Signature, Susp,
)
from nomuni.translate import AtomList, PatternSubst, capturable_atoms

logger = getLogger(__name__)

Choice = typing.Dict[str, typing.Tuple[Atom, ...]]


def _atom(name: str, ty: LambdaType, atoms: AtomList, t: LambdaTerm) -> Atom:
    if not isinstance(ty, Base):
        raise CompatibilityError(f"bound variable {name} is not base typed", t)
    atom = atoms.by_name(name)
    if atom is None:
        raise CompatibilityError(f"bound variable {name} is not an atom of {atoms}", t)
    if atom.sort != ty.name:
        raise CompatibilityError(f"bound variable {name} has type {ty}, atom {atom} has sort {atom.sort}", t)
    return atom


def _suspension(x: FreeVar, args: typing.Sequence[LambdaTerm], nabla: FreshnessEnv, atoms: AtomList,
                t: LambdaTerm) -> Susp:
    capturable = capturable_atoms(x.name, nabla, atoms)
    if len(capturable) != len(args):
        raise CompatibilityError(f"{x.name} may capture {len(capturable)} atoms but is applied to {len(args)}", t)
    images = []
    for arg in args:
        if not isinstance(arg, BoundVar):
            raise CompatibilityError(f"argument {arg} of {x.name} is not a bound variable", t)
        images.append(_atom(arg.name, arg.type, atoms, t))
    if len(set(images)) != len(images):
        raise CompatibilityError(f"{x.name} is applied to repeated atoms", t)

    # the forced part sends the i-th capturable atom to the i-th argument
    mapping = {}
    for source, image in zip(capturable, images):
        if source.sort != image.sort:
            raise CompatibilityError(f"argument {image} of {x.name} has sort {image.sort}, expected {source.sort}", t)
        mapping[source] = image
    used = set(images)
    for sort in dict.fromkeys(a.sort for a in atoms):
        sources = [a for a in atoms if a.sort == sort and a not in mapping]
        targets = [a for a in atoms if a.sort == sort and a not in used]
        mapping.update(zip(sources, targets))
    return Susp(Permutation.from_mapping(mapping, list(atoms)), x.name)


def back_term(t: LambdaTerm, nabla: FreshnessEnv, atoms: AtomList) -> NominalTerm:
    """ ⟦t⟧⁻¹∇, raising CompatibilityError on the first subterm without a nominal counterpart """
    match t:
        case Lam(binder, ty, body):
            return Abs(_atom(binder, ty, atoms, t), back_term(body, nabla, atoms))
        case BoundVar(name, ty):
            return AtomTerm(_atom(name, ty, atoms, t))
        case Const(name, _):
            return Fun(name, ())
        case FreeVar():
            return _suspension(t, (), nabla, atoms, t)
        case App():
            head, args = spine(t)
            match head:
                case Const(name, _):
                    return Fun(name, tuple([back_term(a, nabla, atoms) for a in args]))
                case FreeVar():
                    return _suspension(head, args, nabla, atoms, t)
            raise CompatibilityError(f"bound variable {head} is applied", t)
    raise TypeError(f"not a λ-term: {t!r}")


def is_compatible(t: LambdaTerm, nabla: FreshnessEnv, atoms: AtomList) -> bool:
    try:
        back_term(t, nabla, atoms)
    except CompatibilityError:
        return False
    return True


def _applied(image: LambdaTerm, prefix: typing.Sequence[Atom]) -> LambdaTerm:
    return beta_apply(image, [BoundVar(a.name, Base(a.sort)) for a in prefix])


def back_subst(sigma: PatternSubst, nabla: FreshnessEnv, atoms: AtomList) -> NominalSubst:
    """ [X ↦ ⟦σ(X)(a₁,…,aₙ)⟧⁻¹∇] for X ∈ Dom(σ) """
    return back_subst_general(sigma, nabla, EMPTY_ENV, atoms)


def back_subst_general(sigma: PatternSubst, nabla: FreshnessEnv, nabla_prime: FreshnessEnv,
                       atoms: AtomList) -> NominalSubst:
    """ [X ↦ ⟦σ(X)(b₁,…,bₘ)⟧⁻¹∇] where b₁…bₘ are the atoms X may capture under ∇′ """
    bindings = {}
    for x, image in sigma.items():
        applied = _applied(image, capturable_atoms(x, nabla_prime, atoms))
        bindings[x] = back_term(applied, nabla, atoms)
    return NominalSubst(bindings)


def image_variables(sigma: PatternSubst) -> typing.Dict[str, LambdaType]:
    """ free variables of the images of σ with their types, in first-occurrence order """
    found = {}
    for image in sigma.bindings.values():
        for name, ty in free_vars(image).items():
            found.setdefault(name, ty)
    return found


def _matching_sublists(arg_types: typing.Sequence[LambdaType], atoms: AtomList) -> typing.Iterator[typing.Tuple[Atom, ...]]:
    """ sublists of the atom list whose types are `arg_types`, lexicographically by index """
    for indices in itertools.combinations(range(len(atoms)), len(arg_types)):
        chosen = tuple(atoms.atoms[i] for i in indices)
        if all(Base(a.sort) == ty for a, ty in zip(chosen, arg_types)):
            yield chosen


def _canonical_sublist(name: str, arg_types: typing.Sequence[LambdaType], atoms: AtomList) -> typing.Tuple[Atom, ...]:
    chosen = []
    remaining = iter(atoms)
    for ty in arg_types:
        atom = next((a for a in remaining if Base(a.sort) == ty), None)
        if atom is None:
            raise CompatibilityError(f"no sublist of {atoms} has the argument types of {name}")
        chosen.append(atom)
    return tuple(chosen)


def _env(choice: Choice, atoms: AtomList) -> FreshnessEnv:
    constraints = set()
    for z, kept in choice.items():
        kept = set(kept)
        constraints.update(FreshConstraint(a, z) for a in atoms if a not in kept)
    return FreshnessEnv(frozenset(constraints))


def build_freshness_env(sigma: PatternSubst, atoms: AtomList,
                        choice: typing.Optional[Choice] = None) -> typing.Tuple[FreshnessEnv, Choice]:
    """
    Picks for each variable Z of the images of σ a sublist L_Z of the atom list matching the argument
    types of Z and returns ∇ = {a # Z | a ∉ L_Z} with the sublists chosen. By default L_Z is the earliest
    matching sublist; `choice` overrides it per variable.
    """
    chosen: Choice = {}
    for name, ty in image_variables(sigma).items():
        arg_types, _ = split_type(ty)
        if choice is not None and name in choice:
            kept = tuple(choice[name])
            if [Base(a.sort) for a in kept] != list(arg_types) or any(a not in atoms for a in kept):
                raise CompatibilityError(f"{', '.join(a.name for a in kept)} does not match the arguments of {name}")
            chosen[name] = kept
        else:
            chosen[name] = _canonical_sublist(name, arg_types, atoms)
    return _env(chosen, atoms), chosen


def freshness_env_choices(sigma: PatternSubst, atoms: AtomList) -> typing.Iterator[typing.Tuple[FreshnessEnv, Choice]]:
    """ every freshness environment build_freshness_env may produce for σ, the default first """
    variables = image_variables(sigma)
    options = [list(_matching_sublists(split_type(ty)[0], atoms)) for ty in variables.values()]
    for combination in itertools.product(*options):
        chosen = dict(zip(variables, combination))
        yield _env(chosen, atoms), chosen


def declare_variables(signature: Signature, sigma: PatternSubst) -> Signature:
    """ declares the variables introduced by the solver, with the sort of their result type """
    new = {}
    for name, ty in image_variables(sigma).items():
        if name not in signature.variable_sorts:
            new[name] = split_type(ty)[1].name
    if new:
        logger.debug(f"declaring solver variables {', '.join(new)}")
        return signature.with_variables(new)
    return signature
