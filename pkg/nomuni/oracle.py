"""
Executable checker for the freshness (#) and α-equivalence (≈) judgments. Every solution the
solver reports is verified here.
"""
import itertools
import typing

from nomuni.log import getLogger
from nomuni.models.nominal import (
    Abs, Atom, AtomTerm, Eq, Fresh, FreshnessEnv, Fun, NominalProblem, NominalSubst, NominalTerm,
    Permutation, Signature, Susp, atoms_of, perm_apply, perm_inverse, subst_apply, vars_of,
)
from nomuni.utils import deep_recursion

logger = getLogger(__name__)

Solution = typing.Tuple[FreshnessEnv, NominalSubst]


def fresh_check(nabla: FreshnessEnv, a: Atom, t: NominalTerm) -> bool:
    """ ∇ ⊢ a # t """
    match t:
        case AtomTerm(atom):
            return atom != a
        case Fun(_, args):
            for arg in args:
                if not fresh_check(nabla, a, arg):
                    return False
            return True
        case Abs(atom, body):
            return atom == a or fresh_check(nabla, a, body)
        case Susp(perm, name):
            return nabla.is_fresh(perm_inverse(perm)(a), name)
    raise TypeError(f"not a nominal term: {t!r}")


def alpha_eq_check(nabla: FreshnessEnv, t: NominalTerm, u: NominalTerm) -> bool:
    """ ∇ ⊢ t ≈ u """
    match t, u:
        case AtomTerm(a), AtomTerm(b):
            return a == b
        case Susp(pi, x), Susp(pi2, y):
            return x == y and all(nabla.is_fresh(a, x) for a in pi.differing_atoms(pi2))
        case Fun(f, args), Fun(g, args2):
            if f != g or len(args) != len(args2):
                return False
            for l, r in zip(args, args2):
                if not alpha_eq_check(nabla, l, r):
                    return False
            return True
        case Abs(a, body), Abs(b, body2):
            if a == b:
                return alpha_eq_check(nabla, body, body2)
            if a.sort != b.sort:
                return False
            return (alpha_eq_check(nabla, body, perm_apply(Permutation.of((a, b)), body2))
                    and fresh_check(nabla, a, body2))
    return False


@deep_recursion
def check_solution(problem: NominalProblem, nabla: FreshnessEnv, sigma: NominalSubst) -> bool:
    for equation in problem.equations:
        match equation:
            case Eq(lhs, rhs):
                if not alpha_eq_check(nabla, subst_apply(sigma, lhs), subst_apply(sigma, rhs)):
                    logger.debug(f"solution fails equation {equation}")
                    return False
            case Fresh(atom, term):
                if not fresh_check(nabla, atom, subst_apply(sigma, term)):
                    logger.debug(f"solution fails freshness equation {equation}")
                    return False
    return True


def check_more_general(sol1: Solution, sol2: Solution, witness: NominalSubst) -> bool:
    """ ⟨∇₁, σ₁⟩ is more general than ⟨∇₂, σ₂⟩, as witnessed by σ′ = `witness` """
    nabla1, sigma1 = sol1
    nabla2, sigma2 = sol2
    for constraint in nabla1:
        if not fresh_check(nabla2, constraint.atom, witness.image(constraint.var)):
            return False
    for name in dict.fromkeys([*sigma1.domain, *sigma2.domain]):
        if not alpha_eq_check(nabla2, subst_apply(witness, sigma1.image(name)), sigma2.image(name)):
            return False
    return True


def solution_vars(sol: Solution) -> typing.List[str]:
    nabla, sigma = sol
    found = dict.fromkeys(sigma.domain)
    for t in sigma.bindings.values():
        found.update(dict.fromkeys(vars_of(t)))
    found.update(dict.fromkeys(c.var for c in nabla.sorted()))
    return list(found)


def solution_atoms(sol: Solution) -> typing.List[Atom]:
    nabla, sigma = sol
    found = {}
    for t in sigma.bindings.values():
        found.update(dict.fromkeys(atoms_of(t)))
    found.update(dict.fromkeys(c.atom for c in nabla.sorted()))
    return list(found)


def sort_preserving_permutations(atoms: typing.Sequence[Atom]) -> typing.Iterator[Permutation]:
    """ every sort-preserving permutation of `atoms`, the identity first """
    by_sort = {}
    for a in atoms:
        by_sort.setdefault(a.sort, []).append(a)
    groups = list(by_sort.values())
    for images in itertools.product(*(itertools.permutations(g) for g in groups)):
        mapping = {a: b for g, img in zip(groups, images) for a, b in zip(g, img)}
        yield Permutation.from_mapping(mapping, atoms)


def find_more_general_witness(sol1: Solution, sol2: Solution,
                              atoms: typing.Optional[typing.Sequence[Atom]] = None,
                              signature: typing.Optional[Signature] = None) -> typing.Optional[NominalSubst]:
    """
    Searches a witness σ′ of the shape X ↦ π·Z for "sol1 is more general than sol2". π ranges over the
    sort-preserving permutations of `atoms` (by default the atoms of both solutions) and Z over the
    variables of both solutions. Returns None when no such witness exists.
    """
    nabla1, sigma1 = sol1
    if atoms is None:
        atoms = list(dict.fromkeys([*solution_atoms(sol1), *solution_atoms(sol2)]))
    unknowns = list(dict.fromkeys(
        [x for t in sigma1.bindings.values() for x in vars_of(t)]
        + [x for x in sol2[1].domain if x not in sigma1]
        + [c.var for c in nabla1.sorted()]
    ))
    targets = list(dict.fromkeys([*solution_vars(sol1), *solution_vars(sol2)]))
    perms = list(sort_preserving_permutations(atoms))

    def candidates(name):
        for target in targets:
            if signature is not None and (signature.variable_sorts.get(name)
                                          != signature.variable_sorts.get(target)):
                continue
            for pi in perms:
                yield Susp(pi, target)

    # checks only depend on the unknowns occurring in them, test each as soon as they are bound
    checks = []
    for constraint in nabla1:
        checks.append(({constraint.var}, lambda w, c=constraint: fresh_check(
            sol2[0], c.atom, w.image(c.var))))
    for name in dict.fromkeys([*sigma1.domain, *sol2[1].domain]):
        needed = set(vars_of(sigma1.image(name)))
        checks.append((needed, lambda w, n=name: alpha_eq_check(
            sol2[0], subst_apply(w, sigma1.image(n)), sol2[1].image(n))))

    def ready(bound, index):
        return [check for needed, check in checks
                if needed <= bound and (index < 0 or unknowns[index] in needed)]

    for _, check in [c for c in checks if not c[0]]:
        if not check(NominalSubst()):
            return None

    def search(index, bindings):
        if index == len(unknowns):
            return NominalSubst(bindings)
        name = unknowns[index]
        bound = set(unknowns[:index + 1])
        for candidate in candidates(name):
            trial = {**bindings, name: candidate}
            witness = NominalSubst(trial)
            if all(check(witness) for check in ready(bound, index)):
                found = search(index + 1, trial)
                if found is not None:
                    return found
        return None

    return search(0, {})


def find_equivalence_witness(sol1: Solution, sol2: Solution,
                             atoms: typing.Optional[typing.Sequence[Atom]] = None,
                             signature: typing.Optional[Signature] = None) -> typing.Optional[NominalSubst]:
    """
    A witness that sol1 is more general than sol2, provided sol2 is also more general than sol1
    (so both are equivalent); None otherwise.
    """
    forward = find_more_general_witness(sol1, sol2, atoms, signature)
    if forward is None:
        return None
    if find_more_general_witness(sol2, sol1, atoms, signature) is None:
        return None
    return forward
