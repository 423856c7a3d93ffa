import typing

from nomuni.error import FreshAtomUnavailable
from nomuni.log import getLogger
from nomuni.models.nominal import (
    Abs, Atom, Eq, Fresh, NominalProblem, Signature, problem_atoms,
)
from nomuni.utils import fresh_name

logger = getLogger(__name__)


def _mint_atom(base: Atom, signature: Signature) -> Atom:
    name, _ = fresh_name(base.name, signature.names)
    return Atom(name, base.sort)


def eliminate_freshness(p: NominalProblem, mint_atoms: bool = True) -> NominalProblem:
    """
    Replaces every freshness equation a #? t by a.b.t ≈? b.b.t, for an atom b ≠ a of the sort of a.

    b is the first atom of that sort other than a, in order of occurrence in the problem and then in
    declaration order. When there is none a new atom is added to the signature (one per sort), unless
    `mint_atoms` is false.
    """
    if not any(isinstance(e, Fresh) for e in p.equations):
        return p
    signature = p.signature
    occurring = problem_atoms(p)
    minted: typing.Dict[str, Atom] = {}

    def partner(a: Atom) -> Atom:
        nonlocal signature
        for b in [*occurring, *signature.atoms_of_sort(a.sort)]:
            if b.sort == a.sort and b != a:
                return b
        if a.sort in minted and minted[a.sort] != a:
            return minted[a.sort]
        if not mint_atoms:
            raise FreshAtomUnavailable(f"no second atom of sort {a.sort} to eliminate {a} # ...")
        b = _mint_atom(a, signature)
        signature = signature.with_atom(b)
        minted[a.sort] = b
        logger.debug(f"minted atom {b} of sort {b.sort}")
        return b

    equations = []
    for equation in p.equations:
        if isinstance(equation, Fresh):
            a = equation.atom
            b = partner(a)
            equations.append(Eq(Abs(a, Abs(b, equation.term)), Abs(b, Abs(b, equation.term))))
        else:
            equations.append(equation)
    return NominalProblem(tuple(equations), signature)
