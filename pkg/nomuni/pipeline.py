"""
End-to-end solving of nominal unification problems through higher-order pattern unification.
"""
import typing
from dataclasses import dataclass, field

from nomuni.back_translate import Choice, back_subst, build_freshness_env, declare_variables
from nomuni.error import VerificationError
from nomuni.freshness import eliminate_freshness
from nomuni.log import getLogger
from nomuni.models.lam import BoundVar, FreeVar, mk_app, mk_lams
from nomuni.models.nominal import EMPTY_ENV, NominalProblem, Signature, check_problem, problem_vars
from nomuni.oracle import Solution, check_solution
from nomuni.pattern import Failure, TraceEntry, Unifier, unify
from nomuni.settings import settings
from nomuni.translate import AtomList, PatternProblem, PatternSubst, translate_problem, variable_type
from nomuni.utils import deep_recursion, parse_bool

logger = getLogger(__name__)


@dataclass
class SolveResult:
    problem: NominalProblem
    eliminated: NominalProblem
    atom_list: AtomList
    pattern_problem: PatternProblem
    outcome: typing.Union[Unifier, Failure]
    solution: typing.Optional[Solution] = None
    signature: typing.Optional[Signature] = None
    choice: Choice = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.solution is not None

    @property
    def failure(self) -> typing.Optional[Failure]:
        return self.outcome if isinstance(self.outcome, Failure) else None

    @property
    def trace(self) -> typing.Tuple[TraceEntry, ...]:
        return self.outcome.trace


def identity_bindings(names: typing.Iterable[str], atom_list: AtomList) -> PatternSubst:
    """ X ↦ λa₁…aₙ.X(a₁,…,aₙ) for each name """
    binders = atom_list.binders()
    bindings = {}
    for name in names:
        head = FreeVar(name, variable_type(name, EMPTY_ENV, atom_list))
        bindings[name] = mk_lams(binders, mk_app(head, [BoundVar(a, ty) for a, ty in binders]))
    return PatternSubst(bindings)


@deep_recursion
def solve(p: NominalProblem, atoms: typing.Optional[typing.Sequence[str]] = None, verify: bool = True,
          trace: bool = False, seed: typing.Optional[int] = None, fresh_prefix: typing.Optional[str] = None,
          mint_atoms: typing.Optional[bool] = None, max_steps: typing.Optional[int] = None) -> SolveResult:
    """
    Eliminates freshness equations, translates over the atom list (first occurrence order unless
    `atoms` is given), unifies, and back-translates the pattern unifier. The returned solution binds
    every variable of `p` and has been checked against `p` unless `verify` is false.
    """
    seed = int(settings.value("solver/seed")) if seed is None else seed
    fresh_prefix = settings.value("solver/fresh_prefix") if fresh_prefix is None else fresh_prefix
    mint_atoms = parse_bool(settings.value("solver/mint_atoms")) if mint_atoms is None else mint_atoms

    check_problem(p)
    eliminated = eliminate_freshness(p, mint_atoms=mint_atoms)
    atom_list = AtomList.of_problem(eliminated, atoms)
    logger.debug(f"solving {len(p.equations)} equations over atoms {atom_list}")
    pattern_problem = translate_problem(eliminated, atom_list)
    outcome = unify(pattern_problem, trace=trace, seed=seed, fresh_prefix=fresh_prefix, max_steps=max_steps)
    result = SolveResult(p, eliminated, atom_list, pattern_problem, outcome)
    if isinstance(outcome, Failure):
        logger.debug(f"no unifier: {outcome}")
        return result

    sigma = outcome.subst
    untouched = [x for x in problem_vars(p) if x not in sigma]
    sigma = PatternSubst({**sigma.bindings, **identity_bindings(untouched, atom_list).bindings})
    nabla, choice = build_freshness_env(sigma, atom_list)
    signature = declare_variables(eliminated.signature, sigma)
    nominal_sigma = back_subst(sigma, nabla, atom_list.with_signature(signature))
    result.solution = (nabla, nominal_sigma)
    result.signature = signature
    result.choice = choice
    logger.debug(f"unifier: {nabla} ; {nominal_sigma}")

    if verify and not check_solution(p, nabla, nominal_sigma):
        raise VerificationError(f"computed solution {nominal_sigma} under {nabla or '(empty)'} does not solve the problem")
    return result


def solve_nominal(p: NominalProblem, atoms: typing.Optional[typing.Sequence[str]] = None,
                  verify: bool = True) -> typing.Optional[Solution]:
    """ a most general nominal unifier ⟨∇, σ⟩ of `p` with Dom(σ) = Vars(p), or None """
    return solve(p, atoms=atoms, verify=verify).solution
