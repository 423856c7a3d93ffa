"""
Rendering of nominal solutions ⟨∇, σ⟩.

Text:

    nabla: b # X7
    subst: X6 -> (b a).X7 ; X7 -> X7

JSON terms are {"atom": a}, {"fun": f, "args": [...]}, {"abs": a, "body": t} and
{"var": X, "perm": [[a, b], ...]}, swappings listed leftmost first.
"""
import json
import typing

from nomuni.error import InputError
from nomuni.models.nominal import (
    Abs, Atom, AtomTerm, FreshConstraint, FreshnessEnv, Fun, NominalSubst, NominalTerm, Permutation, Susp,
    Swapping,
)
from nomuni.oracle import Solution, solution_atoms
from nomuni.utils import natural_key

TEXT = "text"
JSON = "json"
FORMATS = (TEXT, JSON)


def _sorted_bindings(sigma: NominalSubst) -> typing.List[typing.Tuple[str, NominalTerm]]:
    return [(x, sigma[x]) for x in sorted(sigma.domain, key=natural_key)]


def format_text(sol: Solution) -> str:
    nabla, sigma = sol
    nabla_text = ", ".join(str(c) for c in nabla) if len(nabla) else "(empty)"
    subst_text = " ; ".join(f"{x} -> {t}" for x, t in _sorted_bindings(sigma)) if len(sigma) else "(identity)"
    return f"nabla: {nabla_text}\nsubst: {subst_text}"


def term_to_json(t: NominalTerm) -> dict:
    match t:
        case AtomTerm(atom):
            return {"atom": atom.name}
        case Fun(symbol, args):
            return {"fun": symbol, "args": [term_to_json(a) for a in args]}
        case Abs(atom, body):
            return {"abs": atom.name, "body": term_to_json(body)}
        case Susp(perm, name):
            return {"var": name, "perm": [[s.left.name, s.right.name] for s in perm.swaps]}
    raise TypeError(f"not a nominal term: {t!r}")


def solution_to_json(sol: Solution) -> dict:
    nabla, sigma = sol
    atoms = sorted(solution_atoms(sol), key=lambda a: natural_key(a.name))
    return {
        "status": "solved",
        "atoms": {a.name: a.sort for a in atoms},
        "nabla": [[c.atom.name, c.var] for c in nabla],
        "subst": {x: term_to_json(t) for x, t in _sorted_bindings(sigma)},
    }


def format_solution(sol: Solution, mode: str = TEXT) -> str:
    if mode == TEXT:
        return format_text(sol)
    if mode == JSON:
        return json.dumps(solution_to_json(sol), ensure_ascii=False)
    raise ValueError(f"unknown output format {mode!r}, expected one of {', '.join(FORMATS)}")


def term_from_json(data: dict, atoms: typing.Mapping[str, Atom]) -> NominalTerm:
    def atom(name):
        try:
            return atoms[name]
        except KeyError:
            raise InputError(f"atom {name} is missing from the atom table") from None

    if "atom" in data:
        return AtomTerm(atom(data["atom"]))
    if "fun" in data:
        return Fun(data["fun"], tuple([term_from_json(a, atoms) for a in data.get("args", [])]))
    if "abs" in data:
        return Abs(atom(data["abs"]), term_from_json(data["body"], atoms))
    if "var" in data:
        swaps = tuple(Swapping(atom(a), atom(b)) for a, b in data.get("perm", []))
        return Susp(Permutation(swaps), data["var"])
    raise InputError(f"not a term: {data!r}")


def parse_solution_json(text: str) -> Solution:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e.msg}", e.lineno, e.colno) from None
    if data.get("status") != "solved":
        raise InputError(f"not a solution document: status {data.get('status')!r}")
    atoms = {name: Atom(name, sort) for name, sort in data.get("atoms", {}).items()}
    if missing := [a for a, _ in data.get("nabla", []) if a not in atoms]:
        raise InputError(f"atoms {', '.join(missing)} are missing from the atom table")
    nabla = FreshnessEnv(frozenset(FreshConstraint(atoms[a], x) for a, x in data.get("nabla", [])))
    sigma = NominalSubst({x: term_from_json(t, atoms) for x, t in data.get("subst", {}).items()})
    return nabla, sigma
