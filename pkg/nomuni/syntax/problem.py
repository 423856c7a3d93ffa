"""
Text format of nominal unification problems:

    % comment
    atom a b c : N.
    var X Y : D.
    fun f : N * D -> D.
    fun lam : <N>D -> D.
    eq a.b.f(X, b) ~ b.a.f(a, (a b).Y).
    fresh a # lam(b.X).

Declarations may appear anywhere in the file. Sorts of atoms are atom sorts, every other sort is a
data sort.
"""
import typing

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from nomuni.error import InputError, ProblemSyntaxError, SignatureError, SortError, UnknownSymbolError
from nomuni.models.nominal import (
    IDENTITY, Abs, AbstractionSort, Arity, Atom, AtomTerm, BaseSort, Eq, Fresh, Fun, NominalProblem,
    NominalTerm, Permutation, Signature, Sort, Susp, Swapping, sort_names, sort_of,
)
from nomuni.utils import deep_recursion

GRAMMAR = r"""
    start: statement*

    ?statement: atom_decl | var_decl | fun_decl | eq_stmt | fresh_stmt

    atom_decl: "atom" NAME+ ":" NAME "."
    var_decl: "var" NAME+ ":" NAME "."
    fun_decl: "fun" NAME ":" arity "."
    eq_stmt: "eq" term "~" term "."
    fresh_stmt: "fresh" NAME "#" term "."

    arity: sort (PRODUCT sort)* ARROW NAME  -> function_arity
         | NAME                             -> constant_arity

    sort: NAME                -> base_sort
        | "<" NAME ">" sort   -> abstraction_sort

    ?term: NAME "." term                      -> abstraction
         | swap+ SUSP_DOT NAME                -> suspension
         | NAME "(" [term ("," term)*] ")"    -> application
         | NAME                               -> name
         | "(" term ")"

    swap: "(" NAME NAME ")"

    NAME: /(?!(atom|var|fun|eq|fresh)\b)[A-Za-z_][A-Za-z0-9_']*/
    SUSP_DOT: "." | "·"
    ARROW: "->" | "→"
    PRODUCT: "*" | "×"
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(GRAMMAR, start="start", parser="earley", propagate_positions=True)


def _position(node) -> typing.Tuple[typing.Optional[int], typing.Optional[int]]:
    if isinstance(node, Token):
        return node.line, node.column
    meta = getattr(node, "meta", None)
    if meta is None or getattr(meta, "empty", True):
        return None, None
    return meta.line, meta.column


def _located(error: InputError, node) -> InputError:
    if error.line is not None:
        return error
    line, column = _position(node)
    return type(error)(error.message, line, column)


class _ProblemBuilder:
    def __init__(self):
        self.atom_decls: typing.Dict[str, typing.Tuple[str, Token]] = {}
        self.var_decls: typing.Dict[str, typing.Tuple[str, Token]] = {}
        self.fun_decls: typing.Dict[str, typing.Tuple[Tree, Token]] = {}
        self.signature: typing.Optional[Signature] = None

    def declare(self, table, name: Token, value):
        for kind, other in (("an atom", self.atom_decls), ("a variable", self.var_decls),
                            ("a function symbol", self.fun_decls)):
            if name in other:
                raise SignatureError(f"{name} is already declared as {kind}", name.line, name.column)
        table[str(name)] = (value, name)

    def collect(self, tree: Tree):
        for statement in tree.children:
            match statement.data:
                case "atom_decl":
                    *names, sort = statement.children
                    for name in names:
                        self.declare(self.atom_decls, name, str(sort))
                case "var_decl":
                    *names, sort = statement.children
                    for name in names:
                        self.declare(self.var_decls, name, str(sort))
                case "fun_decl":
                    name, arity = statement.children
                    self.declare(self.fun_decls, name, arity)

    def sort(self, tree: Tree, atom_sorts: typing.Set[str]) -> Sort:
        if tree.data == "base_sort":
            return BaseSort(str(tree.children[0]))
        atom_sort, body = tree.children
        if str(atom_sort) not in atom_sorts:
            raise SortError(f"{atom_sort} in an abstraction sort is not an atom sort", atom_sort.line, atom_sort.column)
        return AbstractionSort(str(atom_sort), self.sort(body, atom_sorts))

    def arity(self, tree: Tree, atom_sorts: typing.Set[str]) -> Arity:
        if tree.data == "constant_arity":
            return Arity((), str(tree.children[0]))
        *parts, _, result = tree.children
        args = [self.sort(p, atom_sorts) for p in parts if isinstance(p, Tree)]
        return Arity(tuple(args), str(result))

    def build_signature(self) -> Signature:
        atom_sorts = {sort for sort, _ in self.atom_decls.values()}
        functions = {}
        for name, (tree, token) in self.fun_decls.items():
            arity = self.arity(tree, atom_sorts)
            if arity.result in atom_sorts:
                raise SortError(f"{name} returns atom sort {arity.result}", token.line, token.column)
            functions[name] = arity
        data_sorts = {sort for sort, _ in self.var_decls.values() if sort not in atom_sorts}
        for arity in functions.values():
            data_sorts.add(arity.result)
            data_sorts.update(n for s in arity.args for n in sort_names(s) if n not in atom_sorts)
        return Signature(
            atom_sorts=frozenset(atom_sorts),
            data_sorts=frozenset(data_sorts),
            function_symbols=functions,
            variable_sorts={name: sort for name, (sort, _) in self.var_decls.items()},
            atoms={name: Atom(name, sort) for name, (sort, _) in self.atom_decls.items()},
        )

    def atom(self, token: Token) -> Atom:
        if token not in self.signature.atoms:
            raise UnknownSymbolError(f"{token} is not a declared atom", token.line, token.column)
        return self.signature.atoms[str(token)]

    def term(self, tree) -> NominalTerm:
        match tree.data:
            case "abstraction":
                atom, body = tree.children
                return Abs(self.atom(atom), self.term(body))
            case "suspension":
                *swaps, _, name = tree.children
                if name not in self.signature.variable_sorts:
                    raise UnknownSymbolError(f"{name} is not a declared variable", name.line, name.column)
                pairs = []
                for swap in swaps:
                    left, right = swap.children
                    try:
                        pairs.append(Swapping(self.atom(left), self.atom(right)))
                    except InputError as e:
                        raise _located(e, left) from None
                return Susp(Permutation(tuple(pairs)), str(name))
            case "application":
                symbol, *args = tree.children
                if symbol not in self.signature.function_symbols:
                    raise UnknownSymbolError(f"{symbol} is not a declared function symbol", symbol.line, symbol.column)
                return Fun(str(symbol), tuple([self.term(a) for a in args if a is not None]))
            case "name":
                token = tree.children[0]
                if token in self.signature.atoms:
                    return AtomTerm(self.signature.atoms[str(token)])
                if token in self.signature.variable_sorts:
                    return Susp(IDENTITY, str(token))
                if token in self.signature.function_symbols:
                    return Fun(str(token), ())
                raise UnknownSymbolError(f"unknown symbol {token}", token.line, token.column)
        raise ProblemSyntaxError(f"unexpected {tree.data}", *_position(tree))

    def equation(self, statement: Tree):
        if statement.data == "eq_stmt":
            lhs, rhs = (self.term(t) for t in statement.children)
            equation = Eq(lhs, rhs)
            left, right = sort_of(lhs, self.signature), sort_of(rhs, self.signature)
            if left != right:
                raise SortError(f"sides of {equation} have sorts {left} and {right}")
            return equation
        atom, term = statement.children
        equation = Fresh(self.atom(atom), self.term(term))
        sort_of(equation.term, self.signature)
        return equation

    def build(self, tree: Tree) -> NominalProblem:
        self.collect(tree)
        self.signature = self.build_signature()
        equations = []
        for statement in tree.children:
            if statement.data in ("eq_stmt", "fresh_stmt"):
                try:
                    equations.append(self.equation(statement))
                except InputError as e:
                    raise _located(e, statement) from None
        return NominalProblem(tuple(equations), self.signature)


@deep_recursion
def parse_problem(text: str) -> NominalProblem:
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF as e:
        raise ProblemSyntaxError("unexpected end of input, missing '.'?", e.line if e.line > 0 else None,
                                 e.column if e.column > 0 else None) from None
    except UnexpectedCharacters as e:
        raise ProblemSyntaxError(f"unexpected character {text[e.pos_in_stream]!r}", e.line, e.column) from None
    except UnexpectedToken as e:
        raise ProblemSyntaxError(f"unexpected {e.token!r}", e.line, e.column) from None
    except UnexpectedInput as e:
        raise ProblemSyntaxError(str(e), getattr(e, "line", None), getattr(e, "column", None)) from None
    return _ProblemBuilder().build(tree)
