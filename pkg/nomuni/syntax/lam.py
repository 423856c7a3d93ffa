"""
Text syntax of λ-terms, as printed by `format_term`: `\a b. f (X a b) b`.

Types are not written. Binders and free bound-variable occurrences must be atoms of the signature,
function symbols become constants, and declared variables become free variables whose type is read
off their arguments and their sort.
"""
import typing

from lark import Lark, Tree
from lark.exceptions import UnexpectedInput

from nomuni.error import LambdaTypeError, ProblemSyntaxError, UnknownSymbolError
from nomuni.lambda_core import eta_long_normalize, type_of
from nomuni.models.lam import Base, BoundVar, Const, FreeVar, Lam, LambdaTerm, LambdaType, arrows, mk_app
from nomuni.models.nominal import Signature
from nomuni.translate import translate_sort

GRAMMAR = r"""
    ?term: "\\" NAME+ "." term   -> lam
         | app

    ?app: operand+

    ?operand: NAME               -> name
            | "(" term ")"

    NAME: /[A-Za-z_][A-Za-z0-9_']*/

    %import common.WS
    %ignore WS
"""

_parser = Lark(GRAMMAR, start="term", parser="earley")


class _TermBuilder:
    def __init__(self, signature: Signature):
        self.signature = signature

    def binder_type(self, name: str) -> LambdaType:
        if name not in self.signature.atoms:
            raise UnknownSymbolError(f"binder {name} is not a declared atom")
        return Base(self.signature.atoms[name].sort)

    def head(self, name: str, scope: typing.Mapping[str, LambdaType], args: typing.Sequence[LambdaTerm]) -> LambdaTerm:
        if name in scope:
            return BoundVar(name, scope[name])
        if name in self.signature.atoms:
            return BoundVar(name, Base(self.signature.atoms[name].sort))
        if name in self.signature.function_symbols:
            return Const(name, translate_sort(self.signature.function_symbols[name]))
        if name in self.signature.variable_sorts:
            return FreeVar(name, arrows([type_of(a) for a in args], Base(self.signature.variable_sorts[name])))
        raise UnknownSymbolError(f"unknown symbol {name}")

    def build(self, tree, scope: typing.Mapping[str, LambdaType]) -> LambdaTerm:
        match tree.data:
            case "lam":
                *names, body = tree.children
                inner = dict(scope)
                binders = []
                for name in names:
                    ty = self.binder_type(str(name))
                    inner[str(name)] = ty
                    binders.append((str(name), ty))
                term = self.build(body, inner)
                for name, ty in reversed(binders):
                    term = Lam(name, ty, term)
                return term
            case "app":
                first, *rest = tree.children
                args = [self.build(a, scope) for a in rest]
                if isinstance(first, Tree) and first.data == "name":
                    head = self.head(str(first.children[0]), scope, args)
                else:
                    head = self.build(first, scope)
                return mk_app(head, args)
            case "name":
                return self.head(str(tree.children[0]), scope, ())
        raise ProblemSyntaxError(f"unexpected {tree.data}")


def parse_lambda_term(text: str, signature: Signature) -> LambdaTerm:
    """ the η-long β-normal form of the λ-term written in `text` """
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as e:
        raise ProblemSyntaxError(f"malformed λ-term {text!r}", getattr(e, "line", None),
                                 getattr(e, "column", None)) from None
    term = _TermBuilder(signature).build(tree, {})
    try:
        return eta_long_normalize(term)
    except LambdaTypeError as e:
        raise LambdaTypeError(f"{text}: {e}") from None
