import typing

from .settings import settings
from .utils import parse_bool


class NomuniError(Exception):
    """ Base class of every error raised by nomuni. """


class InputError(NomuniError):
    """ The user supplied problem (or flag) is malformed. """

    def __init__(self, message: str, line: typing.Optional[int] = None, column: typing.Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.location + message)

    @property
    def location(self) -> str:
        if self.line is None:
            return ""
        if self.column is None:
            return f"line {self.line}: "
        return f"line {self.line}, column {self.column}: "


class ProblemSyntaxError(InputError):
    pass


class UnknownSymbolError(InputError):
    pass


class SortError(InputError):
    """ A term or declaration is ill-sorted. """


class SignatureError(InputError):
    """ Inconsistent declarations (overlapping namespaces, undeclared sorts, ...). """


class FreshAtomUnavailable(NomuniError):
    """ A freshness equation needs a second atom of a sort and minting is disabled. """


class TranslationError(NomuniError):
    pass


class LambdaTypeError(NomuniError):
    pass


class NotAPatternError(NomuniError):
    pass


class PreconditionError(NomuniError):
    pass


class CompatibilityError(NomuniError):
    """ A λ-term has no nominal counterpart under the given freshness environment. """

    def __init__(self, message: str, subterm=None):
        self.subterm = subterm
        if subterm is not None:
            message = f"{message}: {subterm}"
        super().__init__(message)


class VerificationError(NomuniError):
    """ A computed solution failed the ≈/# oracle. """


class NestingTooDeep(NomuniError):
    """ A term nests deeper than the recursive term walkers can follow. """


def sentry_error_handler(event, hint):
    if not parse_bool(settings.value("errorReporting/enabled")):
        return None
    exc_info = hint.get("exc_info")
    if exc_info is not None and isinstance(exc_info[1], InputError):
        return None
    return event
