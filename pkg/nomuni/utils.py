import re
import sys
import typing
import functools
import threading

_NAT_RE = re.compile(r"(\d+)")

_TRUE = {"y", "yes", "t", "true", "on", "1"}
_FALSE = {"n", "no", "f", "false", "off", "0", ""}


def parse_bool(value: typing.Any) -> bool:
    """ Interpret settings values that may come from TOML, the environment or code. """
    if isinstance(value, bool):
        return value
    if value is None:
        return False
    if isinstance(value, (int, float)):
        return bool(value)
    value = str(value).strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ValueError(f"invalid truth value {value!r}")


def natural_key(name: str):
    """ Sort key placing X2 before X10. """
    return [int(p) if p.isdigit() else p for p in _NAT_RE.split(name)]


def fresh_name(prefix: str, taken: typing.Container[str], start: int = 1) -> typing.Tuple[str, int]:
    """ Returns the first `prefix<n>` with n >= start that is not in `taken`, and the next counter. """
    n = start
    while f"{prefix}{n}" in taken:
        n += 1
    return f"{prefix}{n}", n + 1


def compose_swaps(swaps: typing.Iterable[typing.Tuple[typing.Any, typing.Any]]) -> typing.Dict[typing.Any, typing.Any]:
    """ The bijection that applies `swaps` one after the other, first one first, on the names it moves. """
    image, preimage = {}, {}
    for a, b in swaps:
        if a == b:
            continue
        wa, wb = preimage.get(a, a), preimage.get(b, b)
        image[wa], image[wb] = b, a
        preimage[b], preimage[a] = wa, wb
    return image


DEEP_STACK_SIZE = 512 * 1024 * 1024
DEEP_RECURSION_LIMIT = 100_000

_deep = threading.local()
_stack_lock = threading.Lock()
_limit_lock = threading.Lock()
_limit_users = 0
_saved_limit = 0


def _raise_limit():
    global _limit_users, _saved_limit
    with _limit_lock:
        if _limit_users == 0:
            _saved_limit = sys.getrecursionlimit()
            sys.setrecursionlimit(max(_saved_limit, DEEP_RECURSION_LIMIT))
        _limit_users += 1


def _restore_limit():
    global _limit_users
    with _limit_lock:
        _limit_users -= 1
        if _limit_users == 0:
            sys.setrecursionlimit(_saved_limit)


def deep_recursion(func):
    """
    Runs `func` on a worker thread with a large stack and a raised recursion limit, so the recursive
    term walkers cope with deeply nested input. Calls made from inside such a thread run directly.
    A RecursionError is raised as NestingTooDeep, other exceptions pass through unchanged.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if getattr(_deep, "active", False):
            return func(*args, **kwargs)
        outcome = {}

        def target():
            _deep.active = True
            try:
                outcome["value"] = func(*args, **kwargs)
            except BaseException as e:
                outcome["error"] = e

        _raise_limit()
        try:
            with _stack_lock:
                previous = threading.stack_size(DEEP_STACK_SIZE)
                try:
                    worker = threading.Thread(target=target, name=f"nomuni-{func.__name__}", daemon=True)
                    worker.start()
                finally:
                    threading.stack_size(previous)
            worker.join()
        finally:
            _restore_limit()
        if "error" in outcome:
            error = outcome["error"]
            if isinstance(error, RecursionError):
                from nomuni.error import NestingTooDeep
                raise NestingTooDeep("input nests too deeply") from error
            raise error
        return outcome["value"]

    return wrapper
