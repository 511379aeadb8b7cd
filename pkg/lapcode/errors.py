import logging

logger = logging.getLogger(__name__)


class LapcodeError(Exception):
    exit_code = 1


class ParseError(LapcodeError):
    exit_code = 2

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InvalidGraphError(LapcodeError):
    exit_code = 2


class MatrixError(LapcodeError, ValueError):
    exit_code = 2


class ResourceGuardError(LapcodeError):
    exit_code = 3

    def __init__(self, what: str, size: int, limit: int, message: str | None = None):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(message or (
            f"{what} has {size} elements, above the enumeration guard {limit} "
            f"(raise LAPCODE_GUARD_LIMIT to allow it)"
        ))


class NotReflexiveError(LapcodeError):
    exit_code = 4


class OracleMismatchError(LapcodeError):
    exit_code = 5


def check_guard(what: str, size: int, limit: int) -> None:
    if size > limit:
        raise ResourceGuardError(what, size, limit)
    if size > limit // 2:
        logger.warning(f"{what}: {size} elements, close to the guard {limit}")
