"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit status the CLI reports for it.
"""


class ArborealError(Exception):
    exit_code = 1

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class PreconditionError(ArborealError, ValueError):
    """An input violates a documented precondition."""

    exit_code = 1


class ResourceError(ArborealError):
    """A configured budget (degree cap, factoring effort, enumeration size) was exceeded."""

    exit_code = 2


class VerificationError(ArborealError):
    """A computed value disagrees with an expected one."""

    exit_code = 3
