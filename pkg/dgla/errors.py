EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERDICT = 3
EXIT_TRUNCATION = 4


class DglaError(Exception):
    exit_code = 1

    def __init__(self, message: str, module: str = None):
        super().__init__(message)
        self.module = module

    def __str__(self):
        msg = super().__str__()
        if self.module:
            return f"[{self.module}] {msg}"
        return msg


class InputError(DglaError):
    """
    Schema violations, malformed rationals, degree discipline.
    """

    exit_code = EXIT_INPUT


class VerdictError(DglaError):
    """
    A certification or identity check failed on exact data.
    """

    exit_code = EXIT_VERDICT


class TruncationError(DglaError):
    exit_code = EXIT_TRUNCATION
