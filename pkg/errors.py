class TeslerError(Exception):
    """Base class for everything this toolkit raises on purpose."""


class InvalidMatrixError(TeslerError, ValueError):
    pass


class InvalidHookVectorError(TeslerError, ValueError):
    pass


class ResourceLimitError(TeslerError):
    def __init__(self, what, limit, needed=None):
        self.what = what
        self.limit = limit
        self.needed = needed
        detail = f" (needs at least {needed})" if needed is not None else ""
        super().__init__(f"{what} exceeds the configured ceiling of {limit}{detail}")


class VerificationError(TeslerError):
    """An identity that must hold exactly did not (e.g. an inexact division)."""


class UnsupportedInputError(TeslerError, ValueError):
    pass
