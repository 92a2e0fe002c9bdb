"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class RSWorkError(Exception):
    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"code": self.code, "message": str(self)}
        for k, v in self.details.items():
            out[k] = _jsonable(v)
        return out


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    try:
        return int(v)
    except (TypeError, ValueError):
        return str(v)


class StructureError(RSWorkError):
    """Input is not a semigroup/category of the expected kind."""
    code = "structure"


class NotRestrictionError(StructureError):
    """Structure maps cannot be derived (no minimal fixing projection)."""
    code = "not_restriction"


class GuardError(RSWorkError):
    code = "guard"


class UnsupportedStructureError(RSWorkError):
    code = "unsupported"


class TruncationError(RSWorkError):
    """A product left the truncation window where an exact answer is required."""
    code = "truncation"


class ValidationError(RSWorkError):
    code = "validation"


class InternalConsistencyError(RSWorkError):
    """Two routes to the same quantity disagreed. Always a bug."""
    code = "internal"


class ConvergenceError(RSWorkError):
    code = "convergence"


class DSLError(RSWorkError):
    code = "syntax"

    def __init__(self, message, line=None, col=None, **details):
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + where, line=line, col=col, **details)
        self.line = line
        self.col = col


class DSLSemanticError(DSLError):
    code = "semantic"
