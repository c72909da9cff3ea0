"""Exception types shared across mergeifc."""


class MJError(Exception):
    code = "ERROR"


class ParseError(MJError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class ResolveError(MJError):
    code = "RESOLVE_ERROR"

    def __init__(self, message: str, symbol: str = ""):
        super().__init__(message)
        self.symbol = symbol


class TooHeavy(MJError):
    """SDG construction exceeded a configured node or edge limit."""

    code = "TOO_HEAVY"

    def __init__(self, kind: str, count: int, limit: int):
        super().__init__(f"SDG too heavy: {count} {kind} > limit {limit}")
        self.kind = kind
        self.count = count
        self.limit = limit


class AnalysisTimeout(MJError):
    code = "TIMEOUT"


class NoSourceOrSink(MJError):
    code = "NO_SOURCE_OR_SINK"


class SchemaError(MJError):
    code = "SCHEMA_ERROR"
