"""Exception types.  Every engine error names the rule whose hypothesis failed."""


class EngineError(Exception):
    rule = "engine"

    def __init__(self, message: str, rule: str | None = None):
        super().__init__(message)
        if rule is not None:
            self.rule = rule

    def render(self) -> str:
        return f"error [{self.rule}]: {self}"


class UndefinedFdim(EngineError):
    rule = "free dimension rules"


class UnsupportedCase(EngineError):
    rule = "free product normal form"


class NotAFactor(EngineError):
    rule = "rescaling"


class UnrealizableScale(EngineError):
    rule = "matrix compression"


class PreconditionViolated(EngineError):
    rule = "free trade"

    def __init__(self, message: str, deficit=None, rule: str | None = None):
        super().__init__(message, rule)
        self.deficit = deficit


class NotLicensed(EngineError):
    rule = "stable absorption"


class IllFormed(EngineError):
    rule = "well-formedness"


class MalformedCertificate(EngineError):
    rule = "certificate replay"


class ParseError(Exception):
    """A diagnostic with a 1-based line/column position."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{self.line}:{self.column}: {message}")
