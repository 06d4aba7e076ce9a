"""Error kinds raised by the checker.

Each class name doubles as the ``kind`` string used in corpus manifests and
CLI output.
"""

from __future__ import annotations


class KernelError(Exception):
    def __init__(self, message: str, *, trace: str = ""):
        super().__init__(message)
        self.message = message
        self.trace = trace
        self.decl: str | None = None
        self.span: tuple[str, int, int] | None = None

    @property
    def kind(self) -> str:
        return type(self).__name__

    def located(self, decl: str | None, span: tuple[str, int, int] | None) -> "KernelError":
        if self.decl is None:
            self.decl = decl
        if self.span is None:
            self.span = span
        return self

    def render(self) -> str:
        where = ""
        if self.span is not None:
            where = f" at {self.span[0]}:{self.span[1]}:{self.span[2]}"
        if self.decl:
            where += f" in {self.decl}"
        text = f"{self.kind}{where}: {self.message}"
        return text + ("\n" + self.trace if self.trace else "")


class TypeMismatch(KernelError):
    pass


class UnboundVariable(KernelError):
    pass


class RuleViolation(KernelError):
    pass


class PositivityViolation(KernelError):
    pass


class EliminationRestriction(KernelError):
    pass


class DuplicateName(KernelError):
    pass


class NoOpenSection(KernelError):
    pass


class UnknownIdentifier(KernelError):
    pass


class ParseError(KernelError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset(),
                 file: str = "<input>"):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = expected
        self.span = (file, line, column)


class ManifestError(KernelError):
    pass


class UniverseInconsistency(KernelError):
    def __init__(self, report):
        super().__init__("universe inconsistency", trace=report.render())
        self.report = report
