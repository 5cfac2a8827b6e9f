# -*- coding: utf-8 -*-
"""Exception hierarchy shared by every workbench module."""

from typing import Optional


class HerbrandError(ValueError):
    """Root of all workbench errors."""


class ConfigurationError(HerbrandError):
    pass


class ParseError(HerbrandError):
    """Lexical or syntactic problem, reported with a source position."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SignatureError(ParseError):
    """Unknown symbol, duplicate name or arity mismatch."""


class SubstitutionError(HerbrandError):
    pass


class BudgetExceededError(HerbrandError):
    """A desk-scale limit was hit; never silently truncated."""

    def __init__(self, resource: str, limit: int, requested: Optional[int] = None):
        self.resource = resource
        self.limit = limit
        self.requested = requested
        detail = f"{resource} budget {limit} exceeded"
        if requested is not None:
            detail += f" (requested {requested})"
        super().__init__(detail)


class BruteForceRefusedError(BudgetExceededError):
    pass


class CodingOverflowError(BudgetExceededError):
    pass


class AtomOutsideTableError(HerbrandError):
    """The formula mentions an atom that is not over Λ, i.e. it is not available."""


class InsufficientSpreadError(HerbrandError):
    pass


class UnboundedQuantifierError(HerbrandError):
    pass


class CertificateError(HerbrandError):
    pass


class FixtureError(HerbrandError):
    pass
