"""Exception hierarchy shared by every module of the kit."""


class FermatKitError(Exception):
    """Base class for all errors raised by fermat_kit."""


class BackendMismatch(FermatKitError, TypeError):
    """Exact and float scalars were combined in one computation."""


class DivisionByZero(FermatKitError, ZeroDivisionError):
    pass


class NonInvertible(FermatKitError, ArithmeticError):
    """An exact scalar with more than one term cannot be inverted exactly."""


class NonExactExponential(FermatKitError, ValueError):
    """e^x was requested in exact mode for an undeclared argument x."""

    def __init__(self, arg, hint=None):
        self.arg = arg
        msg = f"e^({arg}) is not exactly known"
        msg += "; " + (hint or "declare it in the context or switch to the float backend")
        super().__init__(msg)


class DuplicateExponential(FermatKitError, ValueError):
    pass


class EvalOverflow(FermatKitError, OverflowError):
    pass


class InvalidOperator(FermatKitError, ValueError):
    pass


class InvalidEquation(FermatKitError, ValueError):
    pass


class EvenK(FermatKitError, ValueError):
    pass


class NonPolynomialQuotient(FermatKitError, ValueError):
    pass


class ConsistencyFailure(FermatKitError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateParameters(FermatKitError, ValueError):
    pass


class ExclusionViolated(FermatKitError, ValueError):
    pass


class Infeasible(FermatKitError):
    """A shift-coefficient system has no solution.

    ``rule`` names the reason: ``unimodular_shift`` (e^{ac} = +-1),
    ``difference_operator`` (the pinned pair a0=-1, a1=1) or
    ``pinned_contradiction``.  ``certificate`` optionally carries the
    symbolic evidence (see builder.shift_system_certificate).
    """

    def __init__(self, message, rule, certificate=None):
        super().__init__(message)
        self.rule = rule
        self.certificate = certificate


class LeadingCoefficientZero(FermatKitError, ValueError):
    pass


class ZeroW(FermatKitError, ValueError):
    pass


class BudgetExceeded(FermatKitError):
    pass


class SpecError(FermatKitError, ValueError):
    """Base for spec-file problems; carries an optional location."""

    def __init__(self, message, line=None, column=None, path=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.path = path

    def to_json(self):
        out = {"error": type(self).__name__, "message": str(self)}
        if self.line is not None:
            out["line"] = self.line
            out["column"] = self.column
        if self.path is not None:
            out["path"] = self.path
        return out


class SpecSyntaxError(SpecError):
    pass


class SchemaError(SpecError):
    pass


class SpecDuplicateExponential(SpecError, DuplicateExponential):
    pass
