"""Exception hierarchy shared by every hhverify module."""


class HHVerifyError(Exception):
    """Base class for all errors raised by hhverify."""


class DomainError(HHVerifyError, ValueError):
    """An argument lies outside the domain of a special function."""


class ParameterError(HHVerifyError, ValueError):
    """Inadmissible bound or integration parameters (e.g. ``a >= m*b``)."""


class EvaluationError(HHVerifyError, ArithmeticError):
    """A user function returned a non-finite value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ConvergenceError(HHVerifyError, ArithmeticError):
    """Adaptive quadrature hit its depth limit before meeting the tolerance.

    ``result`` holds the best available :class:`~hhverify.quad.QuadResult`.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigError(HHVerifyError, ValueError):
    """Invalid sweep configuration. ``fields`` names every offending field."""

    def __init__(self, fields):
        self.fields = dict(fields)
        detail = "; ".join(f"{k}: {v}" for k, v in self.fields.items())
        super().__init__(f"invalid configuration: {detail}")
