from django.core import exceptions as django_exceptions


class SummabilityError(Exception):
    pass


class StructuralError(SummabilityError, ValueError):
    """Dimension or arity mismatch between a value and its space"""


class DomainError(SummabilityError, ValueError):
    """A parameter lies outside the set where the operation is defined"""


class DegenerateInputError(SummabilityError, ValueError):
    pass


class BudgetError(SummabilityError):
    """The requested computation exceeds a configured size budget"""


class ValidityError(SummabilityError, ValueError):
    """A bound formula was requested outside the range where it is claimed"""


class ConfigError(SummabilityError):
    pass


class ImproperlyConfigured(SummabilityError,
                           django_exceptions.ImproperlyConfigured):
    pass
