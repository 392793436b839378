__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"


class HytransError(Exception):
    """
    Base class for errors raised by hytrans.
    """

    exit_code = 1


class ValidationError(HytransError, ValueError):
    """
    An input document, operator or parameter set violates its constraints.
    """

    exit_code = 2


class CapacityError(HytransError):
    """
    A spin system is larger than the dense engine (or the explicit engine) accepts.
    """

    exit_code = 2


class NumericalCheckError(HytransError):
    """
    A numerical comparison exceeded its threshold.
    """

    exit_code = 3


class PeakFitError(HytransError):
    """
    A spectrum holds fewer maxima than requested, or too few noise bins.
    """

    exit_code = 3
