# -*- coding: utf-8 -*-
"""
Exceptions raised by the curvetop library. The CLI maps them to exit
codes, the library itself never exits.
"""


class CurveTopError(Exception):
    """Base class of every error raised by curvetop."""


class ParseError(CurveTopError, ValueError):
    """
    Raised when a polynomial text does not follow the grammar.
    :param message: What went wrong
    :param line: 1-based line of the offending token
    :param column: 1-based column of the offending token
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f'{message} (line {line}, column {column})')
        self.line = line
        self.column = column


class DivisionNotExact(CurveTopError, ArithmeticError):
    pass


class DivisionByZero(CurveTopError, ZeroDivisionError):
    pass


class UnknownVariable(CurveTopError, KeyError):
    pass


class BothZero(CurveTopError, ValueError):
    pass


class ZeroPolynomial(CurveTopError, ValueError):
    pass


class DegreeOrderViolated(CurveTopError, ValueError):
    pass


class NotSquarefree(CurveTopError, ValueError):
    pass


class LeadingCoefficientVanishes(CurveTopError, ValueError):
    pass


class NotCertifiedGeneric(CurveTopError):
    pass


class NotCertified(CurveTopError):
    pass


class ShearBudgetExhausted(CurveTopError):
    """Raised when no shear of the retry sequence passed certification."""


class CommonComponent(CurveTopError, ValueError):
    """The two input surfaces share a component, so they do not meet in a curve."""


class InternalDivisionNotExact(CurveTopError, AssertionError):
    """An identity that holds by construction failed; this is a bug."""


class ParamDenominatorVanishes(CurveTopError, ArithmeticError):
    pass


class NotANode(CurveTopError):
    pass


class LimitUndetermined(CurveTopError):
    pass


class TopologyInconsistent(CurveTopError, AssertionError):
    """A structural check on fibers or lifted vertices failed."""
