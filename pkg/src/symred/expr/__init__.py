"""Exact symbolic expression kernel."""

from .core import (
    ONE,
    ZERO,
    Binding,
    DivisionByZeroError,
    E1,
    Expr,
    ExprError,
    coefficients,
    const,
    derivation,
    differentiate,
    erf,
    eval_numeric,
    exp,
    is_zero,
    power,
    sqrt,
    substitute,
    symbol,
    symbols,
    tanh,
)
from .numeric import DomainError, PoleError, UnboundSymbolError, lambdify
from .parser import ParseError, parse

__all__ = [
    "ONE", "ZERO", "Binding", "DivisionByZeroError", "DomainError", "E1", "Expr",
    "ExprError", "ParseError", "PoleError", "UnboundSymbolError", "coefficients",
    "const", "derivation", "differentiate", "erf", "eval_numeric", "exp", "is_zero",
    "lambdify", "parse", "power", "sqrt", "substitute", "symbol", "symbols", "tanh",
]
