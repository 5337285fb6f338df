"""
Initial-datum expressions such as ``"clip(-0.4 * x, -0.4, 0.4)"`` or ``"[1 + 0.1 * sin(x), 0]"``.

Expressions are parsed with :mod:`ast` and evaluated by walking the tree, so only the names,
functions and operators listed here are reachable.
"""

from __future__ import annotations

import ast
import math
import operator
from typing import Any, Callable, Dict

import numpy as np

from fronttrack.errors import ConfigError

VARIABLE = "x"

CONSTANTS: Dict[str, float] = {"pi": math.pi, "e": math.e}

FUNCTIONS: Dict[str, Callable[..., Any]] = {
    "abs": abs,
    "min": min,
    "max": max,
    "clip": lambda v, lo, hi: float(np.clip(v, lo, hi)),
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "tanh": math.tanh,
}

BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.Mod: operator.mod,
}

UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}

COMPARE = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}


def _check(node: ast.AST, source: str) -> None:
    """Reject every node the evaluator does not know before anything is evaluated."""
    for child in ast.walk(node):
        if isinstance(child, (ast.Expression, ast.Load, ast.List, ast.Tuple, ast.IfExp, ast.BoolOp, ast.And, ast.Or)):
            continue
        if isinstance(child, ast.Constant):
            if isinstance(child.value, bool) or not isinstance(child.value, (int, float)):
                raise ConfigError(f"only numeric literals are allowed in {source!r}")
        elif isinstance(child, ast.Name):
            if child.id != VARIABLE and child.id not in CONSTANTS and child.id not in FUNCTIONS:
                raise ConfigError(f"unknown name {child.id!r} in {source!r}")
        elif isinstance(child, ast.Call):
            if not isinstance(child.func, ast.Name) or child.func.id not in FUNCTIONS:
                raise ConfigError(f"unsupported call in {source!r}")
            if child.keywords:
                raise ConfigError(f"keyword arguments are not allowed in {source!r}")
        elif isinstance(child, ast.BinOp):
            if type(child.op) not in BINARY:
                raise ConfigError(f"operator {type(child.op).__name__} is not allowed in {source!r}")
        elif isinstance(child, ast.UnaryOp):
            if type(child.op) not in UNARY:
                raise ConfigError(f"operator {type(child.op).__name__} is not allowed in {source!r}")
        elif isinstance(child, ast.Compare):
            if len(child.ops) != 1 or type(child.ops[0]) not in COMPARE:
                raise ConfigError(f"only single <, <=, >, >= comparisons are allowed in {source!r}")
        elif isinstance(child, (ast.operator, ast.unaryop, ast.cmpop)):
            continue
        else:
            raise ConfigError(f"{type(child).__name__} is not allowed in {source!r}")


def _eval(node: ast.AST, x: float) -> Any:
    if isinstance(node, ast.Expression):
        return _eval(node.body, x)
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        if node.id == VARIABLE:
            return x
        return CONSTANTS[node.id]
    if isinstance(node, ast.BinOp):
        return BINARY[type(node.op)](_eval(node.left, x), _eval(node.right, x))
    if isinstance(node, ast.UnaryOp):
        return UNARY[type(node.op)](_eval(node.operand, x))
    if isinstance(node, ast.Compare):
        return COMPARE[type(node.ops[0])](_eval(node.left, x), _eval(node.comparators[0], x))
    if isinstance(node, ast.BoolOp):
        values = (_eval(v, x) for v in node.values)
        return all(values) if isinstance(node.op, ast.And) else any(values)
    if isinstance(node, ast.IfExp):
        return _eval(node.body, x) if _eval(node.test, x) else _eval(node.orelse, x)
    if isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](*(_eval(a, x) for a in node.args))
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_eval(e, x) for e in node.elts]
    raise ConfigError(f"cannot evaluate {type(node).__name__}")


def compile_expression(source: str) -> Callable[[float], Any]:
    """Function of x; a list expression gives one value per component."""
    if not isinstance(source, str) or not source.strip():
        raise ConfigError("expression must be a non-empty string")
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"invalid expression {source!r}: {exc.msg}") from exc
    _check(tree, source)

    def u0(x: float) -> Any:
        try:
            return _eval(tree, float(x))
        except (ArithmeticError, ValueError) as exc:
            raise ConfigError(f"{source!r} cannot be evaluated at x={x:g}: {exc}") from exc

    u0.__doc__ = source
    return u0
