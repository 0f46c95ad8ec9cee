"""A deliberately tiny arithmetic expression language for scenarios.

Scenario files describe closed-form rates, flows, matrices, and
forcing profiles as strings like ``"exp(mu(s) - mu(t))"``.  The
grammar is arithmetic (+, -, *, /, **, unary sign), a fixed function
whitelist, and named variables; nothing else parses.  Validation
walks the syntax tree and rejects any other construct by name, so the
subsequent evaluation of the compiled tree cannot reach beyond the
supplied environment.

``piecewise(x, a, b)`` selects ``a`` when ``x < 0`` and ``b``
otherwise; it is the only branching primitive, and only the selected
branch is evaluated (bump profiles divide by zero on the dead one).
"""

from __future__ import annotations

import ast
import math
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError

_ALLOWED_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}
_ALLOWED_UNARY = {
    ast.UAdd: lambda a: +a,
    ast.USub: lambda a: -a,
}


def _sign(x: float) -> float:
    return float(np.sign(x))


def _piecewise(x: float, neg: float, nonneg: float) -> float:
    return neg if x < 0 else nonneg


BASE_FUNCTIONS: dict[str, Callable] = {
    "exp": math.exp,
    "ln": math.log,
    "log": math.log,
    "abs": abs,
    "sign": _sign,
    "min": min,
    "max": max,
    "pow": pow,
    "piecewise": _piecewise,
}

BASE_CONSTANTS: dict[str, float] = {
    "pi": math.pi,
    "e": math.e,
    "inf": math.inf,
}


def compile_expr(
    text: str,
    variables: Sequence[str],
    functions: Mapping[str, Callable] | None = None,
) -> Callable[..., float]:
    """Compile an expression into ``fn(*variable values) -> float``.

    Unknown names, attribute access, subscripts, comparisons, and
    every other non-arithmetic construct raise ConfigError up front,
    quoting the offending fragment.
    """
    fns = dict(BASE_FUNCTIONS)
    if functions:
        fns.update(functions)
    names = set(variables)

    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}")

    def check(node: ast.AST) -> None:
        if isinstance(node, ast.Expression):
            check(node.body)
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _ALLOWED_BINOPS:
                raise ConfigError(
                    f"operator {type(node.op).__name__} is not allowed "
                    f"in {text!r}"
                )
            check(node.left)
            check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if type(node.op) not in _ALLOWED_UNARY:
                raise ConfigError(
                    f"operator {type(node.op).__name__} is not allowed "
                    f"in {text!r}"
                )
            check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.keywords:
                raise ConfigError(
                    f"only plain calls to named functions are allowed "
                    f"in {text!r}"
                )
            if node.func.id not in fns:
                raise ConfigError(
                    f"unknown function {node.func.id!r} in {text!r}"
                )
            if node.func.id == "piecewise" and len(node.args) != 3:
                raise ConfigError(
                    f"piecewise takes exactly 3 arguments in {text!r}"
                )
            for arg in node.args:
                check(arg)
        elif isinstance(node, ast.Name):
            if node.id not in names and node.id not in BASE_CONSTANTS:
                raise ConfigError(
                    f"unknown variable {node.id!r} in {text!r} "
                    f"(expected one of {sorted(names)})"
                )
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ConfigError(
                    f"literal {node.value!r} is not a number in {text!r}"
                )
        else:
            raise ConfigError(
                f"construct {type(node).__name__} is not allowed in {text!r}"
            )

    check(tree)

    def evaluate(node: ast.AST, env: dict[str, float]) -> float:
        if isinstance(node, ast.Expression):
            return evaluate(node.body, env)
        if isinstance(node, ast.BinOp):
            return _ALLOWED_BINOPS[type(node.op)](
                evaluate(node.left, env), evaluate(node.right, env))
        if isinstance(node, ast.UnaryOp):
            return _ALLOWED_UNARY[type(node.op)](evaluate(node.operand, env))
        if isinstance(node, ast.Call):
            if node.func.id == "piecewise":
                branch = 1 if evaluate(node.args[0], env) < 0 else 2
                return evaluate(node.args[branch], env)
            return fns[node.func.id](
                *(evaluate(a, env) for a in node.args))
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            return BASE_CONSTANTS[node.id]
        if isinstance(node, ast.Constant):
            return float(node.value)
        raise AssertionError(f"unvalidated node {type(node).__name__}")

    var_order = tuple(variables)

    def fn(*args: float) -> float:
        if len(args) != len(var_order):
            raise TypeError(
                f"expression over {var_order} got {len(args)} arguments"
            )
        env = dict(zip(var_order, (float(a) for a in args)))
        return float(evaluate(tree, env))

    fn.__doc__ = f"compiled: {text}"
    return fn


def compile_matrix(
    rows: Sequence[Sequence[str | float]],
    variables: Sequence[str],
    functions: Mapping[str, Callable] | None = None,
) -> Callable[..., np.ndarray]:
    """Compile a matrix of expressions into ``fn(*vars) -> ndarray``.

    Plain numbers are accepted as constant entries.
    """
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ConfigError("matrix rows must be nonempty and equal length")

    def cell_fn(cell: str | float) -> Callable[..., float]:
        if isinstance(cell, str):
            return compile_expr(cell, variables, functions)
        return lambda *args, v=float(cell): v

    cells = [[cell_fn(cell) for cell in row] for row in rows]
    m, n = len(rows), len(rows[0])

    def fn(*args: float) -> np.ndarray:
        out = np.empty((m, n))
        for i in range(m):
            for j in range(n):
                out[i, j] = cells[i][j](*args)
        return out

    return fn
