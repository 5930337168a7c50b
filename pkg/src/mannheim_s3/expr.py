"""Arithmetic expressions in one variable for profiles given on the command line.

Grammar: numbers, the variable ``s`` (aliases ``sigma`` and ``σ``), the
constants ``pi`` and ``e``, ``+ - * /``, ``^`` or ``**`` for powers, and the
functions ``sin cos tan exp sqrt``. Anything else is rejected before
evaluation.
"""

import ast

import numpy as np

from .numdiff import Jet

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp, "sqrt": np.sqrt}
CONSTANTS = {"pi": np.pi, "e": np.e}
VARIABLES = ("s", "sigma", "σ")

_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply,
           ast.Div: np.divide, ast.Pow: np.power}
_UNARY = {ast.UAdd: np.positive, ast.USub: np.negative}


class ExpressionError(ValueError):
    pass


def _check(node):
    if isinstance(node, ast.Expression):
        return _check(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        return
    if isinstance(node, ast.Name):
        if node.id not in VARIABLES and node.id not in CONSTANTS:
            raise ExpressionError(f"unknown name {node.id!r}")
        return
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _check(node.left)
        _check(node.right)
        return
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        _check(node.operand)
        return
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ExpressionError("only sin, cos, tan, exp and sqrt may be called")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError(f"{node.func.id} takes exactly one argument")
        _check(node.args[0])
        return
    raise ExpressionError(f"unsupported syntax: {type(node).__name__}")


def _eval(node, x):
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return x if node.id in VARIABLES else CONSTANTS[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, x), _eval(node.right, x))
    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_eval(node.operand, x))
    return FUNCTIONS[node.func.id](_eval(node.args[0], x))


class Expression:
    """Compiled expression, callable on scalars or arrays."""

    def __init__(self, text):
        self.text = str(text)
        src = self.text.replace("^", "**").replace("σ", "sigma")
        try:
            tree = ast.parse(src.strip(), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {self.text!r}: {exc.msg}") from None
        _check(tree)
        self._tree = tree.body

    def __call__(self, s):
        if isinstance(s, Jet):
            return _eval(self._tree, s)
        x = np.asarray(s, float)
        with np.errstate(all="ignore"):
            out = np.broadcast_to(_eval(self._tree, x), x.shape).astype(float)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse(text):
    return Expression(text)


def as_function(value):
    """Numbers become constant functions, strings are parsed, callables pass through."""
    if callable(value):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        c = float(value)
        return lambda s: np.full(np.shape(s), c) if np.ndim(s) else c
    if isinstance(value, str):
        return Expression(value)
    raise ExpressionError(f"cannot interpret {value!r} as a function of s")
