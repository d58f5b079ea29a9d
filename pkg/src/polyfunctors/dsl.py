"""A small language for tensor-polynomial transformations.

    abc(A:2, B:2, C:2) = A (x) B - C (x) C
    beta(a:param, v:1, w:1) = a*v (x) w, v where a (x) a - 1

Grammar::

    decl    := name "(" paramlist ")" "=" exprlist ["where" exprlist]
    param   := name ":" degree | name ":param"
    expr    := ["-"] term (("+" | "-") term)*
    term    := factor ("(x)" factor)*
    factor  := rational ["*" factor] | param-name ["*" factor] | name | "(" expr ")"

``rational`` is an integer or ``p/q``.  Expressions after ``where`` are
constraints on the scalar parameters (each must evaluate to zero).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Union

from .tensors import DenseTensor, rational


class DslError(Exception):
    """Base class for DSL problems; carries an optional source position."""

    kind = "error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)

    def to_json(self) -> dict:
        return {"type": self.kind, "message": self.message, "line": self.line, "column": self.column}


class DslSyntaxError(DslError):
    kind = "syntax_error"


class DslTypeError(DslError):
    kind = "type_error"


class UnknownIdentifier(DslError):
    kind = "unknown_identifier"


class BindingError(DslError):
    kind = "binding_error"


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    degree: int


@dataclass(frozen=True)
class Param:
    name: str

    @property
    def degree(self) -> int:
        return 0


@dataclass(frozen=True)
class Const:
    value: Fraction

    @property
    def degree(self) -> int:
        return 0


@dataclass(frozen=True)
class Scale:
    coeff: Union[Fraction, Param]
    expr: "Expr"

    @property
    def degree(self) -> int:
        return self.expr.degree


@dataclass(frozen=True)
class Sum:
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.left.degree != self.right.degree:
            raise DslTypeError(
                f"sum of unequal degrees ({self.left.degree} and {self.right.degree})"
            )

    @property
    def degree(self) -> int:
        return self.left.degree


@dataclass(frozen=True)
class TensorProduct:
    left: "Expr"
    right: "Expr"

    @property
    def degree(self) -> int:
        return self.left.degree + self.right.degree


Expr = Union[Var, Param, Const, Scale, Sum, TensorProduct]


def walk(expr: Expr) -> Iterator[Expr]:
    yield expr
    if isinstance(expr, Scale):
        if isinstance(expr.coeff, Param):
            yield expr.coeff
        yield from walk(expr.expr)
    elif isinstance(expr, (Sum, TensorProduct)):
        yield from walk(expr.left)
        yield from walk(expr.right)


def variables(expr: Expr) -> set[Var]:
    return {node for node in walk(expr) if isinstance(node, Var)}


def parameters(expr: Expr) -> set[str]:
    return {node.name for node in walk(expr) if isinstance(node, Param)}


# --- evaluation ------------------------------------------------------------


def evaluate_expr(expr: Expr, bindings: Mapping, n: int) -> DenseTensor:
    """Evaluate one expression exactly at dimension n.

    ``bindings`` maps variable names to DenseTensor and parameter names to
    rationals.
    """
    if isinstance(expr, Var):
        if expr.name not in bindings:
            raise BindingError(f"missing binding for {expr.name!r}")
        t = bindings[expr.name]
        if not isinstance(t, DenseTensor):
            raise BindingError(f"{expr.name!r} must be bound to a tensor")
        if t.degree != expr.degree:
            raise BindingError(f"{expr.name!r} has degree {t.degree}, expected {expr.degree}")
        if t.degree and t.dim != n:
            raise BindingError(f"{expr.name!r} has dimension {t.dim}, expected {n}")
        return t
    if isinstance(expr, Param):
        return DenseTensor.scalar(_param_value(expr.name, bindings), n)
    if isinstance(expr, Const):
        return DenseTensor.scalar(expr.value, n)
    if isinstance(expr, Scale):
        c = expr.coeff
        if isinstance(c, Param):
            c = _param_value(c.name, bindings)
        return evaluate_expr(expr.expr, bindings, n).scale(c)
    if isinstance(expr, Sum):
        return evaluate_expr(expr.left, bindings, n) + evaluate_expr(expr.right, bindings, n)
    if isinstance(expr, TensorProduct):
        return evaluate_expr(expr.left, bindings, n).otimes(evaluate_expr(expr.right, bindings, n))
    raise TypeError(f"not an expression node: {expr!r}")


def _param_value(name: str, bindings: Mapping) -> Fraction:
    if name not in bindings:
        raise BindingError(f"missing binding for parameter {name!r}")
    v = bindings[name]
    if isinstance(v, DenseTensor):
        return v.value()
    return rational(v)


# --- printing --------------------------------------------------------------


def _is_negative(node: Expr) -> bool:
    if isinstance(node, Const):
        return node.value < 0
    return isinstance(node, Scale) and not isinstance(node.coeff, Param) and node.coeff < 0


def _prec(node: Expr) -> int:
    if isinstance(node, Sum) or _is_negative(node):
        return 0
    if isinstance(node, TensorProduct):
        return 1
    return 2


def _fmt(node: Expr, ctx: int) -> str:
    s = _raw(node)
    return f"({s})" if _prec(node) < ctx else s


def _raw(node: Expr) -> str:
    if isinstance(node, (Var, Param)):
        return node.name
    if isinstance(node, Const):
        return str(node.value)
    if isinstance(node, Scale):
        if isinstance(node.coeff, Param):
            return f"{node.coeff.name}*{_fmt(node.expr, 2)}"
        if node.coeff < 0:
            return f"-{-node.coeff}*{_fmt(node.expr, 2)}"
        return f"{node.coeff}*{_fmt(node.expr, 2)}"
    if isinstance(node, Sum):
        r = node.right
        if _is_negative(r):
            if isinstance(r, Const):
                return f"{_fmt(node.left, 0)} - {-r.value}"
            if r.coeff == -1 and _negate(r.expr) == Scale(Fraction(-1), r.expr):
                return f"{_fmt(node.left, 0)} - {_fmt(r.expr, 1)}"
            return f"{_fmt(node.left, 0)} - {_fmt(Scale(-r.coeff, r.expr), 1)}"
        return f"{_fmt(node.left, 0)} + {_fmt(r, 1)}"
    if isinstance(node, TensorProduct):
        return f"{_fmt(node.left, 1)} (x) {_fmt(node.right, 2)}"
    raise TypeError(f"not an expression node: {node!r}")


def format_expr(expr: Expr) -> str:
    return _fmt(expr, 0)


# --- transformations -------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    inputs: tuple[tuple[str, int], ...]
    params: tuple[str, ...]
    outputs: tuple[int, ...]
    homogeneity: tuple[Union[int, str], ...]

    def to_json(self) -> dict:
        return {
            "inputs": [list(x) for x in self.inputs],
            "params": list(self.params),
            "outputs": list(self.outputs),
            "homogeneity": list(self.homogeneity),
        }


def monomial_types(expr: Expr) -> set[tuple[tuple[int, int], ...]]:
    """Formal monomial types: for each monomial, how many inputs of each degree class.

    Parameters and constants do not count.  Cancellation is ignored, so this
    is the structure of the expression as written.
    """
    if isinstance(expr, Var):
        return {((expr.degree, 1),)}
    if isinstance(expr, (Param, Const)):
        return {()}
    if isinstance(expr, Scale):
        return monomial_types(expr.expr)
    if isinstance(expr, Sum):
        return monomial_types(expr.left) | monomial_types(expr.right)
    out = set()
    for a in monomial_types(expr.left):
        for b in monomial_types(expr.right):
            counts = dict(a)
            for e, k in b:
                counts[e] = counts.get(e, 0) + k
            out.add(tuple(sorted(counts.items())))
    return out


def map_degree(expr: Expr) -> Union[int, str]:
    """d/e when every monomial uses k inputs of one common degree e (so d = k*e); else "mixed"."""
    types = monomial_types(expr)
    if types == {()}:
        return 0
    if len(types) != 1:
        return "mixed"
    (t,) = types
    if len(t) != 1:
        return "mixed"
    ((e, k),) = t
    return k


@dataclass(frozen=True)
class Transformation:
    """A parsed declaration: named inputs and parameters, output expressions, constraints."""

    name: str
    inputs: tuple[tuple[str, int], ...]
    params: tuple[str, ...]
    outputs: tuple[Expr, ...]
    constraints: tuple[Expr, ...] = field(default=())

    @cached_property
    def signature(self) -> Signature:
        return Signature(
            inputs=self.inputs,
            params=self.params,
            outputs=tuple(e.degree for e in self.outputs),
            homogeneity=tuple(map_degree(e) for e in self.outputs),
        )

    @property
    def input_degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.inputs)

    @property
    def output_degrees(self) -> tuple[int, ...]:
        return tuple(e.degree for e in self.outputs)

    def check_constraints(self, bindings: Mapping) -> None:
        for c in self.constraints:
            v = evaluate_expr(c, bindings, 0).value()
            if v != 0:
                raise BindingError(f"parameter constraint {format_expr(c)} = {v}, expected 0")

    def evaluate(self, bindings: Mapping, n: int) -> list[DenseTensor]:
        for name, _ in self.inputs:
            if name not in bindings:
                raise BindingError(f"missing binding for {name!r}")
        for name in self.params:
            if name not in bindings:
                raise BindingError(f"missing binding for parameter {name!r}")
        self.check_constraints(bindings)
        return [evaluate_expr(e, bindings, n) for e in self.outputs]

    def bind(self, scalars, tensors) -> dict:
        """Bindings from a point: parameter values in order, then input tensors in order."""
        if len(scalars) != len(self.params) or len(tensors) != len(self.inputs):
            raise BindingError("point does not match the transformation's inputs")
        out = dict(zip(self.params, scalars))
        out.update({name: t for (name, _), t in zip(self.inputs, tensors)})
        return out

    def format(self) -> str:
        params = [f"{n}:{d}" for n, d in self.inputs] + [f"{p}:param" for p in self.params]
        text = f"{self.name}({', '.join(params)}) = " + ", ".join(format_expr(e) for e in self.outputs)
        if self.constraints:
            text += " where " + ", ".join(format_expr(c) for c in self.constraints)
        return text


# --- lexer and parser ------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<tensor>\(x\))
  | (?P<number>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[()=:,+\-*])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind if kind != "op" else m.group(), m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    """Recursive-descent parser producing a typed Transformation."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.vars: dict[str, int] = {}
        self.params: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            shown = self.tok.text or "end of input"
            raise DslSyntaxError(f"expected {kind!r}, found {shown!r}", self.tok.line, self.tok.column)
        return self.advance()

    def parse(self) -> Transformation:
        name = self.expect("name").text
        self.expect("(")
        inputs, params = [], []
        if self.tok.kind != ")":
            while True:
                pname = self.expect("name")
                if pname.text in self.vars or pname.text in self.params:
                    raise DslSyntaxError(f"duplicate name {pname.text!r}", pname.line, pname.column)
                self.expect(":")
                if self.tok.kind == "name" and self.tok.text == "param":
                    self.advance()
                    params.append(pname.text)
                    self.params.add(pname.text)
                else:
                    deg = self.expect("number")
                    if "/" in deg.text or int(deg.text) < 1:
                        raise DslSyntaxError("input degree must be a positive integer", deg.line, deg.column)
                    inputs.append((pname.text, int(deg.text)))
                    self.vars[pname.text] = int(deg.text)
                if self.tok.kind == ",":
                    self.advance()
                    continue
                break
        self.expect(")")
        self.expect("=")
        outputs = self.exprlist()
        constraints = []
        if self.tok.kind == "name" and self.tok.text == "where":
            self.advance()
            for c, tok in zip(self.exprlist(), self._last_starts):
                if variables(c) or c.degree != 0:
                    raise DslTypeError("constraints may only involve parameters", tok.line, tok.column)
                constraints.append(c)
        if self.tok.kind != "eof":
            raise DslSyntaxError(f"unexpected {self.tok.text!r}", self.tok.line, self.tok.column)
        return Transformation(name, tuple(inputs), tuple(params), tuple(outputs), tuple(constraints))

    def exprlist(self) -> list[Expr]:
        starts = [self.tok]
        out = [self.expr()]
        while self.tok.kind == ",":
            self.advance()
            starts.append(self.tok)
            out.append(self.expr())
        self._last_starts = starts
        return out

    def expr(self) -> Expr:
        negate = False
        if self.tok.kind == "-":
            self.advance()
            negate = True
        node = self.term()
        if negate:
            node = _negate(node)
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            right = self.term()
            if op.kind == "-":
                right = _negate(right)
            if node.degree != right.degree:
                raise DslTypeError(
                    f"sum of unequal degrees ({node.degree} and {right.degree})", op.line, op.column
                )
            node = Sum(node, right)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind == "tensor":
            self.advance()
            node = TensorProduct(node, self.factor())
        return node

    def factor(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            value = Fraction(t.text)
            if self.tok.kind == "*":
                self.advance()
                return Scale(value, self.factor())
            return Const(value)
        if t.kind == "name":
            self.advance()
            if t.text in self.params:
                if self.tok.kind == "*":
                    self.advance()
                    return Scale(Param(t.text), self.factor())
                return Param(t.text)
            if t.text in self.vars:
                if self.tok.kind == "*":
                    raise DslSyntaxError(
                        "'*' scales by a rational or a parameter; use '(x)' between tensors",
                        self.tok.line,
                        self.tok.column,
                    )
                return Var(t.text, self.vars[t.text])
            raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.line, t.column)
        if t.kind == "tensor":
            # "(x)" in factor position is a parenthesised variable named x
            self.advance()
            if "x" in self.vars:
                return Var("x", self.vars["x"])
            if "x" in self.params:
                return Param("x")
            raise UnknownIdentifier("unknown identifier 'x'", t.line, t.column + 1)
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        shown = t.text or "end of input"
        raise DslSyntaxError(f"unexpected {shown!r}", t.line, t.column)


def _negate(node: Expr) -> Expr:
    if isinstance(node, Const):
        return Const(-node.value)
    if isinstance(node, Scale) and not isinstance(node.coeff, Param):
        return Scale(-node.coeff, node.expr)
    return Scale(Fraction(-1), node)


def parse(text: str) -> Transformation:
    """Parse one declaration into a Transformation (AST plus signature)."""
    return Parser(text).parse()
