"""Expression language for fuzzy-valued functions ``sum_i c_i * g_i(x)``.

Grammar (whitespace insensitive)::

    expr     := term ('+' term)*
    term     := fuzzylit ('*' product)? | difference
    fuzzylit := 'tfn(' r ',' r ',' r ')' | 'tpfn(' r ',' r ',' r ',' r ')' | 'crisp(' r ')'
    difference := product ('-' product)*
    product  := unary ('*' unary)*
    unary    := '-' unary | power
    power    := atom ('^' nonnegative-integer)?
    atom     := number | var | '(' sum ')' | ('sin'|'cos'|'exp') '(' sum ')'
    sum      := product (('+'|'-') product)*
    var      := 'x' positive-integer

Top-level ``+`` separates fuzzy terms, so ``tfn(0,1,2)*(x1 + x2)`` is one
term while ``tfn(0,1,2)*x1 + tfn(0,1,2)*x2`` is two. A term without a fuzzy
literal has the crisp coefficient 1. Grouping is kept exactly as written:
the parser builds no canonical form and only constant-folds derivatives.

    >>> e = parse("tfn(0,2,4) * x1", arity=1)
    >>> str(eval_fuzzy(e, [2.0]))
    'tfn(0, 4, 8)'
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .fuzzy import (AlphaGrid, FuzzyError, FuzzyNumber, add, default_grid, make_crisp,
                    make_trapezoidal, make_triangular, scalar_mul, zero)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


# crisp AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    arg: "CrispExpr"


@dataclass(frozen=True)
class Add:
    left: "CrispExpr"
    right: "CrispExpr"


@dataclass(frozen=True)
class Sub:
    left: "CrispExpr"
    right: "CrispExpr"


@dataclass(frozen=True)
class Mul:
    left: "CrispExpr"
    right: "CrispExpr"


@dataclass(frozen=True)
class Pow:
    base: "CrispExpr"
    exponent: int


@dataclass(frozen=True)
class Func:
    name: str  # sin | cos | exp
    arg: "CrispExpr"


CrispExpr = Union[Const, Var, Neg, Add, Sub, Mul, Pow, Func]

_FUNCS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}


def eval_crisp(g: CrispExpr, x: Sequence[float]) -> float:
    match g:
        case Const(v):
            return v
        case Var(i):
            return float(x[i - 1])
        case Neg(a):
            return -eval_crisp(a, x)
        case Add(a, b):
            return eval_crisp(a, x) + eval_crisp(b, x)
        case Sub(a, b):
            return eval_crisp(a, x) - eval_crisp(b, x)
        case Mul(a, b):
            return eval_crisp(a, x) * eval_crisp(b, x)
        case Pow(a, n):
            return eval_crisp(a, x) ** n
        case Func(name, a):
            return _FUNCS[name](eval_crisp(a, x))
    raise TypeError(f"not a crisp expression: {g!r}")


def variables(g: CrispExpr) -> frozenset[int]:
    match g:
        case Const():
            return frozenset()
        case Var(i):
            return frozenset((i,))
        case Neg(a) | Pow(a, _) | Func(_, a):
            return variables(a)
        case Add(a, b) | Sub(a, b) | Mul(a, b):
            return variables(a) | variables(b)
    raise TypeError(f"not a crisp expression: {g!r}")


def simplify(g: CrispExpr) -> CrispExpr:
    """Constant folding plus the 0/1 identities; never reorders operands."""
    match g:
        case Const() | Var():
            return g
        case Neg(a):
            a = simplify(a)
            if isinstance(a, Const):
                return Const(-a.value)
            if isinstance(a, Neg):
                return a.arg
            return Neg(a)
        case Add(a, b):
            a, b = simplify(a), simplify(b)
            if isinstance(a, Const) and isinstance(b, Const):
                return Const(a.value + b.value)
            if a == Const(0.0):
                return b
            if b == Const(0.0):
                return a
            return Add(a, b)
        case Sub(a, b):
            a, b = simplify(a), simplify(b)
            if isinstance(a, Const) and isinstance(b, Const):
                return Const(a.value - b.value)
            if b == Const(0.0):
                return a
            if a == Const(0.0):
                return simplify(Neg(b))
            return Sub(a, b)
        case Mul(a, b):
            a, b = simplify(a), simplify(b)
            if isinstance(a, Const) and isinstance(b, Const):
                return Const(a.value * b.value)
            if a == Const(0.0) or b == Const(0.0):
                return Const(0.0)
            if a == Const(1.0):
                return b
            if b == Const(1.0):
                return a
            return Mul(a, b)
        case Pow(a, n):
            a = simplify(a)
            if n == 0:
                return Const(1.0)
            if n == 1:
                return a
            if isinstance(a, Const):
                return Const(a.value ** n)
            return Pow(a, n)
        case Func(name, a):
            a = simplify(a)
            if isinstance(a, Const):
                return Const(_FUNCS[name](a.value))
            return Func(name, a)
    raise TypeError(f"not a crisp expression: {g!r}")


def _d(g: CrispExpr, i: int) -> CrispExpr:
    match g:
        case Const():
            return Const(0.0)
        case Var(j):
            return Const(1.0 if j == i else 0.0)
        case Neg(a):
            return Neg(_d(a, i))
        case Add(a, b):
            return Add(_d(a, i), _d(b, i))
        case Sub(a, b):
            return Sub(_d(a, i), _d(b, i))
        case Mul(a, b):
            return Add(Mul(_d(a, i), b), Mul(a, _d(b, i)))
        case Pow(a, n):
            if n == 0:
                return Const(0.0)
            return Mul(Mul(Const(float(n)), Pow(a, n - 1)), _d(a, i))
        case Func("sin", a):
            return Mul(Func("cos", a), _d(a, i))
        case Func("cos", a):
            return Mul(Neg(Func("sin", a)), _d(a, i))
        case Func("exp", a):
            return Mul(Func("exp", a), _d(a, i))
    raise TypeError(f"not a crisp expression: {g!r}")


def crisp_derivative(g: CrispExpr, i: int) -> CrispExpr:
    """Exact partial derivative with respect to ``x{i}``, constant-folded."""
    if i < 1:
        raise ValueError("variable indices start at 1")
    return simplify(_d(g, i))


# printing ---------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 4}


def _num(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def crisp_to_text(g: CrispExpr) -> str:
    return _text(g)


def _text(g: CrispExpr) -> str:
    match g:
        case Const(v):
            return _num(v) if v >= 0 else f"({_num(v)})"
        case Var(i):
            return f"x{i}"
        case Func(name, a):
            return f"{name}({_text(a)})"
        case Neg(a):
            inner = _text(a)
            if isinstance(a, (Add, Sub, Mul, Neg, Const)):
                inner = f"({inner})"
            return f"-{inner}"
        case Pow(a, n):
            inner = _text(a)
            if not isinstance(a, (Var, Func)) and not (isinstance(a, Const) and a.value >= 0):
                inner = f"({inner})"
            return f"{inner}^{n}"
        case Add(a, b) | Sub(a, b) | Mul(a, b):
            op = {Add: "+", Sub: "-", Mul: "*"}[type(g)]
            p = _PREC[type(g)]
            left = _text(a)
            if _PREC.get(type(a), 9) < p:
                left = f"({left})"
            right = _text(b)
            # binary operators are left-associative; a same-level right child needs parens
            if _PREC.get(type(b), 9) <= p:
                right = f"({right})"
            return f"{left} {op} {right}"
    raise TypeError(f"not a crisp expression: {g!r}")


# fuzzy terms and expressions --------------------------------------------------

@dataclass(frozen=True)
class FuzzyTerm:
    coeff: FuzzyNumber
    crisp: CrispExpr

    def __str__(self):
        c = str(self.coeff)
        if self.crisp == Const(1.0):
            return c
        body = _text(self.crisp)
        if isinstance(self.crisp, (Add, Sub, Mul)) or (isinstance(self.crisp, Neg)):
            body = f"({body})"
        return f"{c} * {body}"


@dataclass(frozen=True)
class FuzzyExpr:
    arity: int
    terms: tuple[FuzzyTerm, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        if not self.terms:
            raise ValueError("a fuzzy expression needs at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            extra = [i for i in variables(t.crisp) if i > self.arity]
            if extra:
                raise ValueError(f"variable x{max(extra)} exceeds arity {self.arity}")

    def __call__(self, x) -> FuzzyNumber:
        return eval_fuzzy(self, x)

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)

    @property
    def grid(self) -> AlphaGrid:
        return self.terms[0].coeff.grid

    def depends_on(self, i: int) -> bool:
        return any(i in variables(t.crisp) for t in self.terms)


def derivative_expr(e: FuzzyExpr, i: int) -> FuzzyExpr:
    """Term-wise ``c_j * dg_j/dx_i``; the H-derivative when the sign conditions hold."""
    return FuzzyExpr(e.arity, tuple(FuzzyTerm(t.coeff, crisp_derivative(t.crisp, i)) for t in e.terms))


def _point(x, arity: int) -> tuple[float, ...]:
    if np.ndim(x) == 0:
        x = (x,)
    x = tuple(float(v) for v in x)
    if len(x) != arity:
        raise ValueError(f"expected a point with {arity} coordinates, got {len(x)}")
    return x


def eval_fuzzy(e: FuzzyExpr, x) -> FuzzyNumber:
    """Value of ``e`` at ``x``: each coefficient scaled by its crisp factor, then summed."""
    x = _point(x, e.arity)
    out = None
    for t in e.terms:
        term = scalar_mul(eval_crisp(t.crisp, x), t.coeff)
        out = term if out is None else add(out, term)
    return out


def level_functions(e: FuzzyExpr, x) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper level-function values at ``x`` on every grid level."""
    f = eval_fuzzy(e, x)
    return f.lower, f.upper


# tokenizer and parser ---------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<var>x\d+)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_LITERALS = {"tfn": 3, "tpfn": 4, "crisp": 1}


class _Parser:
    def __init__(self, text: str, arity: int, grid: AlphaGrid):
        self.toks = _tokenize(text)
        self.pos = 0
        self.arity = arity
        self.grid = grid

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> FuzzyExpr:
        terms = [self.term()]
        while self.accept("+"):
            terms.append(self.term())
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return FuzzyExpr(self.arity, tuple(terms))

    def term(self) -> FuzzyTerm:
        if self.tok.kind == "name" and self.tok.text in _LITERALS:
            coeff = self.fuzzylit()
            crisp: CrispExpr = Const(1.0)
            if self.accept("*"):
                crisp = self.product()
            if self.tok.kind == "op" and self.tok.text == "-":
                self.error("crisp subtraction after a fuzzy coefficient needs parentheses")
            return FuzzyTerm(coeff, crisp)
        node = self.product()
        while self.accept("-"):
            node = Sub(node, self.product())
        return FuzzyTerm(make_crisp(1.0, self.grid), node)

    def signed_number(self) -> float:
        sign = -1.0 if self.accept("-") else 1.0
        if sign > 0:
            self.accept("+")
        if self.tok.kind != "num":
            self.error("expected a number")
        value = float(self.tok.text)
        self.pos += 1
        return sign * value

    def fuzzylit(self) -> FuzzyNumber:
        start = self.tok
        name = start.text
        self.pos += 1
        self.expect("(")
        params = [self.signed_number()]
        while self.accept(","):
            params.append(self.signed_number())
        self.expect(")")
        if len(params) != _LITERALS[name]:
            self.error(f"{name} takes {_LITERALS[name]} parameters, got {len(params)}", start)
        try:
            if name == "tfn":
                return make_triangular(*params, grid=self.grid)
            if name == "tpfn":
                return make_trapezoidal(*params, grid=self.grid)
            return make_crisp(params[0], grid=self.grid)
        except FuzzyError as exc:
            self.error(f"malformed fuzzy literal: {exc}", start)

    def sum(self) -> CrispExpr:
        node = self.product()
        while True:
            if self.accept("+"):
                node = Add(node, self.product())
            elif self.accept("-"):
                node = Sub(node, self.product())
            else:
                return node

    def product(self) -> CrispExpr:
        node = self.unary()
        while self.accept("*"):
            node = Mul(node, self.unary())
        return node

    def unary(self) -> CrispExpr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> CrispExpr:
        base = self.atom()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "num" or not re.fullmatch(r"\d+", tok.text):
                self.error("exponents must be nonnegative integers", tok)
            self.pos += 1
            return Pow(base, int(tok.text))
        return base

    def atom(self) -> CrispExpr:
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return Const(float(tok.text))
        if tok.kind == "var":
            idx = int(tok.text[1:])
            if idx < 1 or idx > self.arity:
                self.error(f"variable {tok.text} outside arity {self.arity}", tok)
            self.pos += 1
            return Var(idx)
        if self.accept("("):
            node = self.sum()
            self.expect(")")
            return node
        if tok.kind == "name" and tok.text in _FUNCS:
            self.pos += 1
            self.expect("(")
            node = self.sum()
            self.expect(")")
            return Func(tok.text, node)
        if tok.kind == "name" and tok.text in _LITERALS:
            self.error("fuzzy literals may only lead a term")
        self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse(text: str, arity: int = 1, grid: AlphaGrid | None = None) -> FuzzyExpr:
    """Parse ``text`` into a :class:`FuzzyExpr` over ``x1..x{arity}``."""
    if arity < 1:
        raise ValueError("arity must be positive")
    return _Parser(text, arity, grid or default_grid()).parse()


def parse_literal(text: str, grid: AlphaGrid | None = None) -> FuzzyNumber:
    """Parse a single fuzzy literal such as ``tfn(0,1,2)``."""
    p = _Parser(text, 1, grid or default_grid())
    if not (p.tok.kind == "name" and p.tok.text in _LITERALS):
        p.error("expected tfn(...), tpfn(...) or crisp(...)")
    value = p.fuzzylit()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return value


def infer_arity(text: str) -> int:
    """Highest variable index used in ``text`` (at least 1)."""
    idx = [int(m[1:]) for m in re.findall(r"x\d+", text)]
    return max(idx, default=1)


def constant_zero(e: FuzzyExpr) -> FuzzyNumber:
    return zero(e.grid)
