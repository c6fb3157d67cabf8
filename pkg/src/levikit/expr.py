"""Expression trees for real-valued functions of several complex variables.

An ``Expr`` is an immutable tree over the variables ``z1..zn`` and their
conjugates.  Evaluation is plain complex arithmetic; differentiation treats
``z_j`` and ``conj(z_j)`` as independent variables, so first and second
mixed derivatives come out exact rather than through finite differences.
"""

from __future__ import annotations

import math
import re as _regex
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import EvalDomainError, ExprSyntaxError

UNARY_OPS = ("re", "im", "abs", "abs2", "ln", "exp", "conj", "neg")
BINARY_OPS = ("add", "sub", "mul", "div")


@dataclass(frozen=True)
class Expr:
    """One node of an expression tree.

    ``kind`` is "const", "var", "pow", one of UNARY_OPS or one of BINARY_OPS.
    Payload fields are only meaningful for the matching kind; ``exponent``
    is always a non-negative integer (negative powers go through "div").
    """

    kind: str
    children: tuple["Expr", ...] = ()
    value: complex = 0j
    index: int = 0
    conjugated: bool = False
    exponent: int = 0

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        return power(self, k)

    def __str__(self):
        return to_text(self)


def _coerce(x):
    if isinstance(x, Expr):
        return x
    return const(x)


# ---------------------------------------------------------------------------
# smart constructors (conservative folding: constants plus 0/1 identities)

def const(v) -> Expr:
    return Expr("const", value=complex(v))


def var(j: int, conjugated: bool = False) -> Expr:
    if j < 1:
        raise ValueError(f"variable index must be >= 1, got {j}")
    return Expr("var", index=j, conjugated=conjugated)


def _is_const(e, v=None):
    return e.kind == "const" and (v is None or e.value == v)


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Expr("add", (a, b))


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return const(a.value - b.value)
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    return Expr("sub", (a, b))


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return const(0)
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Expr("mul", (a, b))


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b) and b.value != 0:
        return const(a.value / b.value)
    if _is_const(a, 0):
        return const(0)
    if _is_const(b, 1):
        return a
    return Expr("div", (a, b))


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return const(-a.value)
    if a.kind == "neg":
        return a.children[0]
    return Expr("neg", (a,))


def power(a: Expr, k: int) -> Expr:
    k = int(k)
    if k < 0:
        raise ValueError("negative exponents must be written through division")
    if k == 0:
        return const(1)
    if k == 1:
        return a
    if _is_const(a):
        return const(a.value ** k)
    return Expr("pow", (a,), exponent=k)


def conj(a: Expr) -> Expr:
    if _is_const(a):
        return const(a.value.conjugate())
    if a.kind == "var":
        return Expr("var", index=a.index, conjugated=not a.conjugated)
    if a.kind == "conj":
        return a.children[0]
    return Expr("conj", (a,))


def re_(a: Expr) -> Expr:
    if _is_const(a):
        return const(a.value.real)
    return Expr("re", (a,))


def im_(a: Expr) -> Expr:
    if _is_const(a):
        return const(a.value.imag)
    return Expr("im", (a,))


def abs_(a: Expr) -> Expr:
    if _is_const(a):
        return const(abs(a.value))
    return Expr("abs", (a,))


def abs2(a: Expr) -> Expr:
    if _is_const(a):
        return const(abs(a.value) ** 2)
    return Expr("abs2", (a,))


def ln(a: Expr) -> Expr:
    if _is_const(a) and a.value.imag == 0 and a.value.real > 0:
        return const(math.log(a.value.real))
    return Expr("ln", (a,))


def exp_(a: Expr) -> Expr:
    if _is_const(a):
        return const(np.exp(a.value))
    return Expr("exp", (a,))


_UNARY_CTOR = {"re": re_, "im": im_, "abs": abs_, "abs2": abs2,
               "ln": ln, "exp": exp_, "conj": conj, "neg": neg}


# ---------------------------------------------------------------------------
# structure helpers

def max_index(e: Expr) -> int:
    """Largest variable index appearing in the tree (0 for constants)."""
    if e.kind == "var":
        return e.index
    if not e.children:
        return 0
    return max(max_index(c) for c in e.children)


def substitute(e: Expr, mapping: dict[int, Expr]) -> Expr:
    """Replace each variable j in ``mapping`` by the given expression.

    A conjugated leaf ``conj(z_j)`` becomes the conjugate of the replacement,
    so substituting holomorphic linear forms commutes with differentiation.
    """
    if e.kind == "const":
        return e
    if e.kind == "var":
        repl = mapping.get(e.index)
        if repl is None:
            return e
        return conj(repl) if e.conjugated else repl
    kids = tuple(substitute(c, mapping) for c in e.children)
    if e.kind == "pow":
        return power(kids[0], e.exponent)
    if e.kind in _UNARY_CTOR:
        return _UNARY_CTOR[e.kind](kids[0])
    return {"add": add, "sub": sub, "mul": mul, "div": div}[e.kind](*kids)


# ---------------------------------------------------------------------------
# evaluation

def as_point(z, n: int | None = None) -> np.ndarray:
    """Normalize a point/vector of C^n to a 1-d complex array."""
    a = np.atleast_1d(np.asarray(z, dtype=complex))
    if a.ndim != 1:
        raise ValueError(f"expected a flat coordinate vector, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise ValueError(f"expected dimension {n}, got {a.shape[0]}")
    return a


_REAL_IMAG_TOL = 1e-12


def evaluate(f: Expr, z) -> complex:
    """Evaluate ``f`` at the point ``z`` (any complex sequence).

    Raises EvalDomainError for ln of a non-positive (or non-real) argument
    and for division by exactly zero, carrying the offending subexpression.
    """
    zz = as_point(z)
    memo: dict[int, complex] = {}

    def go(e: Expr) -> complex:
        got = memo.get(id(e))
        if got is not None:
            return got
        k = e.kind
        if k == "const":
            v = e.value
        elif k == "var":
            if e.index > zz.shape[0]:
                raise EvalDomainError(
                    f"variable z{e.index} exceeds point dimension {zz.shape[0]}",
                    to_text(e), tuple(zz))
            v = zz[e.index - 1]
            if e.conjugated:
                v = v.conjugate()
        elif k == "add":
            v = go(e.children[0]) + go(e.children[1])
        elif k == "sub":
            v = go(e.children[0]) - go(e.children[1])
        elif k == "mul":
            v = go(e.children[0]) * go(e.children[1])
        elif k == "div":
            den = go(e.children[1])
            if den == 0:
                raise EvalDomainError("division by zero",
                                      to_text(e.children[1]), tuple(zz))
            v = go(e.children[0]) / den
        elif k == "pow":
            v = go(e.children[0]) ** e.exponent
        elif k == "neg":
            v = -go(e.children[0])
        elif k == "re":
            v = complex(go(e.children[0]).real)
        elif k == "im":
            v = complex(go(e.children[0]).imag)
        elif k == "abs":
            v = complex(abs(go(e.children[0])))
        elif k == "abs2":
            w = go(e.children[0])
            v = complex(w.real * w.real + w.imag * w.imag)
        elif k == "conj":
            v = go(e.children[0]).conjugate()
        elif k == "ln":
            w = go(e.children[0])
            if abs(w.imag) > _REAL_IMAG_TOL * max(1.0, abs(w)) or w.real <= 0:
                raise EvalDomainError(f"ln of non-positive argument {w}",
                                      to_text(e.children[0]), tuple(zz))
            v = complex(math.log(w.real))
        elif k == "exp":
            v = np.exp(complex(go(e.children[0])))
        else:
            raise ValueError(f"unknown node kind {k!r}")
        v = complex(v)
        memo[id(e)] = v
        return v

    return go(f)


# ---------------------------------------------------------------------------
# Wirtinger differentiation

_HALF = const(0.5)
_MINUS_HALF_I = const(-0.5j)


@lru_cache(maxsize=None)
def _wirt(e: Expr, j: int, conjugated: bool) -> Expr:
    k = e.kind
    if k == "const":
        return const(0)
    if k == "var":
        hit = e.index == j and e.conjugated == conjugated
        return const(1 if hit else 0)
    if k == "add":
        return add(_wirt(e.children[0], j, conjugated), _wirt(e.children[1], j, conjugated))
    if k == "sub":
        return sub(_wirt(e.children[0], j, conjugated), _wirt(e.children[1], j, conjugated))
    if k == "neg":
        return neg(_wirt(e.children[0], j, conjugated))
    if k == "mul":
        a, b = e.children
        return add(mul(_wirt(a, j, conjugated), b), mul(a, _wirt(b, j, conjugated)))
    if k == "div":
        a, b = e.children
        num = sub(mul(_wirt(a, j, conjugated), b), mul(a, _wirt(b, j, conjugated)))
        return div(num, power(b, 2))
    if k == "pow":
        a = e.children[0]
        return mul(mul(const(e.exponent), power(a, e.exponent - 1)),
                   _wirt(a, j, conjugated))
    a = e.children[0]
    if k == "conj":
        # d conj(u) / dz = conj(du/dzbar): conjugation swaps the flag
        return conj(_wirt(a, j, not conjugated))
    if k == "re":
        # re(u) = (u + conj u) / 2
        return mul(_HALF, add(_wirt(a, j, conjugated), conj(_wirt(a, j, not conjugated))))
    if k == "im":
        # im(u) = (u - conj u) / (2i)
        return mul(_MINUS_HALF_I, sub(_wirt(a, j, conjugated), conj(_wirt(a, j, not conjugated))))
    if k == "abs2":
        # abs2(u) = u * conj(u)
        return add(mul(_wirt(a, j, conjugated), conj(a)),
                   mul(a, conj(_wirt(a, j, not conjugated))))
    if k == "abs":
        # rewrite through abs2; valid away from zeros of the argument
        return div(_wirt(abs2(a), j, conjugated), mul(const(2), abs_(a)))
    if k == "ln":
        return div(_wirt(a, j, conjugated), a)
    if k == "exp":
        return mul(e, _wirt(a, j, conjugated))
    raise ValueError(f"unknown node kind {k!r}")


def wirtinger(f: Expr, j: int, conjugated: bool = False) -> Expr:
    """Symbolic d f / d z_j (or d f / d conj(z_j) when ``conjugated``)."""
    if j < 1:
        raise ValueError(f"variable index must be >= 1, got {j}")
    return _wirt(f, j, bool(conjugated))


# ---------------------------------------------------------------------------
# real-valuedness probe

@dataclass(frozen=True)
class RealValueCheck:
    is_real_valued: bool
    witness: tuple
    max_abs_imag: float


def is_real_valued(f: Expr, samples: int = 50, seed: int = 0,
                   tol: float = 1e-9, n: int | None = None) -> RealValueCheck:
    """Evaluate ``f`` at seeded random points and test max |Im f| <= tol.

    Returns the worst point either way; domain errors propagate with the
    sample point attached.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if n is None:
        n = max(max_index(f), 1)
    rng = np.random.default_rng(seed)
    worst = None
    worst_imag = -1.0
    for _ in range(samples):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        try:
            v = evaluate(f, z)
        except EvalDomainError as err:
            raise err.with_point(tuple(z)) from None
        if abs(v.imag) > worst_imag:
            worst_imag = abs(v.imag)
            worst = tuple(z)
    return RealValueCheck(worst_imag <= tol, worst, worst_imag)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RX = _regex.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
                           r"|\d+(?:[eE][+-]?\d+)?)|([a-zA-Z][a-zA-Z0-9]*)|([-+*/^()]))")

_FUNCS = ("re", "im", "abs", "abs2", "ln", "exp", "conj")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RX.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", at)
        if m.group(1) is not None:
            out.append(("number", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, n):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol):
        kind, val, pos = self.peek()
        if kind == "op" and val == symbol:
            return self.take()
        raise ExprSyntaxError(
            "end of input" if kind == "end" else f"unexpected token {val!r}",
            pos, (repr(symbol),))

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {val!r}", pos,
                                  ("operator", "end of input"))
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = add(e, rhs) if val == "+" else sub(e, rhs)
            else:
                return e

    def term(self):
        e = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                e = mul(e, rhs) if val == "*" else div(e, rhs)
            else:
                return e

    def factor(self):
        e = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.peek()
            if kind != "number" or not val.isdigit():
                raise ExprSyntaxError(
                    "end of input" if kind == "end" else f"unexpected token {val!r}",
                    pos, ("non-negative integer exponent",))
            self.take()
            e = power(e, int(val))
        return e

    def atom(self):
        kind, val, pos = self.take()
        if kind == "number":
            return const(float(val))
        if kind == "op" and val == "-":
            return neg(self.atom())
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        if kind == "name":
            if val == "i":
                return const(1j)
            if val in _FUNCS:
                self.expect_op("(")
                e = self.expr()
                self.expect_op(")")
                return _UNARY_CTOR[val](e)
            m = _regex.fullmatch(r"z(\d+)", val)
            if m:
                j = int(m.group(1))
                if j < 1 or j > self.n:
                    raise ExprSyntaxError(
                        f"variable index {j} out of range [1, {self.n}]", pos)
                return var(j)
            raise ExprSyntaxError(f"unknown name {val!r}", pos,
                                  ("variable zN", "function name", "i"))
        raise ExprSyntaxError(
            "end of input" if kind == "end" else f"unexpected token {val!r}",
            pos, ("number", "variable", "function", "'('"))


def parse(text: str, n: int) -> Expr:
    """Parse expression text over variables z1..zn into an Expr tree."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return _Parser(text, n).parse()


# ---------------------------------------------------------------------------
# printing (round-trips through parse)

def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _const_text(v: complex) -> str:
    if v.imag == 0:
        return _fmt_real(v.real)
    if v.real == 0:
        if v.imag == 1:
            return "i"
        return f"({_fmt_real(v.imag)}*i)" if v.imag >= 0 else f"(-{_fmt_real(-v.imag)}*i)"
    re_txt = _fmt_real(v.real)
    if v.imag >= 0:
        return f"({re_txt}+{_fmt_real(v.imag)}*i)"
    return f"({re_txt}-{_fmt_real(-v.imag)}*i)"


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def to_text(e: Expr) -> str:
    """Render to grammar-conforming text; parse(to_text(e)) rebuilds e."""

    def go(node, parent_prec):
        k = node.kind
        if k == "const":
            txt = _const_text(node.value)
            if txt.startswith("-") and parent_prec >= 2:
                txt = "(" + txt + ")"
            return txt
        if k == "var":
            base = f"z{node.index}"
            return f"conj({base})" if node.conjugated else base
        if k in ("re", "im", "abs", "abs2", "ln", "exp", "conj"):
            return f"{k}({go(node.children[0], 0)})"
        if k == "neg":
            # "-X^k" parses as (-X)^k, so the child must outrank pow here
            inner = go(node.children[0], _PREC["pow"] + 1)
            txt = "-" + inner
            return "(" + txt + ")" if parent_prec > 1 else txt
        if k == "pow":
            base = node.children[0]
            if base.kind == "var" and not base.conjugated:
                txt = f"z{base.index}^{node.exponent}"
            else:
                txt = f"({go(base, 0)})^{node.exponent}"
            return "(" + txt + ")" if parent_prec > _PREC["pow"] else txt
        prec = _PREC[k]
        symbol = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
        left = go(node.children[0], prec - 1)
        right = go(node.children[1], prec)
        txt = f"{left} {symbol} {right}" if prec == 1 else f"{left}{symbol}{right}"
        return "(" + txt + ")" if parent_prec >= prec else txt

    return go(e, 0)
