"""Canonical polynomials in z and conj(z), with a small input language.

A planar mapping is stored as a sparse map from exponent pairs (a, b) to
complex coefficients, meaning  w(z) = sum c_{a,b} z^a conj(z)^b.  This
closure is preserved by the Wirtinger derivatives

    d/dz   (z^a conj(z)^b) = a z^(a-1) conj(z)^b
    d/dzbar(z^a conj(z)^b) = b z^a conj(z)^(b-1)

so differentiation is exact and equality of mappings is decidable.

Grammar (also in the README)::

    expr     = term { ("+" | "-") term } ;
    term     = factor { ("*" | "/") factor } ;
    factor   = ("+" | "-") factor | power ;
    power    = atom [ "^" integer ] ;
    atom     = number | "i" | "z" | "conj" "(" expr ")"
             | "abs2" "(" expr ")" | "|" "z" "|" | "(" expr ")" ;

|z|^m requires even m (odd powers of |z| are not C^2 at the origin) and
division is allowed by nonzero constants only, so everything stays
polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

import numpy as np

from . import _kernels

__all__ = [
    "MappingExpr",
    "ParseDiagnostic",
    "ParseError",
    "parse",
    "evaluate",
    "d_z",
    "d_zbar",
    "laplacian",
]


@dataclass(frozen=True)
class ParseDiagnostic:
    """Where and why an input expression was rejected."""

    position: int
    message: str
    kind: str  # "lex" | "syntax" | "semantic"


class ParseError(ValueError):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(f"{diagnostic.kind} error at offset {diagnostic.position}: {diagnostic.message}")
        self.diagnostic = diagnostic


class MappingExpr:
    """Immutable canonical polynomial in (z, conj z).

    Zero coefficients are never stored, so two mappings are equal exactly
    when their term maps are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], complex] = ()):
        cleaned: dict[tuple[int, int], complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (a, b), c in items:
            a, b = int(a), int(b)
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent pair ({a}, {b})")
            c = complex(c)
            if c != 0:
                cleaned[(a, b)] = cleaned.get((a, b), 0j) + c
                if cleaned[(a, b)] == 0:
                    del cleaned[(a, b)]
        object.__setattr__(self, "_terms", cleaned)

    # -- basic protocol ------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, int], complex]:
        return dict(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MappingExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __iter__(self) -> Iterator[tuple[tuple[int, int], complex]]:
        return iter(sorted(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"MappingExpr({self.to_source()!r})"

    # -- algebra ---------------------------------------------------------

    def __add__(self, other):
        other = _as_expr(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0j) + c
        return MappingExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return MappingExpr({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_expr(other))

    def __rsub__(self, other):
        return _as_expr(other) + (-self)

    def __mul__(self, other):
        other = _as_expr(other)
        out: dict[tuple[int, int], complex] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0j) + c1 * c2
        return MappingExpr(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = complex(c)
        if c == 0:
            raise ZeroDivisionError("division of a mapping by zero")
        return MappingExpr({k: v / c for k, v in self._terms.items()})

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power of a mapping")
        out = MappingExpr({(0, 0): 1.0})
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def conj(self) -> "MappingExpr":
        return MappingExpr({(b, a): c.conjugate() for (a, b), c in self._terms.items()})

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def constant_value(self) -> complex:
        if not self.is_constant():
            raise ValueError("mapping is not constant")
        return self._terms.get((0, 0), 0j)

    def degree(self) -> int:
        return max((a + b for a, b in self._terms), default=0)

    # -- evaluation ------------------------------------------------------

    def _packed(self):
        keys = sorted(self._terms)
        a = np.array([k[0] for k in keys], dtype=np.int64)
        b = np.array([k[1] for k in keys], dtype=np.int64)
        c = np.array([self._terms[k] for k in keys], dtype=np.complex128)
        return a, b, c

    def __call__(self, z):
        if np.isscalar(z) or np.asarray(z).ndim == 0:
            zc = complex(z)
            return complex(sum(c * zc**a * zc.conjugate() ** b for (a, b), c in self._terms.items()))
        pts = np.asarray(z, dtype=np.complex128)
        a, b, c = self._packed()
        return _kernels.poly_eval(a, b, c, pts.ravel()).reshape(pts.shape)

    # -- printing ----------------------------------------------------------

    def to_source(self) -> str:
        """Canonical text form; ``parse`` round-trips it to an equal mapping."""
        if not self._terms:
            return "0"
        parts: list[str] = []
        for (a, b), c in sorted(self._terms.items()):
            mono = []
            if a == 1:
                mono.append("z")
            elif a > 1:
                mono.append(f"z^{a}")
            if b == 1:
                mono.append("conj(z)")
            elif b > 1:
                mono.append(f"conj(z)^{b}")
            sign, mag = _format_coeff(c, bare=not mono)
            body = "*".join(([mag] if mag else []) + mono)
            if not parts:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(("+ " if sign == "+" else "- ") + body)
        return " ".join(parts)


def _format_coeff(c: complex, bare: bool) -> tuple[str, str]:
    """Split a coefficient into a leading sign and a magnitude fragment."""
    re_, im = c.real, c.imag
    if im == 0:
        sign = "-" if re_ < 0 else "+"
        mag = "" if (not bare and abs(re_) == 1) else repr(abs(re_))
        return sign, mag
    if re_ == 0:
        sign = "-" if im < 0 else "+"
        mag = "i" if abs(im) == 1 else f"{abs(im)!r}*i"
        return sign, mag
    inner_sign = "+" if im > 0 else "-"
    return "+", f"({re_!r} {inner_sign} {abs(im)!r}*i)"


def _as_expr(x) -> MappingExpr:
    if isinstance(x, MappingExpr):
        return x
    return MappingExpr({(0, 0): complex(x)})


# ----------------------------------------------------------------------
# Wirtinger operators
# ----------------------------------------------------------------------

def d_z(e: MappingExpr) -> MappingExpr:
    """Derivative in z: term-wise a * z^(a-1) conj(z)^b."""
    return MappingExpr({(a - 1, b): a * c for (a, b), c in e._terms.items() if a > 0})


def d_zbar(e: MappingExpr) -> MappingExpr:
    """Derivative in conj(z): term-wise b * z^a conj(z)^(b-1)."""
    return MappingExpr({(a, b - 1): b * c for (a, b), c in e._terms.items() if b > 0})


def laplacian(e: MappingExpr) -> MappingExpr:
    """4 d_z d_zbar e; the operator order does not matter."""
    return 4.0 * d_z(d_zbar(e))


def evaluate(e: MappingExpr, z):
    """Evaluate the mapping at a complex point or array of points."""
    return e(z)


# ----------------------------------------------------------------------
# Lexer
# ----------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # NUM NAME + - * / ^ ( ) | END
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    toks: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()|":
            toks.append(_Token(ch, ch, i))
            i += 1
            continue
        m = _NUMBER_RE.match(source, i)
        if m:
            toks.append(_Token("NUM", m.group(), i))
            i = m.end()
            continue
        m = _NAME_RE.match(source, i)
        if m:
            toks.append(_Token("NAME", m.group(), i))
            i = m.end()
            continue
        raise ParseError(ParseDiagnostic(i, f"unexpected character {ch!r}", "lex"))
    toks.append(_Token("END", "", n))
    return toks


# ----------------------------------------------------------------------
# Recursive-descent parser
# ----------------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.toks = _tokenize(source)
        self.i = 0

    def peek(self) -> _Token:
        return self.toks[self.i]

    def take(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            self.fail(t.pos, f"expected {kind!r}, found {t.text or 'end of input'!r}")
        return self.take()

    def fail(self, pos: int, message: str, kind: str = "syntax"):
        # end-of-input errors point at the last character, not one past it
        pos = min(pos, max(0, len(self.source) - 1))
        raise ParseError(ParseDiagnostic(pos, message, kind))

    # expr = term { (+|-) term }
    def parse_expr(self) -> MappingExpr:
        out = self.parse_term()
        while self.peek().kind in "+-":
            op = self.take()
            rhs = self.parse_term()
            out = out + rhs if op.kind == "+" else out - rhs
        return out

    # term = factor { (*|/) factor }
    def parse_term(self) -> MappingExpr:
        out = self.parse_factor()
        while self.peek().kind in "*/":
            op = self.take()
            rhs_pos = self.peek().pos
            rhs = self.parse_factor()
            if op.kind == "*":
                out = out * rhs
            else:
                if not rhs.is_constant():
                    self.fail(rhs_pos, "division is only allowed by constant expressions", "semantic")
                v = rhs.constant_value()
                if v == 0:
                    self.fail(rhs_pos, "division by zero", "semantic")
                out = out / v
        return out

    # factor = (+|-) factor | power
    def parse_factor(self) -> MappingExpr:
        t = self.peek()
        if t.kind == "+":
            self.take()
            return self.parse_factor()
        if t.kind == "-":
            self.take()
            return -self.parse_factor()
        return self.parse_power()

    # power = atom [ ^ integer ]
    def parse_power(self) -> MappingExpr:
        base, abs_pos = self.parse_atom()
        m = None
        if self.peek().kind == "^":
            self.take()
            t = self.peek()
            if t.kind == "-":
                self.fail(t.pos, "negative exponents are not allowed", "semantic")
            t = self.expect("NUM")
            if not t.text.isdigit():
                self.fail(t.pos, "exponent must be a nonnegative integer", "syntax")
            m = int(t.text)
        if abs_pos is not None:
            # |z| atom: needs an even power to stay a polynomial in z, conj z
            m_eff = 1 if m is None else m
            if m_eff % 2:
                self.fail(abs_pos, f"|z|^{m_eff} has odd power; only even powers are smooth at 0", "semantic")
            return MappingExpr({(m_eff // 2, m_eff // 2): 1.0})
        return base if m is None else base**m

    # atom = NUM | i | z | conj(expr) | abs2(expr) | |z| | (expr)
    def parse_atom(self) -> tuple[MappingExpr, int | None]:
        t = self.peek()
        if t.kind == "NUM":
            self.take()
            return MappingExpr({(0, 0): float(t.text)}), None
        if t.kind == "NAME":
            self.take()
            if t.text == "z":
                return MappingExpr({(1, 0): 1.0}), None
            if t.text == "i":
                return MappingExpr({(0, 0): 1j}), None
            if t.text in ("conj", "abs2"):
                self.expect("(")
                inner = self.parse_expr()
                self.expect(")")
                if t.text == "conj":
                    return inner.conj(), None
                return inner * inner.conj(), None
            self.fail(t.pos, f"unknown name {t.text!r}", "syntax")
        if t.kind == "(":
            self.take()
            inner = self.parse_expr()
            self.expect(")")
            return inner, None
        if t.kind == "|":
            pipe = self.take()
            zt = self.peek()
            if not (zt.kind == "NAME" and zt.text == "z"):
                self.fail(zt.pos, "only |z| is supported between bars", "syntax")
            self.take()
            self.expect("|")
            return MappingExpr(), pipe.pos
        self.fail(t.pos, f"unexpected {t.text or 'end of input'!r}", "syntax")


def parse(source: str) -> MappingExpr:
    """Parse the mapping language into a canonical polynomial.

    Raises :class:`ParseError` carrying a :class:`ParseDiagnostic` with the
    byte offset and whether the problem is lexical, syntactic, or semantic.
    """
    p = _Parser(source)
    out = p.parse_expr()
    t = p.peek()
    if t.kind != "END":
        p.fail(t.pos, f"unexpected trailing {t.text!r}")
    return out
