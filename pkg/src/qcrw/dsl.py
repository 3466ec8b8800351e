"""Textual circuit format.

Grammar (UTF-8):

    program  := ("qc" | "lopp") INT "{" stmt* "}"
    stmt     := NAME [ "(" expr ")" ] wires ";"
    wires    := INT*                      -- 0-based, top wire is 0
    expr     := decimal literals, "pi", + - * /, unary minus, parens

QC statements: h, p(e), cnot a b, swap a b, s(e), x, z, rx(e), cp(e) a b,
lambda[BITS|BITS] base(e)? [start].  LOPP statements: ps(e) w,
bs(e) w (acting on w, w+1), swap a b.  Non-adjacent cnot/swap/cp are
macro-expanded through adjacent swaps at parse time.

The printer emits the canonical layer-by-layer form, so parse(print(c))
re-layers to exactly layer(c).
"""

from __future__ import annotations

import math
import re

from .angles import fmt
from .circuits import (Flavor, Gate, Kind, LayeredCircuit, RawCircuit,
                       adjacent_swaps, cnot_at, embed, gate_circuit, identity,
                       layer, par, seq, seq_all)
from .errors import ParseError, WireRangeError

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+\.\d*|\.\d+|\d+)
  | (?P<name>[a-zA-Z_][a-zA-Z_0-9]*)
  | (?P<bits>\[[01]*\|[01]*\])
  | (?P<punct>[{}();+\-*/,])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        raw = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, raw, line, col))
        nl = raw.count("\n")
        if nl:
            line += nl
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, got {t.text!r}", t.line, t.col)
        return t

    def int_(self) -> int:
        t = self.next()
        if t.kind != "num" or "." in t.text:
            raise ParseError(f"expected integer, got {t.text!r}", t.line, t.col)
        return int(t.text)

    # expression grammar: sum of products of atoms
    def expr(self) -> float:
        v = self.term()
        while self.peek().text in "+-":
            op = self.next().text
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> float:
        v = self.atom()
        while self.peek().text in "*/":
            op = self.next().text
            rhs = self.atom()
            v = v * rhs if op == "*" else v / rhs
        return v

    def atom(self) -> float:
        t = self.next()
        if t.text == "-":
            return -self.atom()
        if t.text == "+":
            return self.atom()
        if t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "num":
            return float(t.text)
        if t.kind == "name" and t.text == "pi":
            return math.pi
        raise ParseError(f"expected number, got {t.text!r}", t.line, t.col)


_BASE_NAMES = {"s": Kind.S, "x": Kind.X, "rx": Kind.RX, "p": Kind.P}


def parse(text: str) -> RawCircuit:
    p = _Parser(text)
    head = p.next()
    if head.text not in ("qc", "lopp"):
        raise ParseError(f"expected 'qc' or 'lopp', got {head.text!r}",
                         head.line, head.col)
    flavor = Flavor.QC if head.text == "qc" else Flavor.LOPP
    n = p.int_()
    p.expect("{")
    parts: list[RawCircuit] = []
    while p.peek().text != "}":
        parts.append(_statement(p, flavor, n))
        p.expect(";")
    p.expect("}")
    if p.peek().kind != "eof":
        p.fail(f"trailing input {p.peek().text!r}")
    if not parts:
        return identity(n, flavor)
    return seq_all(parts, n, flavor)


def _wire(p: _Parser, n: int, span: int = 1) -> int:
    t = p.peek()
    w = p.int_()
    if not 0 <= w <= n - span:
        raise ParseError(f"wire {w} out of range for {n} wires", t.line, t.col)
    return w


def _statement(p: _Parser, flavor: Flavor, n: int) -> RawCircuit:
    t = p.next()
    name = t.text

    def angle() -> float:
        p.expect("(")
        v = p.expr()
        p.expect(")")
        return v

    if flavor is Flavor.QC:
        if name == "h":
            return embed(Gate(Kind.H), _wire(p, n), n)
        if name == "p":
            a = angle()
            return embed(Gate(Kind.P, a), _wire(p, n), n)
        if name == "x":
            return embed(Gate(Kind.X), _wire(p, n), n)
        if name == "z":
            return embed(Gate(Kind.Z), _wire(p, n), n)
        if name == "rx":
            a = angle()
            return embed(Gate(Kind.RX, a), _wire(p, n), n)
        if name == "s":
            a = angle()
            s = gate_circuit(Gate(Kind.S, a))
            return par(s, identity(n, flavor)) if n else s
        if name == "cnot":
            c, tg = _wire(p, n), _wire(p, n)
            if c == tg:
                raise ParseError("cnot control equals target", t.line, t.col)
            return cnot_at(c, tg, n)
        if name == "cp":
            a = angle()
            w1, w2 = _wire(p, n), _wire(p, n)
            if w1 == w2:
                raise ParseError("cp wires must differ", t.line, t.col)
            lo, hi = min(w1, w2), max(w1, w2)  # cp is symmetric
            if hi == lo + 1:
                return embed(Gate(Kind.CP, a), lo, n)
            pre = adjacent_swaps(lo + 1, hi, n, flavor)
            mid = embed(Gate(Kind.CP, a), lo, n)
            return seq_all(pre + [mid] + list(reversed(pre)), n, flavor)
        if name == "lambda":
            bits = p.next()
            if bits.kind != "bits":
                raise ParseError("expected [BITS|BITS] after lambda",
                                 bits.line, bits.col)
            x, y = bits.text[1:-1].split("|")
            base_t = p.next()
            base = _BASE_NAMES.get(base_t.text)
            if base is None:
                raise ParseError(f"unsupported lambda base {base_t.text!r}",
                                 base_t.line, base_t.col)
            a = 0.0
            if base in (Kind.S, Kind.RX, Kind.P):
                a = angle()
            g = Gate(Kind.LAMBDA, a, x=x, y=y, base=base)
            w = 0
            if p.peek().kind == "num":
                w = _wire(p, n, span=g.arity)
            elif g.arity != n:
                raise ParseError(
                    f"lambda spans {g.arity} wires; give a start wire",
                    t.line, t.col)
            return embed(g, w, n)
    else:
        if name == "ps":
            a = angle()
            return embed(Gate(Kind.PS, a), _wire(p, n), n, flavor)
        if name == "bs":
            a = angle()
            return embed(Gate(Kind.BS, a), _wire(p, n, span=2), n, flavor)
    if name == "swap":
        a, b = _wire(p, n), _wire(p, n)
        if a == b:
            raise ParseError("swap wires must differ", t.line, t.col)
        return seq_all(adjacent_swaps(a, b, n, flavor), n, flavor)
    raise ParseError(f"unknown {flavor.value} statement {name!r}", t.line, t.col)


# --------------------------------------------------------------------------
# printing

def _stmt(placed_gate: Gate, wire: int) -> str:
    g = placed_gate
    k = g.kind
    if k is Kind.H:
        return f"h {wire}"
    if k is Kind.P:
        return f"p({fmt(g.angle)}) {wire}"
    if k is Kind.X:
        return f"x {wire}"
    if k is Kind.Z:
        return f"z {wire}"
    if k is Kind.RX:
        return f"rx({fmt(g.angle)}) {wire}"
    if k is Kind.CNOT:
        return f"cnot {wire} {wire + 1}"
    if k is Kind.CP:
        return f"cp({fmt(g.angle)}) {wire} {wire + 1}"
    if k is Kind.SWAP:
        return f"swap {wire} {wire + 1}"
    if k is Kind.LAMBDA:
        base = g.base.value
        ang = "" if g.base is Kind.X else f"({fmt(g.angle)})"
        return f"lambda[{g.x}|{g.y}] {base}{ang} {wire}"
    if k is Kind.PS:
        return f"ps({fmt(g.angle)}) {wire}"
    if k is Kind.BS:
        return f"bs({fmt(g.angle)}) {wire}"
    raise WireRangeError(f"cannot print {k}")


def print_circuit(c: RawCircuit | LayeredCircuit) -> str:
    """Emit the canonical layer-by-layer DSL text."""
    lc = layer(c) if isinstance(c, RawCircuit) else c
    head = "qc" if lc.flavor is Flavor.QC else "lopp"
    lines = [f"{head} {lc.wires} {{"]
    for phi in lc.phases:
        lines.append(f"  s({fmt(phi)});")
    for layer_ in lc.layers:
        lines.append("  " + " ".join(_stmt(p.gate, p.wire) + ";" for p in layer_))
    lines.append("}")
    return "\n".join(lines) + "\n"
