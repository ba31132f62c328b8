"""Polynomial expressions and the canonical operator text form.

Grammar (EBNF)::

    expr    = [ "+" | "-" ] term { ( "+" | "-" ) term } ;
    term    = factor { "*" factor } ;
    factor  = "-" factor | power ;
    power   = atom [ "^" integer ] ;
    atom    = integer | variable | "(" expr ")" ;
    variable = "x0" | ... | "x9" | "x" | "y" | "z" | "w" ;

Juxtaposition ("2x", "x y") is rejected.  The aliases x, y, z, w stand for
x0..x3 and may not be mixed with indexed names.
"""

import re

from .diffop import DiffOp, DProduct, OpTerm, Projection
from .errors import ExpressionSyntaxError, NegativeExponent, ParseError, UnknownVariable
from .field import PrimeField
from .poly import Polynomial, format_poly

ALIASES = {"x": 0, "y": 1, "z": 2, "w": 3}
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def _variable_index(name, pos):
    if name in ALIASES:
        return ALIASES[name], "alias"
    m = re.fullmatch(r"x([0-9])", name)
    if m:
        return int(m.group(1)), "indexed"
    raise UnknownVariable(f"unknown variable {name!r} at position {pos}")


class _Parser:
    # builds a dict-of-monomials over Z first; reduction mod p happens at the end

    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.styles = set()
        self.max_index = -1

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            if tok[0] == "end":
                raise ExpressionSyntaxError(f"expected {kind!r}, found end of input", tok[2])
            raise ExpressionSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ExpressionSyntaxError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "name", "("):
                raise ExpressionSyntaxError("implicit multiplication is not allowed", tok[2])
            raise ExpressionSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        value = _scale(self.term(), sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = _add(value, _scale(rhs, -1 if op == "-" else 1))
        return value

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "*":
                self.take()
                value = _mul(value, self.factor())
            elif tok[0] in ("int", "name", "("):
                raise ExpressionSyntaxError("implicit multiplication is not allowed", tok[2])
            else:
                return value

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return _scale(self.factor(), -1)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise NegativeExponent(f"negative exponent at position {tok[2]}")
            if tok[0] == "(":
                # allow a parenthesised integer, e.g. x^(3)
                self.take()
                if self.peek()[0] == "-":
                    raise NegativeExponent(f"negative exponent at position {self.peek()[2]}")
                k = self.take("int")[1]
                self.take(")")
            else:
                k = self.take("int")[1]
            if self.peek()[0] == "^":
                raise ExpressionSyntaxError("chained exponents need parentheses", self.peek()[2])
            return _pow(base, k)
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return {(): val}
        if kind == "name":
            idx, style = _variable_index(val, pos)
            self.styles.add(style)
            if len(self.styles) > 1:
                raise ParseError(f"mixed variable naming (x,y,z,w vs x0..x9) at position {pos}")
            self.max_index = max(self.max_index, idx)
            return {((idx, 1),): 1}
        if kind == "(":
            value = self.expr()
            self.take(")")
            return value
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", pos)
        raise ExpressionSyntaxError(f"unexpected {val!r}", pos)


# monomials during parsing: sorted tuples of (variable index, exponent)

def _mono_mul(a, b):
    d = dict(a)
    for i, k in b:
        d[i] = d.get(i, 0) + k
    return tuple(sorted(d.items()))


def _add(a, b):
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + c
    return out


def _scale(a, s):
    return {m: s * c for m, c in a.items()}


def _mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            out[m] = out.get(m, 0) + ca * cb
    return out


def _pow(a, k):
    if len(a) == 1:
        ((m, c),) = a.items()
        return {tuple((i, e * k) for i, e in m): c**k}
    out = {(): 1}
    for _ in range(k):
        out = _mul(out, a)
    return out


def parse_poly(text, p, nvars=None):
    """Parse an expression into a Polynomial over F_p.

    ``nvars`` defaults to one more than the largest variable index used.
    """
    F = p if isinstance(p, PrimeField) else PrimeField(p)
    parser = _Parser(text)
    raw = parser.parse()
    if nvars is None:
        nvars = max(parser.max_index + 1, 1)
    elif parser.max_index >= nvars:
        raise UnknownVariable(f"variable index {parser.max_index} exceeds nvars={nvars}")
    terms = {}
    for m, c in raw.items():
        exps = [0] * nvars
        for i, e in m:
            exps[i] = e
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return Polynomial(F, nvars, terms)


def format_operator(op):
    """Canonical text: a header line, then one  post | core | pre  line per term."""
    lines = [f"diffop p={op.p} nvars={op.nvars} level={op.level}"]
    for t in op.terms:
        lines.append(f"{format_poly(t.post)} | {t.core.text()} | {format_poly(t.pre)}")
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"diffop\s+p=(\d+)\s+nvars=(\d+)\s+level=(\d+)\s*$")
_DCORE = re.compile(r"D\(([\d,\s]*)\)$")
_PCORE = re.compile(r"P\((\d+)\s*;([\d,\s]*)\)$")


def parse_operator(text):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty operator text")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParseError(f"bad operator header {lines[0]!r}")
    p, nvars, level = map(int, m.groups())
    F = PrimeField(p)
    terms = []
    for ln in lines[1:]:
        pieces = [s.strip() for s in ln.split("|")]
        if len(pieces) != 3:
            raise ParseError(f"operator term needs 'post | core | pre': {ln!r}")
        post, core, pre = pieces
        if (dm := _DCORE.match(core)):
            t = tuple(int(s) for s in dm.group(1).split(","))
            core_obj = DProduct(t)
        elif (pm := _PCORE.match(core)):
            mu = tuple(int(s) for s in pm.group(2).split(","))
            core_obj = Projection(int(pm.group(1)), mu)
        else:
            raise ParseError(f"unknown operator core {core!r}")
        terms.append(OpTerm(parse_poly(post, F, nvars), core_obj, parse_poly(pre, F, nvars)))
    return DiffOp(terms, level, F, nvars)
