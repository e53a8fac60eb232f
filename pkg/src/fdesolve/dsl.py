"""A small equation language that lowers to the JSON problem format.

Example::

    let alpha = 1/2
    let w = 2
    D^2a y + w^2 y = 3 cos(1)

Grammar (LL(1); newlines and ``;`` separate statements)::

    program   := { statement sep }
    statement := "let" NAME "=" expr | side "=" side
    side      := term { ("+" | "-") term }
    term      := ["+" | "-"] factor { ["*" | "/"] factor }
    factor    := primary ["^" unary]
    primary   := NUMBER | NAME | "(" expr ")"
               | "D" ["^" dexp] yarg | "y"
               | "E" "(" expr ")" | "cos" "(" expr ")" | "sin" "(" expr ")"
               | "t" ["^" texp]
    dexp      := AMULT | "a" | "alpha" | "(" dexp ")"
    texp      := AMULT | "a" | "alpha" | NUMBER | "(" texp ")"
    yarg      := "y" | "(" "y" ")" | "[" "y" "]"

``AMULT`` is an integer written directly against ``a`` or ``alpha`` (``2a``,
``3alpha``) and means that multiple of the order.  A plain ``t^2`` is kept as
an ordinary exponent and converted to a multiple of alpha on lowering.
Operator terms and forcing atoms may appear on either side of ``=``.
"""

import math
import re
from dataclasses import dataclass

from .errors import ParseError, ValidationError

RESERVED = {"D", "y", "E", "t", "cos", "sin", "let", "alpha"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n|;)
  | (?P<amult>\d+(?:a|alpha)(?![A-Za-z0-9_]))
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^=()\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str   # "num", "name", "amult", "op", "nl", "eof"
    text: str
    line: int
    column: int

    def describe(self):
        if self.kind == "eof":
            return "end of input"
        if self.kind == "nl":
            return "end of line"
        return repr(self.text)


def tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col,
                             ("number", "name", "operator"))
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token("nl", m.group(), line, col))
            if m.group() == "\n":
                line += 1
                line_start = m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# values produced by factors
@dataclass
class _Special:
    kind: str          # "op" (power j of D) | "ml" | "trig" | "tpow" | "talpha"
    j: int = 0
    rate: float = 0.0
    func: str = ""
    p: float = 0.0


class Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0
        self.env = {}
        self.equation = None

    # token helpers ----------------------------------------------------

    @property
    def tok(self):
        return self.tokens[self.i]

    def _is(self, kind, text=None):
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def _advance(self):
        t = self.tok
        self.i += 1
        return t

    def _fail(self, expected, what=None):
        t = self.tok
        raise ParseError(what or f"unexpected {t.describe()}", t.line, t.column, expected)

    def _expect(self, kind, text=None):
        if not self._is(kind, text):
            self._fail([text or kind])
        return self._advance()

    # grammar ---------------------------------------------------------

    def parse(self):
        while not self._is("eof"):
            if self._is("nl"):
                self._advance()
                continue
            self.statement()
            if not (self._is("nl") or self._is("eof")):
                self._fail(["end of line", "+", "-", "*", "/", "="])
        if self.equation is None:
            t = self.tok
            raise ParseError("no equation found", t.line, t.column, ("equation",))
        return self.equation

    def statement(self):
        if self._is("name", "let"):
            self._advance()
            name = self._expect("name")
            if name.text in RESERVED - {"alpha"}:
                raise ParseError(f"cannot bind reserved name {name.text!r}",
                                 name.line, name.column, ("name",))
            self._expect("op", "=")
            value = self.expr()
            self.env[name.text] = value
            return
        start = self.tok
        if self.equation is not None:
            raise ParseError("only one equation is allowed", start.line, start.column,
                             ("let",))
        left = self.side()
        self._expect("op", "=")
        right = self.side()
        self.equation = (left, right, start)

    def side(self):
        terms = [self.term()]
        while self._is("op", "+") or self._is("op", "-"):
            terms.append(self.term())
        return terms

    def term(self):
        tok = self.tok
        sign = 1.0
        if self._is("op", "+") or self._is("op", "-"):
            if self._advance().text == "-":
                sign = -1.0
        coeff, special = sign, None
        first = True
        while True:
            if not first:
                if self._is("op", "*"):
                    self._advance()
                elif self._is("op", "/"):
                    self._advance()
                    at = self.tok
                    v = self.factor()
                    if isinstance(v, _Special):
                        raise ParseError("can only divide by a number", at.line, at.column,
                                         ("number",))
                    if v == 0:
                        raise ParseError("division by zero", at.line, at.column, ("nonzero",))
                    coeff /= v
                    continue
                elif not self._starts_factor():
                    break
            at = self.tok
            v = self.factor()
            first = False
            if isinstance(v, _Special):
                if special is not None:
                    raise ParseError("at most one of D^..y, E, cos, sin, t^.. per term",
                                     at.line, at.column, ("number", "name"))
                special = v
            else:
                coeff *= v
        return coeff, special, tok

    def _starts_factor(self):
        t = self.tok
        return t.kind in ("num", "name", "amult") or (t.kind == "op" and t.text == "(")

    def factor(self):
        base = self.primary()
        if self._is("op", "^"):
            at = self._advance()
            if isinstance(base, _Special):
                raise ParseError("cannot raise this to a power", at.line, at.column, ("number",))
            exp = self.unary()
            base = _pow(base, exp, at)
        return base

    def unary(self):
        sign = 1.0
        while self._is("op", "-") or self._is("op", "+"):
            if self._advance().text == "-":
                sign = -sign
        return sign * self.primary_number()

    def primary_number(self):
        at = self.tok
        v = self.primary()
        if isinstance(v, _Special):
            raise ParseError("expected a number here", at.line, at.column, ("number",))
        return v

    def expr(self):
        """Purely numeric expression (bindings and function arguments)."""
        total = 0.0
        for coeff, special, tok in self.side():
            if special is not None:
                raise ParseError("expected a numeric expression", tok.line, tok.column,
                                 ("number", "name"))
            total += coeff
        return total

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self._advance()
            return float(t.text)
        if t.kind == "amult":
            raise ParseError("a multiple of alpha is only allowed as an exponent of D or t",
                             t.line, t.column, ("number", "name"))
        if t.kind == "op" and t.text == "(":
            self._advance()
            v = self.expr()
            self._expect("op", ")")
            return v
        if t.kind != "name":
            self._fail(["number", "name", "(", "D", "y", "E", "t", "cos", "sin"])
        name = t.text
        if name == "D":
            self._advance()
            j = 1
            if self._is("op", "^"):
                self._advance()
                j = self.alpha_multiple(allow_plain=False)
            self.yarg()
            return _Special("op", j=j)
        if name == "y":
            self._advance()
            return _Special("op", j=0)
        if name in ("E", "cos", "sin"):
            self._advance()
            self._expect("op", "(")
            v = self.expr()
            self._expect("op", ")")
            if name == "E":
                return _Special("ml", rate=v)
            return _Special("trig", func=name, rate=v)
        if name == "t":
            self._advance()
            if not self._is("op", "^"):
                return _Special("talpha", p=1.0, j=-1)
            self._advance()
            at = self.tok
            if at.kind == "num":
                self._advance()
                return _Special("tpow", p=float(at.text))
            return _Special("talpha", j=self.alpha_multiple(allow_plain=True))
        if name in ("let", "alpha") and name not in self.env:
            self._fail(["number", "name"], f"unexpected keyword {name!r}")
        self._advance()
        if name not in self.env:
            raise ParseError(f"unbound name {name!r}", t.line, t.column, sorted(self.env) or ("number",))
        return self.env[name]

    def alpha_multiple(self, allow_plain):
        t = self.tok
        if t.kind == "amult":
            self._advance()
            return int(re.match(r"\d+", t.text).group())
        if t.kind == "name" and t.text in ("a", "alpha"):
            self._advance()
            return 1
        if t.kind == "op" and t.text == "(":
            self._advance()
            j = self.alpha_multiple(allow_plain)
            self._expect("op", ")")
            return j
        expected = ["2a", "a", "("] + (["number"] if allow_plain else [])
        self._fail(expected, "expected a multiple of alpha such as 2a")

    def yarg(self):
        if self._is("name", "y"):
            self._advance()
            return
        for open_, close in (("(", ")"), ("[", "]")):
            if self._is("op", open_):
                self._advance()
                self._expect("name", "y")
                self._expect("op", close)
                return
        self._fail(["y", "(", "["])


def _pow(base, exp, at):
    try:
        v = float(base) ** float(exp)
    except (OverflowError, ZeroDivisionError) as exc:
        raise ParseError(f"bad power: {exc}", at.line, at.column, ("number",)) from None
    if isinstance(v, complex) or not math.isfinite(v):
        raise ParseError("power is not a finite real number", at.line, at.column, ("number",))
    return v


def parse_dsl(text, alpha=None):
    """Parse DSL text into a JSON-style problem dict.

    ``alpha`` may come from the caller (e.g. a JSON wrapper) or from a
    ``let alpha = ...`` binding; exactly one source must provide it.
    """
    try:
        p = Parser(text)
        left, right, start = p.parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", 1, 1, ()) from None
    if "alpha" in p.env:
        if alpha is not None and p.env["alpha"] != alpha:
            raise ValidationError("alpha given twice with different values")
        alpha = p.env["alpha"]
    if alpha is None:
        raise ValidationError("alpha is not set; add 'let alpha = ...'")
    ops = {}
    forcing = []
    for side, sign in ((left, 1.0), (right, -1.0)):
        for coeff, special, tok in side:
            if not math.isfinite(coeff):
                raise ValidationError(f"line {tok.line}: coefficient is not finite")
            if special is not None and special.kind == "op":
                ops[special.j] = ops.get(special.j, 0.0) + sign * coeff
                continue
            c = -sign * coeff
            if special is None:
                forcing.append({"kind": "power", "coeff": c, "k": 0})
            elif special.kind == "ml":
                forcing.append({"kind": "ml", "coeff": c, "rate": special.rate})
            elif special.kind == "trig":
                forcing.append({"kind": special.func, "coeff": c, "rate": special.rate})
            elif special.kind == "tpow":
                forcing.append({"kind": "power", "coeff": c, "p": special.p})
            elif special.j == -1:  # bare t
                forcing.append({"kind": "power", "coeff": c, "p": 1.0})
            else:
                forcing.append({"kind": "power", "coeff": c, "k": special.j})
    if not ops:
        raise ValidationError("equation has no y terms")
    degree = max(ops)
    operator = [ops.get(j, 0.0) for j in range(degree + 1)]
    return {"alpha": alpha, "operator": operator, "forcing": forcing}
