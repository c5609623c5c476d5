"""Shared tokenizer and precedence-climbing parser for expression syntaxes.

Every concrete grammar (scalars, divisor functions, functionals, operators,
Fock vectors) plugs in an atom handler; the operator layer +-*/^() and the
error reporting with 1-based columns live here.
"""

from .errors import ExprSyntaxError

_PUNCT = ("+", "-", "*", "/", "^", "(", ")", "[", "]", ";", ",", "@")


class Token:
    __slots__ = ("kind", "value", "column")

    def __init__(self, kind, value, column):
        self.kind = kind  # "num", "name", punctuation literal, "end"
        self.value = value
        self.column = column

    def __repr__(self):
        return f"Token({self.kind!r}, {self.value!r}, col={self.column})"


def tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("num", int(text[i:j]), col))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], col))
            i = j
        elif ch in _PUNCT:
            tokens.append(Token(ch, ch, col))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", col)
    tokens.append(Token("end", None, n + 1))
    return tokens


class TokenStream:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok.value!r}" if tok.kind != "end"
                                  else f"expected {kind!r}, found end of input", tok.column)
        return self.next()

    def at_end(self):
        return self.peek().kind == "end"


class ExprParser:
    """Parses +-*/^ expressions; subclasses supply atoms and constants.

    Subclasses implement parse_atom(stream, token) for "name" tokens and
    from_int(n) for numeric literals.  Values must support the arithmetic
    operators and integer powers.
    """

    def parse(self, text):
        stream = TokenStream(text)
        value = self.parse_expr(stream)
        tok = stream.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {tok.value!r}", tok.column)
        return value

    def parse_expr(self, stream):
        value = self.parse_term(stream)
        while stream.peek().kind in ("+", "-"):
            op = stream.next().kind
            rhs = self.parse_term(stream)
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self, stream):
        value = self.parse_factor(stream)
        while stream.peek().kind in ("*", "/"):
            op = stream.next().kind
            rhs = self.parse_factor(stream)
            value = value * rhs if op == "*" else value / rhs
        return value

    def parse_factor(self, stream):
        tok = stream.peek()
        if tok.kind == "-":
            stream.next()
            return -self.parse_factor(stream)
        if tok.kind == "+":
            stream.next()
            return self.parse_factor(stream)
        value = self.parse_primary(stream)
        if stream.peek().kind == "^":
            stream.next()
            n = self.parse_int(stream)
            value = value ** n
        return value

    def parse_primary(self, stream):
        tok = stream.next()
        if tok.kind == "num":
            return self.from_int(tok.value)
        if tok.kind == "(":
            value = self.parse_expr(stream)
            stream.expect(")")
            return value
        if tok.kind == "name":
            return self.parse_atom(stream, tok)
        if tok.kind == "end":
            raise ExprSyntaxError("unexpected end of input", tok.column)
        raise ExprSyntaxError(f"unexpected {tok.value!r}", tok.column)

    def parse_int(self, stream):
        sign = 1
        tok = stream.peek()
        if tok.kind == "-":
            stream.next()
            sign = -1
        elif tok.kind == "+":
            stream.next()
        tok = stream.expect("num")
        return sign * tok.value

    def from_int(self, n):
        raise NotImplementedError

    def parse_atom(self, stream, token):
        raise NotImplementedError
