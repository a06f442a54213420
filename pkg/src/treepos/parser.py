"""Text syntax for expressions, expression files, and ground trees.

Grammar (whitespace insignificant, names match ``[A-Za-z_][A-Za-z0-9_]*``)::

    atom    := symbol | symbol '(' expr (',' expr)* ')' | '0' | '(' expr ')'
    star    := atom ('*' constant)*
    product := star ('.' constant star)*
    expr    := product ('+' product)*

Expression files carry two significant lines, ``alphabet: name:rank ...``
followed by ``expr: <expression>``; blank lines and ``#`` comments are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (
    Apply,
    Const,
    Empty,
    GroundTree,
    Product,
    RankedAlphabet,
    Star,
    Sum,
    TreeExpr,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # NAME LPAREN RPAREN COMMA PLUS DOT STAR ZERO END
    text: str
    pos: int


_PUNCT = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA", "+": "PLUS", ".": "DOT", "*": "STAR"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch == "0":
            tokens.append(_Token("ZERO", "0", i))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: RankedAlphabet):
        self.tokens = _tokenize(text)
        self.alphabet = alphabet
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        if self.cur.kind != kind:
            raise ParseError(f"expected {what}, found {self.cur.text or 'end of input'!r}",
                             self.cur.pos)
        return self.advance()

    def constant(self, role: str) -> str:
        tok = self.expect("NAME", f"a constant after '{role}'")
        if tok.text not in self.alphabet:
            raise ParseError(f"undeclared symbol {tok.text!r}", tok.pos)
        if self.alphabet.rank(tok.text) != 0:
            raise ParseError(f"{role} annotation {tok.text!r} is not a constant", tok.pos)
        return tok.text

    def expr(self) -> TreeExpr:
        node = self.product()
        while self.cur.kind == "PLUS":
            self.advance()
            node = Sum(node, self.product())
        return node

    def product(self) -> TreeExpr:
        node = self.star()
        while self.cur.kind == "DOT":
            self.advance()
            c = self.constant(".")
            node = Product(node, c, self.star())
        return node

    def star(self) -> TreeExpr:
        node = self.atom()
        while self.cur.kind == "STAR":
            self.advance()
            node = Star(node, self.constant("*"))
        return node

    def atom(self) -> TreeExpr:
        tok = self.cur
        if tok.kind == "ZERO":
            self.advance()
            return Empty()
        if tok.kind == "LPAREN":
            self.advance()
            node = self.expr()
            self.expect("RPAREN", "')'")
            return node
        if tok.kind == "NAME":
            self.advance()
            if tok.text not in self.alphabet:
                raise ParseError(f"undeclared symbol {tok.text!r}", tok.pos)
            rank = self.alphabet.rank(tok.text)
            if self.cur.kind == "LPAREN":
                self.advance()
                children = [self.expr()]
                while self.cur.kind == "COMMA":
                    self.advance()
                    children.append(self.expr())
                self.expect("RPAREN", "')'")
                if rank == 0:
                    raise ParseError(f"constant {tok.text!r} cannot take arguments", tok.pos)
                if rank != len(children):
                    raise ParseError(f"{tok.text!r} has rank {rank} but is applied to "
                                     f"{len(children)} arguments", tok.pos)
                return Apply(tok.text, tuple(children))
            if rank != 0:
                raise ParseError(f"{tok.text!r} has rank {rank} but is given no arguments",
                                 tok.pos)
            return Const(tok.text)
        raise ParseError(f"expected an expression, found {tok.text or 'end of input'!r}",
                         tok.pos)


def parse_expression(text: str, alphabet: RankedAlphabet) -> TreeExpr:
    """Parse an expression; every symbol must be declared in ``alphabet``."""
    parser = _Parser(text, alphabet)
    node = parser.expr()
    if parser.cur.kind != "END":
        raise ParseError(f"trailing input {parser.cur.text!r}", parser.cur.pos)
    return node


def parse_tree(text: str, alphabet: RankedAlphabet) -> GroundTree:
    """Parse a ground tree written as an s-expression such as ``g(b,a)``."""
    tokens = _tokenize(text)
    i = 0

    def node() -> GroundTree:
        nonlocal i
        tok = tokens[i]
        if tok.kind != "NAME":
            raise ParseError(f"expected a symbol, found {tok.text or 'end of input'!r}",
                             tok.pos)
        i += 1
        if tok.text not in alphabet:
            raise ParseError(f"undeclared symbol {tok.text!r}", tok.pos)
        rank = alphabet.rank(tok.text)
        children: list[GroundTree] = []
        if tokens[i].kind == "LPAREN":
            i += 1
            children.append(node())
            while tokens[i].kind == "COMMA":
                i += 1
                children.append(node())
            if tokens[i].kind != "RPAREN":
                raise ParseError("expected ')'", tokens[i].pos)
            i += 1
        if rank != len(children):
            raise ParseError(f"{tok.text!r} has rank {rank} but carries "
                             f"{len(children)} subtrees", tok.pos)
        return GroundTree(tok.text, tuple(children))

    tree = node()
    if tokens[i].kind != "END":
        raise ParseError(f"trailing input {tokens[i].text!r}", tokens[i].pos)
    return tree


def parse_expression_file(text: str) -> tuple[RankedAlphabet, TreeExpr]:
    """Read the two-line expression file format (see module docstring)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise ParseError("expected an 'alphabet:' line followed by an 'expr:' line")
    if not lines[0].startswith("alphabet:"):
        raise ParseError("first line must start with 'alphabet:'")
    if not lines[1].startswith("expr:"):
        raise ParseError("second line must start with 'expr:'")
    if len(lines) > 2:
        raise ParseError("unexpected extra content after the 'expr:' line")
    alphabet = RankedAlphabet.from_text(lines[0][len("alphabet:"):])
    expr = parse_expression(lines[1][len("expr:"):], alphabet)
    return alphabet, expr


def format_expression_file(alphabet: RankedAlphabet, expr: TreeExpr) -> str:
    from .expr import to_text

    decl = " ".join(f"{s}:{r}" for s, r in sorted(alphabet.ranks().items()))
    return f"alphabet: {decl}\nexpr: {to_text(expr)}\n"
