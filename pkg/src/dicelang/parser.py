"""Recursive-descent parser producing a RollExpression AST.

Precedence, tightest first: dice terms, postfix dice operations
(left-associated, chainable), unary minus, ``* / \\``, ``+ -``, with
parentheses grouping and ``;`` as the statement separator.
"""

from __future__ import annotations

from .errors import (EmptyRange, MissingSides, MixedFaces, NegativeKeepCount,
                     NegativeSides, ParseError)
from .nodes import (BinaryMath, Coin, Condition, Count, DiceNode, DiceOpNode,
                    Explode, Fate, Filter, Group, IntLiteral, KeepDrop,
                    MacroAccess, MacroDefinition, NumericFaces, Percent,
                    Reroll, RollExpression, Seq, StandardSides, SymbolicFaces,
                    Unique, UnaryNegate)
from .tokens import Token, TokenKind, tokenize

_FACE_STARTERS = (TokenKind.INT, TokenKind.PERCENT, TokenKind.F,
                  TokenKind.LBRACE)
_COMPARATORS = {
    TokenKind.EQ: "==",
    TokenKind.NEQ: "!=",
    TokenKind.LT: "<",
    TokenKind.GT: ">",
    TokenKind.LE: "<=",
    TokenKind.GE: ">=",
}
_ADDITIVE = {TokenKind.PLUS: "+", TokenKind.MINUS: "-"}
_MULTIPLICATIVE = {
    TokenKind.STAR: "*",
    TokenKind.SLASH: "/",
    TokenKind.BACKSLASH: "\\",
}


class _Parser:
    def __init__(self, toks: list[Token], default_sides: int | None = None):
        self.toks = toks
        self.pos = 0
        self.default_sides = default_sides

    # --- token plumbing ---------------------------------------------------

    def _peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def _check(self, kind: TokenKind) -> bool:
        t = self._peek()
        return t is not None and t.kind == kind

    def _advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def _at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def _end_span(self) -> tuple[int, int]:
        if self.toks:
            last = self.toks[-1]
            return (last.end, last.end)
        return (0, 0)

    def _error(self, expected: str) -> ParseError:
        t = self._peek()
        if t is None:
            return ParseError(f"expected {expected} but input ended",
                              self._end_span(), expected=expected)
        return ParseError(f"expected {expected} but found {t.lexeme!r}",
                          t.span, expected=expected, found=t.lexeme)

    def _expect(self, kind: TokenKind, expected: str) -> Token:
        if not self._check(kind):
            raise self._error(expected)
        return self._advance()

    @staticmethod
    def _adjacent(a: Token, b: Token | None) -> bool:
        return b is not None and a.end == b.start

    # --- grammar ------------------------------------------------------------

    def parse(self) -> RollExpression:
        if self._at_end():
            raise ParseError("empty expression", (0, 0),
                             expected="an expression")
        statements = [self._statement()]
        while self._check(TokenKind.SEMICOLON):
            self._advance()
            if self._at_end():
                break  # trailing separator is harmless
            statements.append(self._statement())
        if not self._at_end():
            raise self._error("end of input")
        return RollExpression(tuple(statements))

    def _statement(self):
        if self._check(TokenKind.HASH):
            self._advance()
            name = self._expect(TokenKind.MACRO_NAME, "a macro name").lexeme
            self._expect(TokenKind.EQUALS, "'='")
            body = self._expr()
            return MacroDefinition(name, body)
        return self._expr()

    def _expr(self):
        node = self._multiplicative()
        while True:
            t = self._peek()
            if t is None or t.kind not in _ADDITIVE:
                return node
            self._advance()
            node = BinaryMath(_ADDITIVE[t.kind], node, self._multiplicative())

    def _multiplicative(self):
        node = self._unary()
        while True:
            t = self._peek()
            if t is None or t.kind not in _MULTIPLICATIVE:
                return node
            self._advance()
            node = BinaryMath(_MULTIPLICATIVE[t.kind], node, self._unary())

    def _unary(self):
        if self._check(TokenKind.MINUS):
            self._advance()
            return UnaryNegate(self._unary())
        return self._postfix()

    def _postfix(self):
        node = self._primary()
        while True:
            op = self._dice_op()
            if op is None:
                return node
            node = DiceOpNode(node, op)

    def _primary(self):
        t = self._peek()
        if t is None:
            raise self._error("an expression")

        if t.kind == TokenKind.INT:
            self._advance()
            count = IntLiteral(int(t.lexeme))
            nxt = self._peek()
            if nxt is not None and nxt.kind == TokenKind.D:
                self._advance()
                return DiceNode(count, self._faces(nxt))
            if nxt is not None and nxt.kind == TokenKind.C:
                self._advance()
                return DiceNode(count, Coin())
            return count

        if t.kind == TokenKind.D:
            self._advance()
            return DiceNode(None, self._faces(t))

        if t.kind == TokenKind.C:
            self._advance()
            return DiceNode(None, Coin())

        if t.kind == TokenKind.LPAREN:
            self._advance()
            items = [self._expr()]
            while self._check(TokenKind.SEMICOLON):
                self._advance()
                items.append(self._expr())
            self._expect(TokenKind.RPAREN, "')'")
            group = Group(items[0] if len(items) == 1 else Seq(tuple(items)))
            nxt = self._peek()
            if (nxt is not None and nxt.kind == TokenKind.D
                    and self._peek(1) is not None
                    and self._peek(1).kind in _FACE_STARTERS):
                self._advance()
                return DiceNode(group, self._faces(nxt))
            return group

        if t.kind == TokenKind.AT:
            self._advance()
            name = self._expect(TokenKind.MACRO_NAME, "a macro name").lexeme
            return MacroAccess(name)

        raise self._error("an expression")

    # --- dice faces -----------------------------------------------------------

    def _faces(self, d_token: Token):
        t = self._peek()
        if t is not None:
            if t.kind == TokenKind.INT:
                self._advance()
                sides = int(t.lexeme)
                if sides < 1:
                    raise NegativeSides(
                        "dice must have at least one side", t.span)
                return StandardSides(sides)
            if t.kind == TokenKind.PERCENT:
                self._advance()
                return Percent()
            if t.kind == TokenKind.F and self._adjacent(d_token, t):
                self._advance()
                return Fate()
            if t.kind == TokenKind.LBRACE:
                return self._face_list()
            if t.kind == TokenKind.MINUS:
                nxt = self._peek(1)
                if nxt is not None and nxt.kind == TokenKind.INT:
                    raise NegativeSides(
                        "dice cannot have a negative number of sides",
                        (t.start, nxt.end))
        if self.default_sides is not None:
            return StandardSides(self.default_sides, defaulted=True)
        span = t.span if t is not None else (d_token.end, d_token.end)
        raise MissingSides("dice term is missing its number of sides", span)

    def _face_list(self):
        open_tok = self._expect(TokenKind.LBRACE, "'{'")
        numeric: list[int] = []
        symbolic: list[str] = []
        while True:
            t = self._peek()
            if t is None:
                raise self._error("a dice face or '}'")
            if t.kind == TokenKind.SYMBOL:
                self._advance()
                symbolic.append(t.lexeme)
            elif t.kind in (TokenKind.INT, TokenKind.MINUS):
                lo = self._face_int()
                if self._check(TokenKind.RANGE):
                    self._advance()
                    hi_start = self._peek()
                    hi = self._face_int()
                    if lo > hi:
                        span = (t.start,
                                hi_start.end if hi_start else t.end)
                        raise EmptyRange(
                            f"face range {lo}..{hi} is empty", span)
                    numeric.extend(range(lo, hi + 1))
                else:
                    numeric.append(lo)
            else:
                raise self._error("a dice face")
            if self._check(TokenKind.COMMA):
                self._advance()
                continue
            close = self._expect(TokenKind.RBRACE, "',' or '}'")
            break
        if numeric and symbolic:
            raise MixedFaces(
                "numeric and symbolic faces cannot be mixed in one die",
                (open_tok.start, close.end))
        if symbolic:
            return SymbolicFaces(tuple(symbolic))
        return NumericFaces(tuple(numeric))

    def _face_int(self) -> int:
        if self._check(TokenKind.MINUS):
            self._advance()
            t = self._expect(TokenKind.INT, "an integer face")
            return -int(t.lexeme)
        t = self._expect(TokenKind.INT, "an integer face")
        return int(t.lexeme)

    # --- postfix dice operations ---------------------------------------------

    def _dice_op(self):
        t = self._peek()
        if t is None:
            return None

        if t.kind == TokenKind.K or (
                t.kind == TokenKind.D
                and self._peek(1) is not None
                and self._peek(1).kind in (TokenKind.H, TokenKind.L)
                and self._adjacent(t, self._peek(1))):
            which = "keep" if t.kind == TokenKind.K else "drop"
            self._advance()
            end_tok = self._peek()
            if end_tok is None or end_tok.kind not in (TokenKind.H,
                                                       TokenKind.L):
                raise self._error("'h' or 'l'")
            if not self._adjacent(t, end_tok):
                raise ParseError(
                    "whitespace is not allowed inside a keep/drop operator",
                    (t.start, end_tok.end))
            self._advance()
            end = "high" if end_tok.kind == TokenKind.H else "low"
            z = 1
            nxt = self._peek()
            if nxt is not None and nxt.kind == TokenKind.INT:
                self._advance()
                z = int(nxt.lexeme)
                if z < 1:
                    raise ParseError(
                        "keep/drop count must be at least 1", nxt.span)
            elif (nxt is not None and nxt.kind == TokenKind.MINUS
                  and self._adjacent(end_tok, nxt)
                  and self._peek(1) is not None
                  and self._peek(1).kind == TokenKind.INT):
                raise NegativeKeepCount(
                    "negative keep/drop counts are ambiguous",
                    (nxt.start, self._peek(1).end))
            return KeepDrop(which, end, z)

        if t.kind == TokenKind.F:
            self._advance()
            return Filter(self._condition())

        if t.kind == TokenKind.R:
            self._advance()
            repeated = False
            nxt = self._peek()
            if nxt is not None and nxt.kind == TokenKind.R and \
                    self._adjacent(t, nxt):
                self._advance()
                repeated = True
            return Reroll(self._condition(), repeated)

        if t.kind == TokenKind.BANG:
            self._advance()
            mode = "plain"
            nxt = self._peek()
            if nxt is not None and self._adjacent(t, nxt):
                if nxt.kind == TokenKind.O:
                    self._advance()
                    mode = "once"
                elif nxt.kind == TokenKind.P:
                    self._advance()
                    mode = "penetrating"
            return Explode(mode)

        if t.kind == TokenKind.C:
            self._advance()
            return Count()

        if t.kind == TokenKind.U:
            self._advance()
            return Unique()

        return None

    def _condition(self) -> Condition:
        t = self._peek()
        if t is None or t.kind not in _COMPARATORS:
            raise self._error("a comparison (==, !=, <, >, <=, >=)")
        self._advance()
        comparator = _COMPARATORS[t.kind]
        nxt = self._peek()
        if nxt is None:
            raise self._error("a comparison threshold")
        if nxt.kind == TokenKind.INT:
            self._advance()
            return Condition(comparator, int(nxt.lexeme))
        if nxt.kind == TokenKind.MINUS:
            after = self._peek(1)
            if after is not None and after.kind == TokenKind.INT:
                self._advance()
                self._advance()
                return Condition(comparator, -int(after.lexeme))
        if nxt.kind in (TokenKind.SYMBOL, TokenKind.MACRO_NAME):
            self._advance()
            return Condition(comparator, nxt.lexeme)
        raise self._error("a comparison threshold")


def parse_tokens(toks: list[Token],
                 default_sides: int | None = None) -> RollExpression:
    """Parse a token list (from :func:`tokenize`) into an AST."""
    return _Parser(toks, default_sides).parse()


def parse(source: str, *, default_sides: int | None = None) -> RollExpression:
    """Tokenize and parse ``source``.

    ``default_sides`` enables the lenient mode where a dice term without a
    side count (``2d``) gets that many sides instead of raising MissingSides.
    """
    return parse_tokens(tokenize(source), default_sides)
