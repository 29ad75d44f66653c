"""Recursive-descent parser producing the surface AST.

Precedence, loosest first: binding forms (``let``, ``do``, ``case``,
``measure``, ``if``), conditioning ``s | p``, ``>>=``, ``(+)``, ``&``,
``(x)``, postfix ``^``, prefix operators, atoms.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..rationals import ScalarRangeError, parse_scalar
from ..syntax import UNIT, ZERO, Const, Span, Sum, Tensor, Type, bold, copower
from . import ast as S
from .lexer import INDEXED, ParseError, Token, tokenize

_BINDING_STARTS = {"let", "do", "case", "measure", "if"}


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0
        self.allow_bar = True
        self._wild = itertools.count(1)

    # token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what or repr(kind)}, found {self.describe(self.tok)}")
        return self.advance()

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            return self.advance()
        return None

    @staticmethod
    def describe(t: Token) -> str:
        return "end of input" if t.kind == "EOF" else repr(t.text)

    def fail(self, message: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(message, t.line, t.column)

    def span(self, start: Token) -> Span:
        last = self.tokens[max(self.pos - 1, 0)]
        return Span(start.line, start.column, last.line, last.column + len(last.text))

    def binder(self) -> str:
        tok = self.expect("IDENT", "a variable")
        if tok.text == "_":
            return f"_{next(self._wild)}"
        self._reserved(tok)
        return tok.text

    def _reserved(self, tok: Token) -> None:
        if tok.text.startswith("_"):
            self.fail("names starting with '_' are reserved", tok)

    def int_literal(self) -> int:
        t = self.expect("NUMBER", "an integer")
        if "." in t.text:
            self.fail("expected an integer", t)
        return int(t.text)

    # programs --------------------------------------------------------------

    def program(self) -> S.SourceProgram:
        start = self.tok
        items = []
        while not self.at("EOF"):
            if self.at("type"):
                items.append(self.type_decl())
            elif self.at("def"):
                items.append(self.definition())
            elif self.at("query"):
                items.append(self.query())
            else:
                self.fail(f"expected 'type', 'def' or 'query', found {self.describe(self.tok)}")
        return S.SourceProgram(tuple(items), span=self.span(start))

    def type_decl(self) -> S.TypeDecl:
        start = self.expect("type")
        name = self.expect("IDENT", "a type name").text
        self.expect("=")
        ctors = []
        if self.at("IDENT"):
            ctors.append(self.advance().text)
            while self.accept("|"):
                ctors.append(self.expect("IDENT", "a constructor name").text)
        return S.TypeDecl(name, tuple(ctors), span=self.span(start))

    def definition(self) -> S.Def:
        start = self.expect("def")
        name = self.expect("IDENT", "a definition name").text
        params = []
        if self.accept("("):
            if not self.at(")"):
                params.append(self.param())
                while self.accept(","):
                    params.append(self.param())
            self.expect(")")
        self.expect(":")
        ty = self.type_expr()
        self.expect("=")
        body = self.term()
        return S.Def(name, tuple(params), ty, body, span=self.span(start))

    def param(self) -> S.Param:
        name = self.expect("IDENT", "a parameter name").text
        self.expect(":")
        return S.Param(name, self.type_expr())

    def query(self) -> S.QueryDecl:
        start = self.expect("query")
        kind_tok = self.expect("IDENT", "'eval', 'infer' or 'validity'")
        kind = kind_tok.text
        text_start = self.pos
        if kind == "eval":
            term = self.term()
            return S.QueryDecl("eval", term, text=self._text(text_start), span=self.span(start))
        if kind not in ("infer", "validity"):
            self.fail(f"unknown query kind {kind!r}", kind_tok)
        saved, self.allow_bar = self.allow_bar, False
        term = self.term_no_given()
        self.allow_bar = saved
        given = self.expect("IDENT", "'given'")
        if given.text != "given":
            self.fail("expected 'given'", given)
        pred = self.pred()
        marginal = None
        if self.at("IDENT") and self.tok.text == "marginal":
            self.advance()
            marginal = self.int_literal()
            if marginal not in (1, 2):
                self.fail("marginal side must be 1 or 2")
        return S.QueryDecl(kind, term, pred, marginal, self._text(text_start), span=self.span(start))

    def _text(self, start: int) -> str:
        return " ".join(t.text for t in self.tokens[start:self.pos])

    def term_no_given(self) -> S.Node:
        # 'given' is an ordinary identifier, so stop the term in front of it
        stop = self.pos
        depth = 0
        while not self.at("EOF"):
            t = self.tokens[stop]
            if t.kind in ("(", "["):
                depth += 1
            elif t.kind in (")", "]"):
                depth -= 1
            elif t.kind == "IDENT" and t.text == "given" and depth == 0:
                break
            elif t.kind == "EOF":
                break
            stop += 1
        if stop >= len(self.tokens) or self.tokens[stop].text != "given":
            self.fail("query is missing 'given'")
        saved = self.tokens
        self.tokens = saved[:stop] + [Token("EOF", "", saved[stop].line, saved[stop].column, True)]
        try:
            term = self.term()
            if not self.at("EOF"):
                self.fail(f"unexpected {self.describe(self.tok)} before 'given'")
        finally:
            self.tokens = saved
        return term

    # types -----------------------------------------------------------------

    def type_expr(self) -> Type:
        left = self.tensor_type()
        if self.accept("+"):
            return Sum(left, self.type_expr())
        return left

    def tensor_type(self) -> Type:
        left = self.atom_type()
        if self.accept("TENSOR"):
            return Tensor(left, self.tensor_type())
        return left

    def atom_type(self) -> Type:
        if self.at("NUMBER"):
            n = self.int_literal()
            if self.accept("*"):
                return copower(n, self.atom_type())
            if n == 0:
                return ZERO
            if n == 1:
                return UNIT
            return bold(n)
        if self.at("IDENT"):
            return Const(self.advance().text)
        if self.accept("("):
            ty = self.type_expr()
            self.expect(")")
            return ty
        self.fail(f"expected a type, found {self.describe(self.tok)}")

    def opt_type_arg(self) -> Type | None:
        if self.accept("["):
            ty = self.type_expr()
            self.expect("]")
            return ty
        return None

    # terms -----------------------------------------------------------------

    def term(self) -> S.Node:
        start = self.tok
        if self.at("let"):
            return self.let_form()
        if self.accept("do"):
            x = self.binder()
            self.expect("LARROW", "'<-'")
            bound = self.term()
            self.expect(";")
            body = self.term()
            return S.SDo(x, bound, body, span=self.span(start))
        if self.accept("case"):
            return self.case_form(start)
        if self.accept("measure"):
            arms = [self.measure_arm()]
            while self.allow_bar and self.accept("|"):
                arms.append(self.measure_arm())
            return S.SMeasure(tuple(arms), span=self.span(start))
        if self.accept("if"):
            test = self.nested_term()
            self.expect("then")
            then = self.nested_term()
            self.expect("else")
            orelse = self.term()
            return S.SIf(test, then, orelse, span=self.span(start))
        return self.conditioning()

    def nested_term(self) -> S.Node:
        saved, self.allow_bar = self.allow_bar, True
        try:
            return self.term()
        finally:
            self.allow_bar = saved

    def let_form(self) -> S.Node:
        start = self.expect("let")
        first = self.binder()
        if self.accept("TENSOR"):
            second = self.binder()
            self.expect("=")
            bound = self.nested_term()
            self.expect("in")
            return S.SLetPair(first, second, bound, self.term(), span=self.span(start))
        if self.accept("("):
            params = [self.binder()]
            while self.accept(","):
                params.append(self.binder())
            self.expect(")")
            self.expect("=")
            fun_body = self.nested_term()
            self.expect("in")
            return S.SLetFun(first, tuple(params), fun_body, self.term(), span=self.span(start))
        self.expect("=")
        bound = self.nested_term()
        self.expect("in")
        return S.SLet(first, bound, self.term(), span=self.span(start))

    def arm_body(self) -> S.Node:
        saved, self.allow_bar = self.allow_bar, False
        try:
            return self.term()
        finally:
            self.allow_bar = saved

    def case_form(self, start: Token) -> S.Node:
        scrutinee = self.nested_term()
        self.expect("of")
        if self.at("inl", "inr"):
            first = self.advance().kind
            x = self.binder()
            self.expect("ARROW", "'->'")
            a = self.arm_body()
            self.expect("|")
            second = self.expect("inr" if first == "inl" else "inl").kind
            y = self.binder()
            self.expect("ARROW", "'->'")
            b = self.arm_body() if self.allow_bar is False else self.term()
            if first == "inr":
                x, a, y, b = y, b, x, a
            return S.SCase(scrutinee, x, a, y, b, span=self.span(start))
        arms = [self.enum_arm()]
        while self.at("|") and self.peek().kind == "IDENT" and self.peek(2).kind == "ARROW":
            self.advance()
            arms.append(self.enum_arm())
        return S.SEnumCase(scrutinee, tuple(arms), span=self.span(start))

    def enum_arm(self) -> tuple[str, S.Node]:
        name = self.expect("IDENT", "a constructor").text
        self.expect("ARROW", "'->'")
        return name, self.arm_body()

    def measure_arm(self) -> tuple[S.Node, S.Node]:
        saved, self.allow_bar = self.allow_bar, False
        try:
            pred = self.bind_expr()
            self.expect("ARROW", "'->'")
            body = self.term()
        finally:
            self.allow_bar = saved
        return pred, body

    def conditioning(self) -> S.Node:
        start = self.tok
        state = self.bind_expr()
        while self.allow_bar and self.accept("|"):
            pred = self.pred()
            state = S.SCondition(state, pred, span=self.span(start))
        return state

    def bind_expr(self) -> S.Node:
        start = self.tok
        left = self.ovee_expr()
        while self.accept("BIND"):
            fn = self.bind_target()
            left = S.SBind(left, fn, span=self.span(start))
        return left

    def bind_target(self) -> S.Pred:
        start = self.tok
        if self.at("inl", "inr", "return"):
            return S.PKeyword(self.advance().kind, span=self.span(start))
        return self.pred()

    def ovee_expr(self) -> S.Node:
        start = self.tok
        left = self.and_expr()
        if self.accept("OVEE"):
            return S.SOvee(left, self.ovee_expr(), span=self.span(start))
        return left

    def and_expr(self) -> S.Node:
        start = self.tok
        left = self.tensor_expr()
        while self.accept("&"):
            left = S.SAnd(left, self.tensor_expr(), span=self.span(start))
        return left

    def tensor_expr(self) -> S.Node:
        start = self.tok
        left = self.postfix()
        if self.accept("TENSOR"):
            return S.SPair(left, self.tensor_expr(), span=self.span(start))
        return left

    def postfix(self) -> S.Node:
        start = self.tok
        t = self.prefix()
        while self.accept("^"):
            t = S.SOrtho(t, span=self.span(start))
        return t

    def operand(self) -> S.Node:
        """Operand of a prefix operator: another prefix form, or a binding form."""
        if self.at(*_BINDING_STARTS):
            return self.term()
        return self.postfix_operand()

    def postfix_operand(self) -> S.Node:
        return self.prefix()

    def prefix(self) -> S.Node:
        start = self.tok
        k = self.tok.kind
        simple = {
            "lft": S.SLft, "norm": S.SNorm, "return": S.SReturn, "dom": S.SDom, "ker": S.SKer,
            "inl?": S.SInlTest, "inr?": S.SInrTest, "fst": S.SFst, "snd": S.SSnd,
        }
        if k in simple:
            self.advance()
            return simple[k](self.operand(), span=self.span(start))
        if k in ("inl", "inr", "magic"):
            self.advance()
            ty = self.opt_type_arg()
            arg = self.operand()
            cls = {"inl": S.SInl, "inr": S.SInr, "magic": S.SMagic}[k]
            return cls(arg, ty, span=self.span(start))
        if k in ("assert", "instr"):
            self.advance()
            self.expect("[")
            pred = self.pred()
            self.expect("]")
            self.expect("(")
            arg = self.nested_term()
            self.expect(")")
            cls = S.SAssert if k == "assert" else S.SInstr
            return cls(pred, arg, span=self.span(start))
        if k == "inlr":
            self.advance()
            self.expect("(")
            a = self.nested_term()
            self.expect(",")
            b = self.nested_term()
            self.expect(")")
            return S.SInlr(a, b, span=self.span(start))
        if k == "IDENT" and self.tok.text in INDEXED and self.peek().kind == "[":
            return self.indexed(start)
        return self.atom()

    def indexed(self, start: Token) -> S.Node:
        word = self.advance().text
        self.expect("[")
        n = self.int_literal()
        indices = []
        if self.accept(";"):
            indices.append(self.int_literal())
            while self.accept(","):
                indices.append(self.int_literal())
        self.expect("]")
        if n < 1:
            self.fail("copower size must be at least 1", start)
        for i in indices:
            if not 1 <= i <= n:
                self.fail(f"index {i} outside 1..{n}", start)
        need_index = word in ("inj", "num", "test", "proj")
        if need_index and not indices:
            self.fail(f"{word}[n; i] needs an index", start)
        if word in ("inj", "num", "test") and len(indices) != 1:
            self.fail(f"{word}[n; i] takes exactly one index", start)
        if word in ("nabla", "idx") and indices:
            self.fail(f"{word}[n] takes no index", start)
        if word == "num":
            return S.SNum(n, indices[0], span=self.span(start))
        arg = self.operand()
        if word == "inj":
            return S.SInj(n, indices[0], arg, span=self.span(start))
        if word == "test":
            return S.STest(n, indices[0], arg, span=self.span(start))
        if word == "proj":
            return S.SProj(n, tuple(indices), arg, span=self.span(start))
        if word == "nabla":
            return S.SNabla(n, arg, span=self.span(start))
        return S.SIdx(n, arg, span=self.span(start))

    def atom(self) -> S.Node:
        start = self.tok
        k = start.kind
        if k == "IDENT":
            self.advance()
            if self.at("(") and not self.tok.space_before:
                self.advance()
                args = [self.nested_term()]
                while self.accept(","):
                    args.append(self.nested_term())
                self.expect(")")
                return S.SCall(start.text, tuple(args), span=self.span(start))
            if start.text == "_":
                self.fail("'_' cannot be used as a value", start)
            self._reserved(start)
            return S.SVar(start.text, span=self.span(start))
        if k == "TENSOR":
            # "(x)" in operand position is the variable x in parentheses
            self.advance()
            return S.SVar("x", span=self.span(start))
        if k == "*":
            self.advance()
            return S.SStar(span=self.span(start))
        if k == "top":
            self.advance()
            return S.STop(span=self.span(start))
        if k == "bot":
            self.advance()
            return S.SBot(span=self.span(start))
        if k == "fail":
            self.advance()
            return S.SFail(self.opt_type_arg(), span=self.span(start))
        if k == "NUMBER":
            return self.scalar_literal()
        if k == "(":
            self.advance()
            inner = self.nested_term()
            if self.accept(":"):
                ty = self.type_expr()
                self.expect(")")
                return S.SAnn(inner, ty, span=self.span(start))
            self.expect(")")
            return inner
        self.fail(f"unexpected {self.describe(start)}")

    def scalar_literal(self) -> S.Node:
        start = self.advance()
        text = start.text
        if self.at("/") and "." not in text:
            self.advance()
            den = self.expect("NUMBER", "a denominator")
            text = f"{text}/{den.text}"
        try:
            value = parse_scalar(text)
        except (ScalarRangeError, ValueError) as exc:
            self.fail(f"bad scalar {text!r}: {exc}", start)
        return S.SScalar(value, text, span=self.span(start))

    # predicates ------------------------------------------------------------

    def pred(self) -> S.Pred:
        start = self.tok
        if self.accept("\\"):
            if self.accept("("):
                params = [self.binder()]
                while self.accept("TENSOR"):
                    params.append(self.binder())
                self.expect(")")
            elif self.at("TENSOR"):
                self.advance()
                params = ["x"]
            else:
                params = [self.binder()]
            self.expect("ARROW", "'->'")
            body = self.nested_term() if self.allow_bar else self.arm_body()
            return S.PLam(tuple(params), body, span=self.span(start))
        left = self.pred_atom()
        if self.accept("."):
            return S.PCompose(left, self.pred(), span=self.span(start))
        return left

    def pred_atom(self) -> S.Pred:
        start = self.tok
        if self.at("IDENT"):
            return S.PName(self.advance().text, span=self.span(start))
        if self.at("top", "bot", "NUMBER"):
            return S.PConst(self.atom(), span=self.span(start))
        if self.accept("("):
            p = self.pred()
            self.expect(")")
            return p
        self.fail(f"expected a predicate, found {self.describe(self.tok)}")


def parse(source: str) -> S.SourceProgram:
    """Parse a whole ``.comet`` program."""
    p = Parser(source)
    return p.program()


def parse_term(source: str) -> S.Node:
    p = Parser(source)
    t = p.term()
    if not p.at("EOF"):
        p.fail(f"unexpected {p.describe(p.tok)} after term")
    return t


def parse_pred(source: str) -> S.Pred:
    p = Parser(source)
    pr = p.pred()
    if not p.at("EOF"):
        p.fail(f"unexpected {p.describe(p.tok)} after predicate")
    return pr


def parse_type(source: str) -> Type:
    p = Parser(source)
    ty = p.type_expr()
    if not p.at("EOF"):
        p.fail(f"unexpected {p.describe(p.tok)} after type")
    return ty
