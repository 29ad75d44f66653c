"""Tokenizer for ``.comet`` source."""
from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset({
    "type", "def", "query", "do", "case", "of", "in", "let", "measure", "if", "then",
    "else", "return", "fail", "norm", "assert", "instr", "inl", "inr", "lft", "fst", "snd",
    "top", "bot", "magic", "inlr", "ker", "dom",
})

# indexed copower forms; keywords only when directly followed by '['
INDEXED = frozenset({"inj", "num", "nabla", "idx", "proj", "test"})


class ParseError(SyntaxError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    space_before: bool = False

    def __str__(self) -> str:
        return self.text or self.kind


_SPEC = [
    ("WS", r"[ \t\r]+"),
    ("NL", r"\n"),
    ("COMMENT", r"--[^\n]*"),
    ("NUMBER", r"\d+(?:\.\d+)?"),
    ("TESTKW", r"(?:inl|inr)\?"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
    ("TENSOR", r"\(x\)"),
    ("OVEE", r"\(\+\)"),
    ("ARROW", r"->"),
    ("LARROW", r"<-"),
    ("BIND", r">>="),
    ("OP", r"[()\[\]{},;:=|&^*+/\\.]"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _SPEC))


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    space = True
    while pos < len(source):
        m = _MASTER.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        pos = m.end()
        if kind == "NL":
            line += 1
            line_start = pos
            space = True
            continue
        if kind in ("WS", "COMMENT"):
            space = True
            continue
        if kind == "TENSOR" and not space:
            # "f(x)" is a call, not a tensor: split it back into parts
            tokens.append(Token("(", "(", line, col, space))
            tokens.append(Token("IDENT", "x", line, col + 1, False))
            tokens.append(Token(")", ")", line, col + 2, False))
            space = False
            continue
        if kind == "IDENT" and text in KEYWORDS:
            kind = text
        elif kind == "OP":
            kind = text
        elif kind == "TESTKW":
            kind = text
        tokens.append(Token(kind, text, line, col, space))
        space = False
    tokens.append(Token("EOF", "", line, pos - line_start + 1, True))
    return tokens
