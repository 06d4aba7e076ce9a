"""Tokenizer for the .pdx vernacular."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset({
    "Definition", "Lemma", "Theorem", "Inductive", "Record", "Section", "End", "Variable",
    "Variables", "Hypothesis", "Hypotheses", "Axiom", "Check", "Normalize", "Require", "Opaque",
    "forall", "fun", "let", "in", "fuel", "Prop", "Set", "Type", "Star", "Box", "Triangle",
})

# longest symbols first
SYMBOLS = (":=", "=>", "->", "(", ")", ":", ",", "|", "{", "}", ";", ".")


@dataclass(frozen=True)
class Token:
    kind: str    # "ident", "num", "level", "eof", a keyword, or a symbol
    text: str
    line: int
    column: int


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUM = re.compile(r"[0-9]+")
_LEVEL = re.compile(r"@\{([A-Za-z0-9_.]+)\}")


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            tokens.append(Token(word if word in KEYWORDS else "ident", word, line, col))
            i, col = m.end(), col + len(word)
            continue
        m = _NUM.match(text, i)
        if m:
            tokens.append(Token("num", m.group(), line, col))
            i, col = m.end(), col + len(m.group())
            continue
        m = _LEVEL.match(text, i)
        if m:
            tokens.append(Token("level", m.group(1), line, col))
            i, col = m.end(), col + len(m.group())
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col, frozenset(), file)
    tokens.append(Token("eof", "", line, col))
    return tokens
