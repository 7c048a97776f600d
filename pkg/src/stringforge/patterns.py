"""Syntactic string patterns: token classes, coverage, and rendering.

A pattern is a sequence of tokens.  Each token is either a character-class
token (digits, lowercase, uppercase, letters, or the extended alphanumeric
class that also admits ``-`` and ``_``) with a repetition count, or a literal
token carrying a constant string.  Patterns describe the *shape* of a string
column: ``(313) 867-5309`` has the shape ``'('<D>3')'' '<D>3'-'<D>4``.

This module is deliberately dependency-free; everything else in the package
builds on it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

# Quantifier sentinel meaning "one or more".  Natural counts are plain ints.
PLUS = "+"

Quantifier = "int | str"


class TokenClass(Enum):
    DIGIT = "D"
    LOWER = "L"
    UPPER = "U"
    ALPHA = "A"
    ALNUM = "AN"
    LITERAL = "lit"


BASE_CLASSES = (
    TokenClass.DIGIT,
    TokenClass.LOWER,
    TokenClass.UPPER,
    TokenClass.ALPHA,
    TokenClass.ALNUM,
)

# Character make-up of each base class, as regex set contents.
CLASS_CHARSET = {
    TokenClass.DIGIT: "0-9",
    TokenClass.LOWER: "a-z",
    TokenClass.UPPER: "A-Z",
    TokenClass.ALPHA: "a-zA-Z",
    TokenClass.ALNUM: "a-zA-Z0-9_-",
}

# Display names used in the human-facing regex rendering.
CLASS_DISPLAY = {
    TokenClass.DIGIT: "digit",
    TokenClass.LOWER: "lower",
    TokenClass.UPPER: "upper",
    TokenClass.ALPHA: "alpha",
    TokenClass.ALNUM: "alnum",
}

# child class -> the parent classes it may sit under when checking coverage.
_WIDENS_TO = {
    TokenClass.DIGIT: frozenset({TokenClass.DIGIT, TokenClass.ALNUM}),
    TokenClass.LOWER: frozenset({TokenClass.LOWER, TokenClass.ALPHA, TokenClass.ALNUM}),
    TokenClass.UPPER: frozenset({TokenClass.UPPER, TokenClass.ALPHA, TokenClass.ALNUM}),
    TokenClass.ALPHA: frozenset({TokenClass.ALPHA, TokenClass.ALNUM}),
    TokenClass.ALNUM: frozenset({TokenClass.ALNUM}),
}

# Literal symbols that are members of the alphanumeric character set and may
# therefore generalize to <AN>.
ALNUM_SYMBOLS = frozenset({"-", "_"})


@dataclass(frozen=True)
class Token:
    """One pattern token: a character class with a count, or a literal."""

    cls: TokenClass
    reps: "int | str" = 1
    text: str = ""

    def __post_init__(self) -> None:
        if self.reps != PLUS and (not isinstance(self.reps, int) or self.reps < 1):
            raise ValueError(f"token quantifier must be a natural number or '+': {self.reps!r}")
        if self.cls is TokenClass.LITERAL:
            if not self.text:
                raise ValueError("literal token needs a non-empty constant")
            if self.reps != 1:
                raise ValueError("literal tokens always have quantifier 1")
        elif self.text:
            raise ValueError("class tokens carry no constant text")

    @property
    def is_literal(self) -> bool:
        return self.cls is TokenClass.LITERAL

    @property
    def is_plus(self) -> bool:
        return self.reps == PLUS

    def __repr__(self) -> str:  # pragma: no cover - debug helper
        return f"Token({render_token(self)!r})"


def lit(text: str) -> Token:
    return Token(TokenClass.LITERAL, 1, text)


@dataclass(frozen=True)
class Pattern:
    """An ordered, immutable sequence of tokens."""

    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __repr__(self) -> str:  # pragma: no cover - debug helper
        return f"Pattern({render_pattern(self)!r})"


def token_frequency(cls: TokenClass, pattern: Pattern) -> int:
    """Total quantifier mass of one base class inside a pattern.

    Natural quantifiers contribute their value, ``+`` contributes 1 (it
    guarantees at least one occurrence).  Literal tokens never count, and the
    tally is per exact class: ``<L>`` mass does not count toward ``<A>``.
    """
    if cls not in BASE_CLASSES:
        raise ValueError(f"frequency is defined for base classes only, got {cls}")
    total = 0
    for tok in pattern.tokens:
        if tok.cls is cls:
            total += 1 if tok.is_plus else tok.reps
    return total


# ---------------------------------------------------------------------------
# Coverage
# ---------------------------------------------------------------------------

def _token_fits(child: Token, parent: Token) -> bool:
    """Can this child token sit (as part of a group) under the parent token?"""
    if parent.is_literal:
        return child.is_literal and child.text == parent.text
    if child.is_literal:
        return parent.cls is TokenClass.ALNUM and child.text in ALNUM_SYMBOLS
    return parent.cls in _WIDENS_TO[child.cls]


def coverage_partition(
    parent: Pattern, child: Pattern
) -> "tuple[tuple[int, int], ...] | None":
    """Partition ``child``'s tokens into one consecutive group per parent token.

    Returns a tuple of half-open ``(start, end)`` index ranges into
    ``child.tokens``, one per parent token, or ``None`` when the child is not
    covered.  Groups are non-empty; a parent token with a natural quantifier
    requires its group's natural quantifiers to sum to exactly that count (a
    group containing any ``+`` needs a ``+`` parent).  Among valid partitions
    the greedy leftmost one (each group as long as possible) is returned.
    """
    ptoks = parent.tokens
    ctoks = child.tokens
    seen: set[tuple[int, int]] = set()

    def walk(pi: int, ci: int, acc: list[tuple[int, int]]) -> bool:
        if pi == len(ptoks):
            return ci == len(ctoks)
        if (pi, ci) in seen:
            return False
        ptok = ptoks[pi]
        # Leave at least one child token for every later parent token.
        max_size = len(ctoks) - ci - (len(ptoks) - pi - 1)
        size = 0
        natural_sum = 0
        has_plus = False
        sizes: list[int] = []
        while size < max_size:
            tok = ctoks[ci + size]
            if not _token_fits(tok, ptok):
                break
            size += 1
            if tok.is_plus:
                has_plus = True
            else:
                natural_sum += tok.reps
            if ptok.is_plus:
                sizes.append(size)
            elif has_plus:
                break  # a group with '+' is only covered by a '+' parent
            elif natural_sum == ptok.reps:
                sizes.append(size)
            elif natural_sum > ptok.reps:
                break
        for chosen in reversed(sizes):  # longest first: greedy leftmost
            acc.append((ci, ci + chosen))
            if walk(pi + 1, ci + chosen, acc):
                return True
            acc.pop()
        seen.add((pi, ci))
        return False

    out: list[tuple[int, int]] = []
    if walk(0, 0, out):
        return tuple(out)
    return None


def covers(parent: Pattern, child: Pattern) -> bool:
    """True when every string shaped like ``child`` is also shaped like ``parent``."""
    return coverage_partition(parent, child) is not None


# ---------------------------------------------------------------------------
# Textual pattern syntax
# ---------------------------------------------------------------------------

_CLASS_BY_NAME = {
    "D": TokenClass.DIGIT,
    "L": TokenClass.LOWER,
    "U": TokenClass.UPPER,
    "A": TokenClass.ALPHA,
    "AN": TokenClass.ALNUM,
}


class PatternSyntaxError(ValueError):
    """Raised on malformed pattern text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def render_token(tok: Token) -> str:
    if tok.is_literal:
        escaped = tok.text.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"
    name = tok.cls.value
    if tok.is_plus:
        return f"<{name}>+"
    if tok.reps == 1:
        return f"<{name}>"
    return f"<{name}>{tok.reps}"


def render_pattern(pattern: Pattern) -> str:
    """Canonical text form, e.g. ``<U><L>2<D>3'@'<L>5'.'<L>3``."""
    return "".join(render_token(t) for t in pattern.tokens)


def parse_pattern(text: str) -> Pattern:
    """Parse the canonical text form back into a :class:`Pattern`."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "<":
            close = text.find(">", i + 1)
            if close < 0:
                raise PatternSyntaxError("unterminated class token", i)
            name = text[i + 1 : close]
            cls = _CLASS_BY_NAME.get(name)
            if cls is None:
                raise PatternSyntaxError(f"unknown token class <{name}>", i)
            i = close + 1
            reps: int | str = 1
            if i < n and text[i] == "+":
                reps = PLUS
                i += 1
            elif i < n and text[i].isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                reps = int(text[i:j])
                if reps < 1:
                    raise PatternSyntaxError("quantifier must be at least 1", i)
                i = j
            tokens.append(Token(cls, reps))
        elif ch == "'":
            i += 1
            buf: list[str] = []
            while True:
                if i >= n:
                    raise PatternSyntaxError("unterminated literal", i)
                c = text[i]
                if c == "\\":
                    if i + 1 >= n:
                        raise PatternSyntaxError("dangling escape", i)
                    buf.append(text[i + 1])
                    i += 2
                elif c == "'":
                    i += 1
                    break
                else:
                    buf.append(c)
                    i += 1
            if not buf:
                raise PatternSyntaxError("empty literal", i)
            tokens.append(lit("".join(buf)))
        else:
            raise PatternSyntaxError(f"unexpected character {ch!r}", i)
    return Pattern(tuple(tokens))


# ---------------------------------------------------------------------------
# Regex rendering and matching
# ---------------------------------------------------------------------------

def _escape_char(c: str) -> str:
    # Word characters stay bare; everything else is backslash-escaped.  (A
    # backslash before a letter would change meaning, e.g. \d.)
    if c.isascii() and (c.isalnum() or c == "_"):
        return c
    return "\\" + c


def _token_display(tok: Token) -> str:
    if tok.is_literal:
        return "".join(_escape_char(c) for c in tok.text)
    body = "{%s}" % CLASS_DISPLAY[tok.cls]
    if tok.is_plus:
        return body + "+"
    if tok.reps == 1:
        return body
    return body + "{%d}" % tok.reps


def render_regex(pattern: Pattern, capture_spans: "list[tuple[int, int]] | None" = None) -> str:
    """Human-facing anchored regex with named classes like ``{digit}``.

    ``capture_spans`` is a list of inclusive 0-based token-index ranges to
    wrap in capture groups; spans must be in order, within bounds, and
    disjoint.
    """
    spans = list(capture_spans or [])
    opens = {s for s, _ in spans}
    closes = {e for _, e in spans}
    prev_end = -1
    for s, e in spans:
        if not (0 <= s <= e < len(pattern.tokens)):
            raise ValueError(f"capture span {(s, e)} out of bounds")
        if s <= prev_end:
            raise ValueError("capture spans must be disjoint and ordered")
        prev_end = e
    parts = ["/^"]
    for idx, tok in enumerate(pattern.tokens):
        if idx in opens:
            parts.append("(")
        parts.append(_token_display(tok))
        if idx in closes:
            parts.append(")")
    parts.append("$/")
    return "".join(parts)


def _token_matcher(tok: Token) -> str:
    if tok.is_literal:
        return re.escape(tok.text)
    body = f"[{CLASS_CHARSET[tok.cls]}]"
    if tok.is_plus:
        return body + "+"
    if tok.reps == 1:
        return body
    return body + "{%d}" % tok.reps


_compiled: dict[Pattern, "re.Pattern[str]"] = {}


def compile_pattern(pattern: Pattern) -> "re.Pattern[str]":
    """Anchored character-level regex with one capture group per token."""
    rx = _compiled.get(pattern)
    if rx is None:
        rx = re.compile("".join(f"({_token_matcher(t)})" for t in pattern.tokens) + r"\Z")
        _compiled[pattern] = rx
    return rx


def match_partition(pattern: Pattern, s: str) -> "tuple[tuple[int, int], ...] | None":
    """Character spans of each pattern token across ``s``, or None.

    Quantifiers are matched greedily left to right, so the split is
    deterministic even when neighbouring tokens could share characters.
    """
    m = compile_pattern(pattern).match(s)
    if m is None:
        return None
    return tuple(m.span(i + 1) for i in range(len(pattern.tokens)))


def pattern_matches(pattern: Pattern, s: str) -> bool:
    """Exact (anchored) match of a raw string against a pattern."""
    return compile_pattern(pattern).match(s) is not None
