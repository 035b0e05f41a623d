import re
from dataclasses import dataclass

from canarrow.errors import ParseError

# order matters: inline kind variables, single specials, then words (backquote escapes specials)
_TOKEN = re.compile(
    r"""
    (?P<kindvar>[^\s()\[\]{},`]+:\[[^\s\]]+\])
  | (?P<special>[()\[\]{},])
  | (?P<word>(?:`[()\[\]{},]|[^\s()\[\]{},])+)
    """,
    re.VERBOSE,
)
_COMMENT = re.compile(r"(?:^|(?<=\s))(\*\*\*|---).*$")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int

    @property
    def end(self) -> int:
        return self.col + len(self.text)

    def adjacent(self, other: "Token") -> bool:
        return self.line == other.line and self.end == other.col

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)


def unbackquote(text: str) -> str:
    return re.sub(r"`(.)", r"\1", text)


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens, dropping ``***`` and ``---`` line comments."""
    tokens: list[Token] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", line)
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(line, pos)
            if m is None:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            tokens.append(Token(m.group(0), lineno, pos + 1))
            pos = m.end()
    return tokens


def join_adjacent(tokens: list[Token]) -> str:
    """Re-assemble tokens into text, without spaces between tokens that touched in the source."""
    out = ""
    for i, tok in enumerate(tokens):
        if i and not tokens[i - 1].adjacent(tok):
            out += " "
        out += tok.text
    return out
