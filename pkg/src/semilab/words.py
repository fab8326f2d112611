"""Words over a small alphabet and the counting functions on them.

A word is stored as a plain ``str`` over the internal letters ``x``, ``y``,
``z`` (generator indices 0, 1, 2).  The free-model letters ``a``, ``b``,
``c`` are accepted by the parser and mapped onto the same indices; they only
differ at display time.  Exponent notation exists in the parser and the
printer, never in the stored value.

    >>> parse_word("x^3 y^3 x y")
    'xxxyyyxy'
    >>> forward_pairs(parse_word("x^3y^3xy"))
    13
    >>> show(parse_word("abab"), letters="ab")
    'abab'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

LETTERS = "xyz"
MODEL_LETTERS = "abc"
MAX_ALPHABET = 3
MAX_WORD_LEN = 64

_ALIASES = {"x": "x", "y": "y", "z": "z", "a": "x", "b": "y", "c": "z"}


class WordError(ValueError):
    pass


class EmptyReplacement(WordError):
    pass


class UnsupportedAlphabet(WordError):
    pass


class WordTooLong(WordError):
    pass


class ParseError(WordError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def letter_index(c: str) -> int:
    return ord(c) - ord("x")


def alphabet_size(w: str) -> int:
    """Smallest alphabet size (at least 2) that contains every letter of ``w``."""
    return max(2, max((letter_index(c) + 1 for c in w), default=0))


def check_length(w: str, limit: int = MAX_WORD_LEN) -> str:
    if len(w) > limit:
        raise WordTooLong(f"word of length {len(w)} exceeds limit {limit}")
    return w


def concat(u: str, v: str) -> str:
    return u + v


def substitute(template: str, p: str, q: str, r: str | None = None) -> str:
    """Replace every x of ``template`` by ``p`` and every y by ``q``.

    A third replacement ``r`` is used for z when the template has one.
    """
    if not p or not q:
        raise EmptyReplacement("substituted words must be nonempty")
    table = {"x": p, "y": q}
    if r is not None:
        if not r:
            raise EmptyReplacement("substituted words must be nonempty")
        table["z"] = r
    try:
        return "".join(table[c] for c in template)
    except KeyError as exc:
        raise UnsupportedAlphabet(f"no replacement given for letter {exc}") from None


def forward_pairs(w: str) -> int:
    """Number of index pairs i < j with w[i] = x and w[j] = y."""
    if "z" in w:
        raise UnsupportedAlphabet("forward pairs are defined for two letters only")
    total = 0
    seen_x = 0
    for c in w:
        if c == "x":
            seen_x += 1
        else:
            total += seen_x
    return total


def pair_counts(w: str) -> dict[tuple[str, str], int]:
    """Ordered-pair counts (c, d) -> #{i < j : w[i] = c, w[j] = d}.

    This is the generalization of the forward-pair count used for three
    letter words; ``pair_counts(w)[("x", "y")] == forward_pairs(w)``.
    """
    k = alphabet_size(w)
    seen = dict.fromkeys(LETTERS[:k], 0)
    counts = {(c, d): 0 for c in LETTERS[:k] for d in LETTERS[:k]}
    for d in w:
        for c in seen:
            counts[c, d] += seen[c]
        seen[d] += 1
    return counts


@dataclass(frozen=True)
class CountVector:
    x_count: int
    y_count: int
    forward_pairs: int | None = None
    z_count: int = 0

    @property
    def g(self) -> int:
        return self.x_count

    @property
    def h(self) -> int:
        return self.y_count

    @property
    def f(self) -> int | None:
        return self.forward_pairs


def letter_counts(w: str) -> CountVector:
    z = w.count("z")
    return CountVector(
        x_count=w.count("x"),
        y_count=w.count("y"),
        forward_pairs=None if z else forward_pairs(w),
        z_count=z,
    )


def sort_key(w: str) -> tuple[int, str]:
    """Shortlex key: shorter first, then lexicographic by generator index."""
    return (len(w), w)


def canonical_cmp(u: str, v: str) -> int:
    ku, kv = sort_key(u), sort_key(v)
    return (ku > kv) - (ku < kv)


def all_words(max_len: int, letters: str = "xy", min_len: int = 1):
    """Every word with ``min_len <= len <= max_len``, in shortlex order."""
    for n in range(min_len, max_len + 1):
        for t in product(letters, repeat=n):
            yield "".join(t)


def reverse(w: str) -> str:
    return w[::-1]


_CARET = re.compile(r"\s*\^\s*")
_DIGITS = re.compile(r"\d+")


def parse_word(text: str, limit: int = MAX_WORD_LEN) -> str:
    """Parse ``term+`` where ``term := letter ('^' uint)?``.

    Parenthesised groups with an exponent, e.g. ``(xy)^2``, are also read
    since the refutation examples are written that way.
    """
    out, pos = _parse_seq(text, 0, top=True)
    if not out:
        raise ParseError("empty word", text, pos)
    return check_length(out, limit)


def _parse_seq(text: str, pos: int, top: bool) -> tuple[str, int]:
    parts: list[str] = []
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            if not top:
                raise ParseError("unclosed parenthesis", text, pos)
            return "".join(parts), pos
        c = text[pos]
        if c == ")":
            if top:
                raise ParseError("unexpected ')'", text, pos)
            return "".join(parts), pos + 1
        if c == "(":
            inner, pos = _parse_seq(text, pos + 1, top=False)
            if not inner:
                raise ParseError("empty group", text, pos)
            exp, pos = _parse_exponent(text, pos)
            parts.append(inner * exp)
            continue
        if c not in _ALIASES:
            raise ParseError(f"unexpected character {c!r}", text, pos)
        exp, pos = _parse_exponent(text, pos + 1)
        parts.append(_ALIASES[c] * exp)


def _parse_exponent(text: str, pos: int) -> tuple[int, int]:
    m = _CARET.match(text, pos)
    if not m:
        return 1, pos
    start = m.end()
    d = _DIGITS.match(text, start)
    if not d:
        raise ParseError("expected exponent", text, start)
    value = int(d.group())
    if value == 0:
        raise ParseError("exponents must be positive", text, start)
    return value, d.end()


def runs(w: str) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for c in w:
        if out and out[-1][0] == c:
            out[-1] = (c, out[-1][1] + 1)
        else:
            out.append((c, 1))
    return out


def show(w: str, letters: str = LETTERS, sep: str = "") -> str:
    """Exponent-collapsed display, e.g. ``xxxy`` -> ``x^3y``."""
    if not w:
        return "ε"
    out = []
    for c, k in runs(w):
        sym = letters[letter_index(c)]
        out.append(sym if k == 1 else f"{sym}^{k}")
    return sep.join(out)


def to_model_letters(w: str) -> str:
    return w.translate(str.maketrans(LETTERS, MODEL_LETTERS))
