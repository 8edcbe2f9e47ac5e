"""Reduced words in a free group of finite rank.

Letters are signed generator indices: ``i`` is the i-th generator (1-based) and
``-i`` its inverse.  In text, lowercase ``a..z`` are generators, uppercase their
inverses, and ``x12``/``X12`` address any index.  ``"1"`` is the empty word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Alphabet",
    "Word",
    "CyclicWord",
    "MalformedInput",
    "AlphabetMismatch",
    "reduce",
    "multiply",
    "invert",
    "cyclic_reduce",
    "conjugate_in_free",
    "solve_inner",
    "parse_word",
    "letter_key",
    "words_of_length",
    "words_up_to",
]


class MalformedInput(ValueError):
    """Raised for unparsable text or out-of-range generator indices."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")

    def generators(self) -> list["Word"]:
        return [Word._trusted((i,), self.rank) for i in range(1, self.rank + 1)]

    def letters(self) -> list[int]:
        """All signed letters in canonical order a < A < b < B < ..."""
        out = []
        for i in range(1, self.rank + 1):
            out.extend((i, -i))
        return out


def letter_key(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (letter < 0)


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class Word:
    """An immutable freely reduced word over a rank-``m`` alphabet."""

    __slots__ = ("letters", "rank", "_hash")

    def __init__(self, letters: Iterable[int] = (), rank: int = 2):
        letters = tuple(letters)
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise MalformedInput(f"letter index {x} outside rank {rank}")
        self.letters = _free_reduce(letters)
        self.rank = rank
        self._hash = None

    @classmethod
    def _trusted(cls, letters: tuple[int, ...], rank: int) -> "Word":
        w = object.__new__(cls)
        w.letters = letters
        w.rank = rank
        w._hash = None
        return w

    @classmethod
    def empty(cls, rank: int) -> "Word":
        return cls._trusted((), rank)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.rank == other.rank and self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, self.letters))
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else invert(self)
        out = Word.empty(self.rank)
        for _ in range(abs(n)):
            out = multiply(out, base)
        return out

    def __str__(self) -> str:
        return format_letters(self.letters, self.rank)

    def __repr__(self) -> str:
        return f"Word({str(self)!r}, rank={self.rank})"


def format_letters(letters: Sequence[int], rank: int) -> str:
    if not letters:
        return "1"
    if rank <= 26:
        return "".join(chr(96 + x) if x > 0 else chr(64 - x) for x in letters)
    return "".join(f"x{x}" if x > 0 else f"X{-x}" for x in letters)


_TOKEN = re.compile(r"[xX][0-9]+|[a-zA-Z]")


def parse_letters(text: str, rank: int | None = None, line: int | None = None) -> tuple[int, ...]:
    """Parse the word grammar into raw signed indices (not reduced)."""
    if text == "1":
        return ()
    if not text:
        raise MalformedInput("empty word text (use '1' for the identity)", line, 1)
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise MalformedInput(f"unexpected character {text[pos]!r}", line, pos + 1)
        tok = m.group()
        if len(tok) > 1:
            idx = int(tok[1:])
            if idx == 0:
                raise MalformedInput("generator index 0", line, pos + 1)
            out.append(idx if tok[0] == "x" else -idx)
        elif tok.islower():
            out.append(ord(tok) - 96)
        else:
            out.append(-(ord(tok) - 64))
        if rank is not None and abs(out[-1]) > rank:
            raise MalformedInput(f"generator {tok!r} outside rank {rank}", line, pos + 1)
        pos = m.end()
    return tuple(out)


def parse_word(text: str, rank: int, line: int | None = None) -> Word:
    return Word._trusted(_free_reduce(parse_letters(text.strip(), rank, line)), rank)


def reduce(raw: Iterable[int], alphabet: Alphabet | int) -> Word:
    rank = alphabet.rank if isinstance(alphabet, Alphabet) else alphabet
    return Word(raw, rank)


def _check_same(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise AlphabetMismatch(f"rank {u.rank} vs rank {v.rank}")


def multiply(u: Word, v: Word) -> Word:
    _check_same(u, v)
    a, b = u.letters, v.letters
    i, n = 0, min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word._trusted(a[: len(a) - i] + b[i:], u.rank)


def multiply_all(words: Iterable[Word], rank: int) -> Word:
    out = Word.empty(rank)
    for w in words:
        out = multiply(out, w)
    return out


def invert(u: Word) -> Word:
    return Word._trusted(tuple(-x for x in reversed(u.letters)), u.rank)


def is_cyclically_reduced(u: Word) -> bool:
    return len(u.letters) < 2 or u.letters[0] != -u.letters[-1]


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return ``(core, c)`` with ``u == c * core * c**-1`` and ``core`` cyclically reduced."""
    s = u.letters
    i, j = 0, len(s) - 1
    while i < j and s[i] == -s[j]:
        i += 1
        j -= 1
    return Word._trusted(s[i : j + 1], u.rank), Word._trusted(s[:i], u.rank)


def _least_rotation(s: tuple[int, ...]) -> int:
    if not s:
        return 0
    keys = [letter_key(x) for x in s]
    n = len(keys)
    best = 0
    best_seq = keys
    for r in range(1, n):
        cand = keys[r:] + keys[:r]
        if cand < best_seq:
            best, best_seq = r, cand
    return best


class CyclicWord:
    """A conjugacy class of F_m, stored as its least cyclically reduced rotation."""

    __slots__ = ("representative",)

    def __init__(self, word: Word):
        core, _ = cyclic_reduce(word)
        r = _least_rotation(core.letters)
        s = core.letters
        self.representative = Word._trusted(s[r:] + s[:r], word.rank)

    def __len__(self) -> int:
        return len(self.representative)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.representative == other.representative

    def __hash__(self) -> int:
        return hash(("cyc", self.representative))

    def sort_key(self) -> tuple:
        return self.representative.sort_key()

    def __lt__(self, other: "CyclicWord") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return str(self.representative)

    def __repr__(self) -> str:
        return f"CyclicWord({str(self)!r})"


def conjugate_in_free(u: Word, v: Word) -> Word | None:
    """Return ``g`` with ``g**-1 * u * g == v``, or None when u and v are not conjugate."""
    _check_same(u, v)
    cu, c = cyclic_reduce(u)
    cv, d = cyclic_reduce(v)
    if len(cu) != len(cv):
        return None
    su, sv = cu.letters, cv.letters
    n = len(su)
    if n == 0:
        return multiply(c, invert(d))
    for r in range(n):
        if su[r:] + su[:r] == sv:
            p = Word._trusted(su[:r], u.rank)
            return multiply(multiply(c, p), invert(d))
    return None


def solve_inner(images: Sequence[Word]) -> Word | None:
    """Find ``g`` with ``images[i] == g**-1 x_i g`` for every generator, if one exists."""
    if not images:
        raise ValueError("need one image per generator")
    rank = images[0].rank
    if len(images) != rank:
        raise ValueError(f"expected {rank} images, got {len(images)}")
    for w in images:
        _check_same(w, images[0])
    if rank == 1:
        return Word.empty(1) if images[0].letters == (1,) else None
    # image[0] = c a c^-1 forces g = a^n c^-1; image[1] pins n.
    core, c = cyclic_reduce(images[0])
    if core.letters != (1,):
        return None
    ci = invert(c)
    w = multiply(multiply(ci, images[1]), c).letters
    n = 0
    if w and w[0] == -1:
        while n < len(w) and w[n] == -1:
            n += 1
    elif w and w[0] == 1:
        while n < len(w) and w[n] == 1:
            n += 1
        n = -n
    g = multiply(Word._trusted((1,) * n if n >= 0 else (-1,) * (-n), rank), ci)
    gi = invert(g)
    for i, img in enumerate(images, start=1):
        if multiply(multiply(gi, Word._trusted((i,), rank)), g) != img:
            return None
    return g


def words_of_length(rank: int, n: int) -> Iterator[Word]:
    """All reduced words of exactly length ``n``, in canonical order."""
    letters = Alphabet(rank).letters()

    def rec(prefix: tuple[int, ...]):
        if len(prefix) == n:
            yield Word._trusted(prefix, rank)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + (x,))

    yield from rec(())


def words_up_to(rank: int, n: int) -> Iterator[Word]:
    for k in range(n + 1):
        yield from words_of_length(rank, k)
