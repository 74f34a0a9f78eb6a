"""Reduced words in the free group on the edge set."""

from __future__ import annotations

from typing import Iterable, Optional

from .model import EdgeInst


class FreeWord:
    """Immutable reduced word; letters are (edge, ±1) pairs."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[EdgeInst, int]] = ()):
        reduced: list[tuple[EdgeInst, int]] = []
        for e, sign in letters:
            if sign not in (1, -1):
                raise ValueError("letter signs must be +1 or -1")
            if reduced and reduced[-1] == (e, -sign):
                reduced.pop()
            else:
                reduced.append((e, sign))
        object.__setattr__(self, "letters", tuple(reduced))

    def __setattr__(self, *_):
        raise AttributeError("FreeWord is immutable")

    @staticmethod
    def identity() -> "FreeWord":
        return FreeWord()

    @staticmethod
    def from_path(path: Iterable[EdgeInst], sign: int = 1) -> "FreeWord":
        letters = [(e, sign) for e in path]
        if sign == -1:
            letters.reverse()
        return FreeWord(letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord((e, -s) for e, s in reversed(self.letters))

    def is_identity(self) -> bool:
        return not self.letters

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def positive_negative_split(
        self,
    ) -> Optional[tuple[tuple[EdgeInst, ...], tuple[EdgeInst, ...]]]:
        """If the word has shape a·b⁻¹ with a, b positive edge sequences,
        return (a, b); otherwise None.  Either part may be empty."""
        pos: list[EdgeInst] = []
        neg: list[EdgeInst] = []
        seen_neg = False
        for e, sign in self.letters:
            if sign == 1:
                if seen_neg:
                    return None
                pos.append(e)
            else:
                seen_neg = True
                neg.append(e)
        neg.reverse()  # b⁻¹ letters appear last-of-b first
        return tuple(pos), tuple(neg)

    def label(self) -> str:
        if not self.letters:
            return "0"
        return " ".join(
            e.label() if s == 1 else f"{e.label()}^-1" for e, s in self.letters
        )

    def __repr__(self) -> str:
        return f"FreeWord({self.label()})"
