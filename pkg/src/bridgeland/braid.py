"""Braid words acting on exceptional collections, and the 3-strand word problem."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .derived import DerivedError, ExceptionalCollection, mutate_collection

_TOKEN = re.compile(r"^(R|L)(\d+)(?:\^(\d+))?$|^S(\d+)\[(-?\d+)\]$")


@dataclass(frozen=True)
class BraidWord:
    """Generators applied left to right: ``("R", i, 0)``, ``("L", i, 0)``, ``("S", i, m)``."""

    letters: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        letters = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise DerivedError(f"bad braid token {tok!r}")
            if m.group(1):
                letters.extend([(m.group(1), int(m.group(2)), 0)] * int(m.group(3) or 1))
            else:
                letters.append(("S", int(m.group(4)), int(m.group(5))))
        return cls(tuple(letters))

    def __str__(self):
        return " ".join(f"S{i}[{m}]" if g == "S" else f"{g}{i}" for g, i, m in self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        flip = {"R": "L", "L": "R"}
        return BraidWord(tuple((flip.get(g, g), i, -m) for g, i, m in reversed(self.letters)))

    def check(self, length: int):
        for g, i, _ in self.letters:
            top = length - 1 if g in "RL" else length
            if not 0 <= i < top:
                raise DerivedError(f"{g}{i} out of range for a collection of length {length}")


def act_braid(C: ExceptionalCollection, w: BraidWord | str, check: bool = True) -> ExceptionalCollection:
    """Apply the letters of ``w`` in reading order; the result is checked to be exceptional."""
    if isinstance(w, str):
        w = BraidWord.parse(w)
    w.check(len(C))
    if check:
        C.assert_exceptional()
    for g, i, m in w.letters:
        if g == "S":
            shifts = [m if k == i else 0 for k in range(len(C))]
            C = C.shifted(shifts)
        else:
            C = mutate_collection(C, i, "right" if g == "R" else "left")
    if check:
        C.assert_exceptional()
    return C


# --------------------------------------------------- reduced Burau, 3 strands

# Laurent polynomials in t as {exponent: coefficient}


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _mmul(A, B):
    return [
        [_padd(_pmul(A[i][0], B[0][j]), _pmul(A[i][1], B[1][j])) for j in range(2)]
        for i in range(2)
    ]


_ONE, _ZERO = {0: 1}, {}
_BURAU = {
    (1, 1): [[{1: -1}, _ONE], [_ZERO, _ONE]],
    (1, -1): [[{-1: -1}, {-1: 1}], [_ZERO, _ONE]],
    (2, 1): [[_ONE, _ZERO], [{1: 1}, {1: -1}]],
    (2, -1): [[_ONE, _ZERO], [_ONE, {-1: -1}]],
}


def burau_matrix(gens) -> list:
    """Product of reduced Burau matrices for ``[(strand_gen, ±1), ...]``."""
    M = [[_ONE, _ZERO], [_ZERO, _ONE]]
    for g, e in gens:
        if (g, e) not in _BURAU:
            raise DerivedError(f"not a 3-strand generator: sigma_{g}^{e}")
        M = _mmul(M, _BURAU[(g, e)])
    return M


def b3_generators(w: BraidWord) -> list:
    """R_i -> sigma_{i+1}, L_i -> sigma_{i+1}^{-1}; shifts are central and ignored."""
    out = []
    for g, i, _ in w.letters:
        if g == "S":
            continue
        if i not in (0, 1):
            raise DerivedError("3-strand braid words use positions 0 and 1 only")
        out.append((i + 1, 1 if g == "R" else -1))
    return out


def b3_word_identity(w: BraidWord | str) -> bool:
    """Does the word represent the identity of the 3-strand braid group?"""
    if isinstance(w, str):
        w = BraidWord.parse(w)
    return burau_matrix(b3_generators(w)) == [[_ONE, _ZERO], [_ZERO, _ONE]]
