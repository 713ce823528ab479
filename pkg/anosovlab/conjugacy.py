"""Conjugacy of hyperbolic matrices in SL(2,Z) and GL(2,Z).

A positive hyperbolic matrix (det 1, trace >= 3) is conjugate to a product of
``R = [[1,1],[0,1]]`` and ``L = [[1,0],[1,1]]``; the cyclic RL-word of that
product is a complete conjugacy invariant. The word is read off by running
the continued fraction of the attracting fixed point until it becomes
periodic, conjugating the matrix into the nonnegative cone and peeling
letters off the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import List, Optional, Tuple

from anosovlab.errors import InvalidInputError
from anosovlab.linalg import Hyperbolic2, IntMat, mat_pow
from anosovlab.utils import parallel_map

R = IntMat(2, 2, (1, 1, 0, 1))
L = IntMat(2, 2, (1, 0, 1, 1))
J = IntMat(2, 2, (1, 0, 0, -1))
IDENTITY = IntMat.identity(2)

GROUP_TAGS = ("SL", "GL")

_LETTER_ORDER = {"R": 0, "L": 1}


@dataclass(frozen=True)
class RLWord:
    """Cyclic word in R and L, stored as alternating ``(letter, exponent)`` blocks.

    Attributes:
        blocks (tuple): Nonempty; adjacent letters differ, also cyclically.
    """

    blocks: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        if not self.blocks:
            raise InvalidInputError("an RL-word needs at least one block")
        for letter, exponent in self.blocks:
            if letter not in _LETTER_ORDER or exponent < 1:
                raise InvalidInputError(f"bad RL block ({letter}, {exponent})")
        n = len(self.blocks)
        if n > 1 and any(self.blocks[i][0] == self.blocks[(i + 1) % n][0] for i in range(n)):
            raise InvalidInputError("adjacent RL blocks must alternate")

    def matrix(self) -> IntMat:
        return block_product(self.blocks)

    @property
    def exponent_sum(self) -> int:
        return sum(e for _, e in self.blocks)

    def canonical(self) -> "RLWord":
        return RLWord(_least_rotation(self.blocks)[0])

    def __str__(self) -> str:
        return "".join(f"{letter}^{exponent}" for letter, exponent in self.blocks)

    def to_list(self) -> List[list]:
        return [[letter, exponent] for letter, exponent in self.blocks]


@dataclass(frozen=True)
class ConjugacyWitness:
    """A matrix ``P`` with ``P A = B P``.

    Attributes:
        P (IntMat): The conjugator.
        group_tag (str): ``SL`` when ``det P = 1``, ``GL`` when ``det P`` may be -1.
    """

    P: IntMat
    group_tag: str

    def verifies(self, a: IntMat, b: IntMat) -> bool:
        det = self.P.det()
        allowed = (1,) if self.group_tag == "SL" else (1, -1)
        return det in allowed and self.P @ a == b @ self.P

    def to_dict(self) -> dict:
        return {"P": self.P.to_rows(), "det": self.P.det(), "group": self.group_tag}


def block_product(blocks) -> IntMat:
    out = IDENTITY
    for letter, exponent in blocks:
        out = out @ mat_pow(R if letter == "R" else L, exponent)
    return out


def _block_key(blocks) -> tuple:
    return tuple((_LETTER_ORDER[letter], exponent) for letter, exponent in blocks)


def _least_rotation(blocks) -> Tuple[tuple, int]:
    blocks = tuple(blocks)
    best = min(range(len(blocks)), key=lambda r: _block_key(blocks[r:] + blocks[:r]))
    return blocks[best:] + blocks[:best], best


def _group_letters(letters: List[str]) -> List[Tuple[str, int]]:
    blocks: List[Tuple[str, int]] = []
    for letter in letters:
        if blocks and blocks[-1][0] == letter:
            blocks[-1] = (letter, blocks[-1][1] + 1)
        else:
            blocks.append((letter, 1))
    return blocks


def _floor_quadratic(p: int, q: int, s: int) -> int:
    # floor((p + sqrt(D)) / q) with s = isqrt(D) and D not a square
    if q > 0:
        return (p + s) // q
    return -((p + s) // -q) - 1


def reduce_to_positive(a: Hyperbolic2) -> Tuple[IntMat, IntMat]:
    """
    Conjugate ``A`` into the nonnegative cone.

    Args:
        a (Hyperbolic2): A matrix with det 1 and trace >= 3.

    Returns:
        tuple: ``(N, B)`` with ``det N = 1``, ``B = N A N^-1`` and every entry of ``B`` nonnegative.
    """

    (a11, a12), (a21, a22) = a.to_rows()
    disc = a.trace * a.trace - 4
    s = isqrt(disc)
    # attracting fixed point of x -> (a11 x + a12) / (a21 x + a22) is (p + sqrt(disc)) / q
    p, q = a11 - a22, 2 * a21
    seen = {}
    steps: List[IntMat] = []
    while (p, q) not in seen:
        seen[(p, q)] = len(steps)
        digit = _floor_quadratic(p, q, s)
        steps.append(IntMat(2, 2, (0, 1, 1, -digit)))
        p = digit * q - p
        q = (disc - p * p) // q
    start = seen[(p, q)]
    if start % 2:
        start += 1
    n = IDENTITY
    for step in steps[:start]:
        n = step @ n
    b = n @ a.m @ n.unimodular_inverse()
    assert all(x >= 0 for x in b.entries), f"reduction left negative entries: {b}"
    return n, b


def peel_letters(b: IntMat) -> List[str]:
    """Write a nonnegative matrix of determinant 1 as a product of R and L."""
    letters = []
    x11, x12, x21, x22 = b.entries
    while (x11, x12, x21, x22) != (1, 0, 0, 1):
        if x11 >= x21 and x12 >= x22:
            letters.append("R")
            x11, x12 = x11 - x21, x12 - x22
        elif x21 >= x11 and x22 >= x12:
            letters.append("L")
            x21, x22 = x21 - x11, x22 - x12
        else:
            raise AssertionError(f"{b} is not a positive RL product")
    return letters


def canonical_form(a: Hyperbolic2) -> Tuple[RLWord, IntMat]:
    """
    Canonical cyclic RL-word of ``A`` with the conjugator that realizes it.

    Returns:
        tuple: ``(word, K)`` with ``det K = 1`` and ``K A K^-1 == word.matrix()``.
    """

    a.require_positive()
    n, b = reduce_to_positive(a)
    blocks = _group_letters(peel_letters(b))
    conjugator = n
    if len(blocks) > 1 and blocks[0][0] == blocks[-1][0]:
        letter, last = blocks[-1]
        head = mat_pow(R if letter == "R" else L, last)
        blocks = [(letter, last + blocks[0][1])] + blocks[1:-1]
        conjugator = head @ conjugator
    rotated, shift = _least_rotation(blocks)
    conjugator = block_product(blocks[:shift]).unimodular_inverse() @ conjugator
    word = RLWord(rotated)
    assert conjugator @ a.m == word.matrix() @ conjugator, "canonical conjugator failed"
    return word, conjugator


def rl_decompose(a: Hyperbolic2) -> RLWord:
    """
    Canonical cyclic RL-word of a positive hyperbolic matrix.

    Args:
        a (Hyperbolic2): det 1 and trace >= 3.

    Returns:
        RLWord: The lexicographically least rotation, R before L, smaller exponents first.

    Raises:
        StandingAssumptionError: For det -1 or trace < 3.

    Example:
        >>> str(rl_decompose(Hyperbolic2.from_rows([[3, 2], [1, 1]])))
        'R^2L^1'
    """

    return canonical_form(a)[0]


def normalize(a: Hyperbolic2) -> Tuple[Hyperbolic2, IntMat]:
    """The canonical word matrix conjugate to ``A`` and the conjugator ``K``."""
    word, conjugator = canonical_form(a)
    return Hyperbolic2(word.matrix()), conjugator


def sl2_conjugate(a: Hyperbolic2, b: Hyperbolic2) -> Optional[ConjugacyWitness]:
    """
    Decide conjugacy in SL(2,Z).

    Returns:
        Optional[ConjugacyWitness]: ``P`` with ``det P = 1`` and ``P A = B P``, or ``None``.

    Example:
        >>> cat = Hyperbolic2.from_rows([[2, 1], [1, 1]])
        >>> sl2_conjugate(cat, cat).P == IDENTITY
        True
    """

    word_a, k_a = canonical_form(a)
    word_b, k_b = canonical_form(b)
    if word_a != word_b:
        return None
    witness = ConjugacyWitness(k_b.unimodular_inverse() @ k_a, "SL")
    _check(witness, a.m, b.m)
    return witness


def gl2_conjugate(a: Hyperbolic2, b: Hyperbolic2) -> Optional[ConjugacyWitness]:
    """
    Decide conjugacy in GL(2,Z) by testing ``B`` and ``J B J`` in SL(2,Z),
    ``J = diag(1, -1)``.
    """

    direct = sl2_conjugate(a, b)
    if direct is not None:
        witness = ConjugacyWitness(direct.P, "GL")
    else:
        reflected = sl2_conjugate(a, Hyperbolic2(J @ b.m @ J))
        if reflected is None:
            return None
        witness = ConjugacyWitness(J @ reflected.P, "GL")
    _check(witness, a.m, b.m)
    return witness


def is_reversible(a: Hyperbolic2) -> Optional[ConjugacyWitness]:
    """Witness that ``A`` is conjugate to ``A^-1`` in GL(2,Z), or ``None``."""
    a.require_positive()
    return gl2_conjugate(a, a.inverse())


def inverse_word(word: RLWord) -> RLWord:
    """Canonical word of ``A^-1``: blocks reversed with R and L exchanged."""
    swapped = tuple(("L" if letter == "R" else "R", e) for letter, e in reversed(word.blocks))
    return RLWord(swapped).canonical()


def swap_word(word: RLWord) -> RLWord:
    """Canonical word of ``S A S`` for ``S = [[0,1],[1,0]]``."""
    return RLWord(tuple(("L" if letter == "R" else "R", e) for letter, e in word.blocks)).canonical()


def reversed_word(word: RLWord) -> RLWord:
    return RLWord(tuple(reversed(word.blocks))).canonical()


def gl2_word_class(word: RLWord) -> Tuple[RLWord, RLWord]:
    """The two SL(2,Z) words making up the GL(2,Z) class of ``word``."""
    return word.canonical(), swap_word(word)


def is_palindromic_class(word: RLWord) -> bool:
    """Reversibility read off the word: the reversed word lies in the GL(2,Z) class."""
    return reversed_word(word) in gl2_word_class(word)


def brute_force_conjugator(
    a: IntMat, b: IntMat, height: int, group_tag: str, threads: int = 1
) -> Optional[ConjugacyWitness]:
    """
    Search ``P`` with entries in ``[-height, height]`` and ``P A = B P``.

    The search runs over ``(p, q, r, s)`` in lexicographic order, so the
    witness returned is the least one.

    Args:
        a (IntMat): Source matrix.
        b (IntMat): Target matrix.
        height (int): Entry bound, at least 1.
        group_tag (str): ``SL`` for ``det P = 1``, ``GL`` for ``det P = +-1``.
        threads (int): The first entry ``p`` is sharded across threads.

    Returns:
        Optional[ConjugacyWitness]: The least witness, or ``None``.

    Example:
        >>> cat = IntMat.from_rows([[2, 1], [1, 1]])
        >>> brute_force_conjugator(cat, IntMat.from_rows([[3, 2], [1, 1]]), 10, "SL") is None
        True
    """

    if height < 1:
        raise InvalidInputError(f"brute height must be >= 1, got {height}")
    if group_tag not in GROUP_TAGS:
        raise InvalidInputError(f"group tag must be SL or GL, got {group_tag!r}")
    if a.trace() != b.trace() or a.det() != b.det():
        return None

    hits = parallel_map(lambda p: _search_row(a, b, p, height, group_tag), range(-height, height + 1), threads)
    witness = next((hit for hit in hits if hit is not None), None)
    if witness is not None:
        _check(witness, a, b)
    return witness


def _search_row(a: IntMat, b: IntMat, p: int, height: int, group_tag: str) -> Optional[ConjugacyWitness]:
    a1, a2, a3, a4 = a.entries
    b1, b2, b3, b4 = b.entries
    span = range(-height, height + 1)
    allowed = (1,) if group_tag == "SL" else (-1, 1)

    def accept(q, r, s):
        if p * s - q * r not in allowed:
            return None
        candidate = IntMat(2, 2, (p, q, r, s))
        if candidate @ a == b @ candidate:
            return ConjugacyWitness(candidate, group_tag)
        return None

    for q in span:
        if b2:
            # first row of P A = B P fixes r and s
            r_num = p * (a1 - b1) + q * a3
            s_num = p * a2 + q * (a4 - b1)
            if r_num % b2 or s_num % b2:
                continue
            r, s = r_num // b2, s_num // b2
            if abs(r) > height or abs(s) > height:
                continue
            hit = accept(q, r, s)
            if hit is not None:
                return hit
        else:
            for r in span:
                for s in span:
                    hit = accept(q, r, s)
                    if hit is not None:
                        return hit
    return None


def _check(witness: ConjugacyWitness, a: IntMat, b: IntMat):
    assert witness.verifies(a, b), f"witness {witness.P} does not conjugate {a} to {b}"
    assert a.trace() == b.trace() and a.det() == b.det(), "conjugate matrices must share trace and det"
