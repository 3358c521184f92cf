"""Exact circuit counting for words at small matrix size n.

A circuit is a map pi: {0..k} -> {1..n} with pi(0) = pi(k).  For a word w of
length k, Pi(w) collects the circuits whose edge pattern matches the word:
positions i and j carry the same letter exactly when the unordered vertex
pairs {pi(i-1), pi(i)} and {pi(j-1), pi(j)} coincide.

Counting iterates over generating vertices only (pi(0) plus the endpoint of
each letter's first occurrence); every other value is forced by the edge it
must repeat, so the search touches at most ~n^(b+1) assignments for b
distinct letters instead of n^(k+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinatorics import Word
from .errors import CapacityError, ValidationError

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class CircuitCount:
    word: Word
    n: int
    count: int
    #: count / n^(b+1), kept exact so ratio tables cannot lie about monotonicity
    ratio: Fraction


def _budget_estimate(word: Word, n: int) -> int:
    """Upper bound on assignments explored: n per generating vertex."""
    k = len(word)
    seen = set()
    generating = 1  # pi(0)
    for position, letter in enumerate(word.letters, start=1):
        if letter not in seen and position < k:
            generating += 1
        seen.add(letter)
    return n**generating


def count_circuits(word: Word, n: int, budget: int = DEFAULT_BUDGET) -> CircuitCount:
    """Exact |Pi(word)| for matrices of size n.

    >>> count_circuits(Word.from_string("aa"), 5).count
    25
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    estimate = _budget_estimate(word, n)
    if estimate > budget:
        raise CapacityError(
            f"counting circuits for {word} at n={n} may explore ~{estimate} "
            f"assignments (budget {budget}); raise the budget to proceed"
        )
    k = len(word)
    letters = word.letters
    pi = [0] * (k + 1)
    # letter -> its established edge as the ordered pair seen first
    first_edge: dict[int, tuple[int, int]] = {}
    used_edges: set[tuple[int, int]] = set()
    count = 0

    def assign(i: int) -> None:
        nonlocal count
        if i == k + 1:
            count += 1
            return
        letter = letters[i - 1]
        prev = pi[i - 1]
        if letter in first_edge:
            u, v = first_edge[letter]
            if prev == u:
                value = v
            elif prev == v:
                value = u
            else:
                return
            if i == k and value != pi[0]:
                return
            pi[i] = value
            assign(i + 1)
            return
        candidates = (pi[0],) if i == k else range(1, n + 1)
        for value in candidates:
            edge = (prev, value) if prev <= value else (value, prev)
            if edge in used_edges:
                continue  # that edge belongs to a different letter
            first_edge[letter] = (prev, value)
            used_edges.add(edge)
            pi[i] = value
            assign(i + 1)
            del first_edge[letter]
            used_edges.remove(edge)

    for start in range(1, n + 1):
        pi[0] = start
        assign(1)

    b = word.n_letters
    return CircuitCount(word, n, count, Fraction(count, n ** (b + 1)))


def classify_occurrences(
    word: Word, pi: Sequence[int], relative_to: str = "first"
) -> dict[int, str]:
    """Label each repeated letter occurrence of a circuit as C1, C2 or both.

    C1 means the occurrence traverses the same ordered vertex pair as the
    reference occurrence, C2 the reversed pair, "both" when the edge is a
    loop so the two readings coincide.  The reference is the letter's first
    occurrence by default; ``relative_to="previous"`` compares against the
    immediately preceding occurrence instead (successive appearances in a
    top-count circuit of a special symmetric word are all C2 in that sense).

    Raises ValidationError if pi does not belong to Pi(word).
    """
    if relative_to not in ("first", "previous"):
        raise ValidationError(f"relative_to must be 'first' or 'previous', got {relative_to!r}")
    k = len(word)
    pi = tuple(pi)
    if len(pi) != k + 1:
        raise ValidationError(f"circuit must have length {k + 1}, got {len(pi)}")
    if pi[0] != pi[k]:
        raise ValidationError("circuit must be closed: pi(0) != pi(k)")
    # verify membership: same letter <=> same unordered edge
    edge_by_letter: dict[int, tuple[int, int]] = {}
    for i in range(1, k + 1):
        a, b = pi[i - 1], pi[i]
        edge = (a, b) if a <= b else (b, a)
        letter = word.letters[i - 1]
        if letter in edge_by_letter:
            if edge_by_letter[letter] != edge:
                raise ValidationError(
                    f"circuit not in Pi({word}): letter at position {i} repeats a different edge"
                )
        else:
            if edge in edge_by_letter.values():
                raise ValidationError(
                    f"circuit not in Pi({word}): distinct letters share edge {edge} at position {i}"
                )
            edge_by_letter[letter] = edge

    labels: dict[int, str] = {}
    reference: dict[int, tuple[int, int]] = {}
    for i in range(1, k + 1):
        letter = word.letters[i - 1]
        ordered = (pi[i - 1], pi[i])
        if letter in reference:
            ref = reference[letter]
            same = ordered == ref
            reversed_ = ordered == (ref[1], ref[0])
            assert same or reversed_
            labels[i] = "both" if (same and reversed_) else ("C1" if same else "C2")
            if relative_to == "previous":
                reference[letter] = ordered
        else:
            reference[letter] = ordered
    return labels


def ratio_table(word: Word, n_values: Sequence[int], budget: int = DEFAULT_BUDGET) -> list[CircuitCount]:
    """count_circuits across several n, for convergence tables."""
    return [count_circuits(word, n, budget=budget) for n in n_values]
