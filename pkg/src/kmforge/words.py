"""Outer commutator words and the verbal subgroups they define.

Commutators follow the convention ``[u, v] = u^-1 v^-1 u v``.  Every
verbal subgroup computed here is a normal closure, and conjugate
conventions give the same normal closure, so results do not depend on the
convention.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Union

from .caps import CapExceeded, get_caps
from .groups import FiniteGroup, GroupError, Subgroup, _bits, is_normal, join, normal_closure

__all__ = [
    "WordError",
    "Leaf",
    "Node",
    "OuterWord",
    "PermutedWord",
    "parse_word",
    "outer_words",
    "evaluate",
    "verbal_subgroup",
    "satisfies_identity",
    "check_multilinearity",
    "multilinearity_sides",
]


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    var: int  # 1-based

    def render(self) -> str:
        return f"x{self.var}"


@dataclass(frozen=True)
class Node:
    left: "Tree"
    right: "Tree"

    def render(self) -> str:
        return f"[{self.left.render()},{self.right.render()}]"


Tree = Union[Leaf, Node]


def _weight(tree: Tree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return _weight(tree.left) + _weight(tree.right)


@dataclass(frozen=True)
class OuterWord:
    """A bracket tree whose leaves read ``x1..xt`` left to right.

    ``names`` keeps the variable names as written before renumbering.
    """

    tree: Tree
    names: tuple[str, ...] = field(default=(), compare=False)

    @property
    def weight(self) -> int:
        return _weight(self.tree)

    def render(self) -> str:
        return self.tree.render()

    def __str__(self):
        return self.render()

    def permuted(self, sigma: Sequence[int]) -> "PermutedWord":
        return PermutedWord(self, tuple(sigma))


@dataclass(frozen=True)
class PermutedWord:
    """``w_sigma(x1..xt) = w(x_sigma(1), .., x_sigma(t))`` with 1-based ``sigma``."""

    base: OuterWord
    sigma: tuple[int, ...]

    def __post_init__(self):
        t = self.base.weight
        if sorted(self.sigma) != list(range(1, t + 1)):
            raise WordError(f"sigma {self.sigma} is not a permutation of 1..{t}")

    @property
    def weight(self) -> int:
        return self.base.weight

    def render(self) -> str:
        return f"{self.base.render()}_sigma{list(self.sigma)}"

    def reorder(self, args: Sequence):
        return [args[s - 1] for s in self.sigma]


AnyWord = Union[OuterWord, PermutedWord]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.names: list[str] = []

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def error(self, what="syntax error"):
        return WordError(f"{what} at position {self.pos}")

    def expect(self, ch):
        self.skip()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise self.error(f"syntax error: expected {ch!r}")
        self.pos += 1

    def word(self) -> Tree:
        self.skip()
        if self.pos >= len(self.text):
            raise self.error("syntax error: unexpected end")
        ch = self.text[self.pos]
        if ch == "x":
            start = self.pos
            self.pos += 1
            digits_at = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == digits_at:
                raise self.error("syntax error: variable needs digits")
            name = self.text[start:self.pos]
            if name in self.names:
                self.pos = start
                raise WordError(f"repeated variable {name} at position {start}")
            self.names.append(name)
            return Leaf(len(self.names))
        if ch == "[":
            self.pos += 1
            left = self.word()
            self.expect(",")
            right = self.word()
            self.expect("]")
            return Node(left, right)
        raise self.error()


def parse_word(text: str, max_weight: int | None = None) -> OuterWord:
    """Parse ``W ::= x<digits> | [W, W]`` with pairwise distinct variables.

    Variables are renumbered so leaves read ``x1..xt`` left to right.
    """
    cap = max_weight if max_weight is not None else get_caps().word_weight
    p = _Parser(text)
    tree = p.word()
    p.skip()
    if p.pos != len(text):
        raise p.error("syntax error: trailing input")
    w = OuterWord(tree, tuple(p.names))
    if w.weight > cap:
        raise CapExceeded(f"weight exceeds cap: {w.weight} > {cap}")
    return w


def _shapes(n: int):
    if n == 1:
        yield None
        return
    for r in range(1, n):
        for a in _shapes(r):
            for b in _shapes(n - r):
                yield (a, b)


def _number(shape, start: int) -> tuple[Tree, int]:
    if shape is None:
        return Leaf(start), start + 1
    left, nxt = _number(shape[0], start)
    right, nxt = _number(shape[1], nxt)
    return Node(left, right), nxt


def outer_words(weight: int) -> list[OuterWord]:
    """All normalized outer commutators of the given weight."""
    return [OuterWord(_number(s, 1)[0]) for s in _shapes(weight)]


def _eval_tree(tree: Tree, G: FiniteGroup, args: Sequence[int]) -> int:
    if isinstance(tree, Leaf):
        return args[tree.var - 1]
    return G.commutator(_eval_tree(tree.left, G, args), _eval_tree(tree.right, G, args))


def evaluate(w: AnyWord, G: FiniteGroup, args: Sequence[int]) -> int:
    if len(args) != w.weight:
        raise WordError(f"arity mismatch: word has weight {w.weight}, got {len(args)} arguments")
    if isinstance(w, PermutedWord):
        return _eval_tree(w.base.tree, G, w.reorder(list(args)))
    return _eval_tree(w.tree, G, args)


def _value_set(tree: Tree, G: FiniteGroup, masks: Sequence[int]) -> int:
    # the variables of the two subtrees are disjoint, so the value set of a
    # node is exactly the set of commutators of values of its children
    if isinstance(tree, Leaf):
        return masks[tree.var - 1]
    left = _bits(_value_set(tree.left, G, masks))
    right = _bits(_value_set(tree.right, G, masks))
    t, inv = G.table, G.inverse
    out = 0
    for u in left:
        row = t[inv[u]]
        for v in right:
            out |= 1 << t[t[row[inv[v]]][u]][v]
    return out


def _prepare(w: AnyWord, args: Sequence[Subgroup]) -> tuple[Tree, list[Subgroup]]:
    if len(args) != w.weight:
        raise WordError(f"arity mismatch: word has weight {w.weight}, got {len(args)} subgroups")
    G = args[0].parent
    if any(A.parent is not G for A in args):
        raise GroupError("parent mismatch")
    if isinstance(w, PermutedWord):
        tree, args = w.base.tree, w.reorder(list(args))
    else:
        tree, args = w.tree, list(args)
    work = _work(tree, [A.order for A in args], G.order)[1]
    cap = get_caps().tuple_space
    if work > cap:
        raise CapExceeded(f"tuple space too large: {work} > {cap}")
    return tree, args


def _work(tree: Tree, orders: Sequence[int], n: int) -> tuple[int, int]:
    """(bound on the value-set size, bound on commutators evaluated)."""
    if isinstance(tree, Leaf):
        return orders[tree.var - 1], 0
    a, wa = _work(tree.left, orders, n)
    b, wb = _work(tree.right, orders, n)
    return min(a * b, n), wa + wb + a * b


def word_values(w: AnyWord, args: Sequence[Subgroup]) -> tuple[int, ...]:
    """The set ``{w(a1..at) : ai in Ai}`` as sorted element indices."""
    tree, args = _prepare(w, args)
    return _bits(_value_set(tree, args[0].parent, [A.mask for A in args]))


def verbal_subgroup(w: AnyWord, args: Sequence[Subgroup]) -> Subgroup:
    """Normal closure of all values ``w(a1..at)`` with ``ai`` in ``args[i]``."""
    tree, args = _prepare(w, args)
    G = args[0].parent
    if any(A.is_trivial() for A in args):
        return G.trivial
    values = _value_set(tree, G, [A.mask for A in args])
    if values == 1:
        return G.trivial
    return normal_closure(G, _bits(values & ~1))


def satisfies_identity(w: AnyWord, A: Subgroup) -> bool:
    """True iff ``w(a1..at) = 1`` for all ``ai`` in ``A``."""
    tree, args = _prepare(w, [A] * w.weight)
    return _value_set(tree, A.parent, [A.mask] * w.weight) == 1


def multilinearity_sides(w: AnyWord, args: Sequence[Subgroup], alt: Subgroup, slot: int) -> tuple[Subgroup, Subgroup]:
    """Both sides of ``w(.., Ai + A'i, ..) = w(.., Ai, ..) + w(.., A'i, ..)``.

    ``slot`` is 0-based.
    """
    for A in list(args) + [alt]:
        if not is_normal(A):
            raise GroupError("argument not normal")
    args = list(args)
    summed = list(args)
    summed[slot] = join(args[slot], alt)
    other = list(args)
    other[slot] = alt
    left = verbal_subgroup(w, summed)
    right = join(verbal_subgroup(w, args), verbal_subgroup(w, other))
    return left, right


def check_multilinearity(w: AnyWord, args: Sequence[Subgroup], alt: Subgroup, slot: int) -> bool:
    left, right = multilinearity_sides(w, args, alt, slot)
    return left == right


def all_permutations(t: int) -> list[tuple[int, ...]]:
    return [tuple(p) for p in itertools.permutations(range(1, t + 1))]
