"""Finite posets with string-labelled elements."""

from __future__ import annotations

from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple


class PosetError(ValueError):
    pass


class Poset:
    """A finite partial order; ``relations`` are pairs ``(x, y)`` with x <= y.

    The reflexive-transitive closure is taken, antisymmetry is checked.
    """

    def __init__(self, elements: Iterable[str], relations: Iterable[Tuple[str, str]] = ()):
        self.elements: Tuple[str, ...] = tuple(sorted(set(elements)))
        el = set(self.elements)
        below: Dict[str, set] = {x: {x} for x in self.elements}
        for x, y in relations:
            if x not in el or y not in el:
                raise PosetError(f"relation ({x}, {y}) mentions an unknown element")
            below[y].add(x)
        changed = True
        while changed:
            changed = False
            for y in self.elements:
                new = set().union(*(below[x] for x in below[y]))
                if new != below[y]:
                    below[y] = new
                    changed = True
        for x in self.elements:
            for y in below[x]:
                if y != x and x in below[y]:
                    raise PosetError(f"{x} and {y} are distinct but equivalent")
        self._below = {x: frozenset(s) for x, s in below.items()}

    def __repr__(self):
        return f"Poset({list(self.elements)}, covers={self.covers()})"

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._below

    def __eq__(self, other):
        return isinstance(other, Poset) and self._below == other._below

    def __hash__(self):
        return hash(tuple(sorted(self._below.items())))

    def leq(self, x: str, y: str) -> bool:
        return x in self._below[y]

    def lt(self, x: str, y: str) -> bool:
        return x != y and x in self._below[y]

    def down(self, x: str) -> FrozenSet[str]:
        return self._below[x]

    def up(self, x: str) -> FrozenSet[str]:
        return frozenset(y for y in self.elements if x in self._below[y])

    def pairs(self) -> List[Tuple[str, str]]:
        """All pairs x <= y (including x == y), sorted."""
        return sorted((x, y) for y in self.elements for x in self._below[y])

    def covers(self) -> List[Tuple[str, str]]:
        out = []
        for x, y in self.pairs():
            if x != y and not any(self.lt(x, z) and self.lt(z, y) for z in self.elements):
                out.append((x, y))
        return out

    def strict_chains(self, length: int) -> List[Tuple[str, ...]]:
        """Chains x0 < x1 < ... < x_length."""
        chains = [(x,) for x in self.elements]
        for _ in range(length):
            chains = [c + (y,) for c in chains for y in self.elements if self.lt(c[-1], y)]
        return chains

    def weak_chains(self, length: int) -> List[Tuple[str, ...]]:
        """Chains x0 <= x1 <= ... <= x_length."""
        chains = [(x,) for x in self.elements]
        for _ in range(length):
            chains = [c + (y,) for c in chains for y in self.elements if self.leq(c[-1], y)]
        return chains

    def subposet(self, elements: Iterable[str]) -> "Poset":
        els = set(elements)
        missing = els - set(self.elements)
        if missing:
            raise PosetError(f"unknown elements {sorted(missing)}")
        return Poset(els, [(x, y) for x, y in self.pairs() if x in els and y in els])

    def is_down_set(self, elements: Iterable[str]) -> bool:
        els = set(elements)
        return all(self._below[x] <= els for x in els)

    def minimal(self) -> List[str]:
        return [x for x in self.elements if self._below[x] == {x}]

    def maximal(self) -> List[str]:
        return [x for x in self.elements if self.up(x) == {x}]

    def components(self) -> List[FrozenSet[str]]:
        seen = set()
        comps = []
        for x in self.elements:
            if x in seen:
                continue
            stack, comp = [x], set()
            while stack:
                y = stack.pop()
                if y in comp:
                    continue
                comp.add(y)
                stack.extend(self.down(y) | self.up(y))
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    # constructors
    @classmethod
    def chain(cls, labels: Sequence[str]) -> "Poset":
        return cls(labels, list(zip(labels, labels[1:])))

    @classmethod
    def antichain(cls, labels: Sequence[str]) -> "Poset":
        return cls(labels)

    @classmethod
    def from_sets(cls, sets: Mapping[str, FrozenSet]) -> "Poset":
        """Order named sets by inclusion."""
        names = list(sets)
        rel = [(a, b) for a, b in product(names, names) if a != b and sets[a] <= sets[b]]
        return cls(names, rel)


def set_label(s: Iterable[str]) -> str:
    """Deterministic label for a set of point names, e.g. ``{a,b}``."""
    return "{" + ",".join(sorted(s)) + "}"
