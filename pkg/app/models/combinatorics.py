"""
Combinatorial Object Models
Stirling words, increasing ternary and ordered trees and phylogenetic trees with a bracket text notation
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, Field

MARK = "·"


class Slot(int, Enum):
    LEFT = 0
    MIDDLE = 1
    RIGHT = 2


class PhyloFlavor(str, Enum):
    UNORDERED = "unordered"
    ORDERED = "ordered"
    CYCLIC = "cyclic"


# Stirling words

@dataclass(frozen=True)
class StirlingWord:
    """
    Word over positive integers with optional dots.

    A dot at position p sits between letters[p] and letters[p+1] and is only
    allowed where letters[p] < letters[p+1].
    """

    letters: Tuple[int, ...]
    marks: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "marks", tuple(sorted(set(self.marks))))
        for p in self.marks:
            if p < 0 or p + 1 >= len(self.letters) or self.letters[p] >= self.letters[p + 1]:
                raise ValueError(f"Mark at position {p} of {self.letters} is not the start of an ascent")

    def __len__(self) -> int:
        return len(self.letters)

    def is_stirling(self) -> bool:
        """Every letter strictly between two occurrences of a exceeds a"""
        last: Dict[int, int] = {}
        for pos, a in enumerate(self.letters):
            if a in last and any(b <= a for b in self.letters[last[a] + 1: pos]):
                return False
            last[a] = pos
        return True

    def ascents(self) -> List[int]:
        return [p for p in range(len(self.letters) - 1) if self.letters[p] < self.letters[p + 1]]

    def first_positions(self) -> Dict[int, int]:
        first: Dict[int, int] = {}
        for pos, a in enumerate(self.letters):
            first.setdefault(a, pos)
        return first

    def with_marks(self, marks) -> "StirlingWord":
        return StirlingWord(self.letters, tuple(marks))

    def format(self) -> str:
        sep = "" if all(a < 10 for a in self.letters) else " "
        out = []
        for pos, a in enumerate(self.letters):
            out.append(str(a))
            if pos in self.marks:
                out.append(f"{sep}{MARK}{sep}")
            elif pos + 1 < len(self.letters):
                out.append(sep)
        return "".join(out)

    @classmethod
    def parse(cls, text: str) -> "StirlingWord":
        """Inverse of format: `12·21` or, for letters above 9, `1 10 · 11 11 10 1`"""
        text = text.strip().replace(".", MARK)
        letters: List[int] = []
        marks: List[int] = []
        spaced = " " in text
        for chunk in text.split(MARK):
            tokens = chunk.split() if spaced else list(chunk)
            letters.extend(int(t) for t in tokens if t)
            marks.append(len(letters) - 1)
        return cls(tuple(letters), tuple(marks[:-1]))

    def __str__(self) -> str:
        return self.format()


# Trees with labeled vertices

def _parse_label(text: str, pos: int) -> Tuple[int, bool, int]:
    end = pos
    while end < len(text) and text[end].isdigit():
        end += 1
    if end == pos:
        raise ValueError(f"Expected a vertex label at offset {pos} of '{text}'")
    label = int(text[pos:end])
    marked = end < len(text) and text[end] == "*"
    return label, marked, end + (1 if marked else 0)


@dataclass(frozen=True)
class TernaryTree:
    """
    Rooted tree whose vertices have optional left, middle and right children.

    links holds (vertex, left, middle, right) sorted by vertex; marks holds the
    vertices whose incoming edge carries a mark.
    """

    root: Optional[int] = None
    links: Tuple[Tuple[int, Optional[int], Optional[int], Optional[int]], ...] = ()
    marks: FrozenSet[int] = frozenset()
    _table: Dict[int, Tuple[Optional[int], Optional[int], Optional[int]]] = field(
        default=None, compare=False, repr=False, hash=False
    )
    _parent: Dict[int, Tuple[int, Slot]] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        links = tuple(sorted(tuple(link) for link in self.links))
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "marks", frozenset(self.marks))
        table = {v: (l, m, r) for v, l, m, r in links}
        parent: Dict[int, Tuple[int, Slot]] = {}
        for v, *kids in links:
            for slot, c in zip(Slot, kids):
                if c is None:
                    continue
                if c not in table or c in parent or c == self.root:
                    raise ValueError(f"Vertex {c} is not a valid child of {v}")
                parent[c] = (v, slot)
        if self.root is None:
            if links:
                raise ValueError("Empty tree cannot have vertices")
        elif self.root not in table or len(parent) != len(table) - 1:
            raise ValueError("Tree links do not form a single rooted tree")
        for c in self.marks:
            if c not in parent or parent[c][1] == Slot.LEFT:
                raise ValueError(f"Only middle and right edges can be marked, got vertex {c}")
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_parent", parent)

    @classmethod
    def from_children(
        cls,
        root: Optional[int],
        children: Dict[int, Tuple[Optional[int], Optional[int], Optional[int]]],
        marks=(),
    ) -> "TernaryTree":
        links = [(v, *children.get(v, (None, None, None))) for v in children]
        known = set(children)
        for kids in children.values():
            for c in kids:
                if c is not None and c not in known:
                    links.append((c, None, None, None))
                    known.add(c)
        if root is not None and root not in known:
            links.append((root, None, None, None))
        return cls(root=root, links=tuple(links), marks=frozenset(marks))

    @classmethod
    def from_edges(cls, root: int, edges: List[Tuple[int, Slot, int]], marks=()) -> "TernaryTree":
        children: Dict[int, List[Optional[int]]] = {root: [None, None, None]}
        for parent, slot, child in edges:
            children.setdefault(parent, [None, None, None])[slot] = child
            children.setdefault(child, [None, None, None])
        return cls.from_children(root, {v: tuple(k) for v, k in children.items()}, marks)

    def is_empty(self) -> bool:
        return self.root is None

    def vertices(self) -> List[int]:
        return [v for v, *_ in self.links]

    def __len__(self) -> int:
        return len(self.links)

    def child(self, v: int, slot: Slot) -> Optional[int]:
        return self._table[v][slot]

    def parent(self, v: int) -> Optional[Tuple[int, Slot]]:
        return self._parent.get(v)

    def edges(self) -> Iterator[Tuple[int, Slot, int]]:
        for v, *kids in self.links:
            for slot, c in zip(Slot, kids):
                if c is not None:
                    yield v, slot, c

    def edge_counts(self) -> Dict[Slot, int]:
        counts = {slot: 0 for slot in Slot}
        for _, slot, _ in self.edges():
            counts[slot] += 1
        return counts

    def is_increasing(self) -> bool:
        return all(v < c for v, _, c in self.edges())

    def subtree(self, v: Optional[int], slots=(Slot.LEFT, Slot.MIDDLE, Slot.RIGHT)) -> "TernaryTree":
        """Subtree rooted at v following only the given edge kinds"""
        if v is None:
            return TernaryTree()
        children = {}
        stack = [v]
        while stack:
            u = stack.pop()
            kids = tuple(c if s in slots else None for s, c in zip(Slot, self._table[u]))
            children[u] = kids
            stack.extend(c for c in kids if c is not None)
        marks = [c for c in self.marks if c in children and c != v]
        return TernaryTree.from_children(v, children, marks)

    def format(self) -> str:
        def render(v: Optional[int]) -> str:
            if v is None:
                return "-"
            label = f"{v}*" if v in self.marks else str(v)
            if all(c is None for c in self._table[v]):
                return label
            return f"{label}({','.join(render(c) for c in self._table[v])})"

        return render(self.root)

    @classmethod
    def parse(cls, text: str) -> "TernaryTree":
        """Inverse of format: `1(-,2,-)` with `-` for an empty slot and `*` on marked children"""
        text = text.replace(" ", "")
        if text in ("", "-"):
            return cls()
        children: Dict[int, Tuple[Optional[int], ...]] = {}
        marks: List[int] = []

        def node(pos: int) -> Tuple[Optional[int], int]:
            if text[pos] == "-":
                return None, pos + 1
            label, marked, pos = _parse_label(text, pos)
            if marked:
                marks.append(label)
            kids: List[Optional[int]] = [None, None, None]
            if pos < len(text) and text[pos] == "(":
                pos += 1
                for i in range(3):
                    kids[i], pos = node(pos)
                    expected = ")" if i == 2 else ","
                    if pos >= len(text) or text[pos] != expected:
                        raise ValueError(f"Malformed ternary tree '{text}' at offset {pos}")
                    pos += 1
            children[label] = tuple(kids)
            return label, pos

        root, end = node(0)
        if end != len(text):
            raise ValueError(f"Trailing text in ternary tree '{text}'")
        return cls.from_children(root, children, marks)

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class OrderedTree:
    """Rooted tree with linearly ordered children; marks holds marked vertices"""

    root: int
    links: Tuple[Tuple[int, Tuple[int, ...]], ...]
    marks: FrozenSet[int] = frozenset()
    _table: Dict[int, Tuple[int, ...]] = field(default=None, compare=False, repr=False, hash=False)
    _parent: Dict[int, int] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        links = tuple(sorted((v, tuple(kids)) for v, kids in self.links))
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "marks", frozenset(self.marks))
        table = dict(links)
        parent: Dict[int, int] = {}
        for v, kids in links:
            for c in kids:
                if c not in table or c in parent or c == self.root:
                    raise ValueError(f"Vertex {c} is not a valid child of {v}")
                parent[c] = v
        if self.root not in table or len(parent) != len(table) - 1:
            raise ValueError("Tree links do not form a single rooted tree")
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_parent", parent)

    @classmethod
    def from_children(cls, root: int, children: Dict[int, Tuple[int, ...]], marks=()) -> "OrderedTree":
        table = {v: tuple(kids) for v, kids in children.items()}
        for kids in list(table.values()):
            for c in kids:
                table.setdefault(c, ())
        table.setdefault(root, ())
        return cls(root=root, links=tuple(table.items()), marks=frozenset(marks))

    def vertices(self) -> List[int]:
        return [v for v, _ in self.links]

    def __len__(self) -> int:
        return len(self.links)

    def children(self, v: int) -> Tuple[int, ...]:
        return self._table[v]

    def parent(self, v: int) -> Optional[int]:
        return self._parent.get(v)

    def leaves(self) -> List[int]:
        return [v for v, kids in self.links if not kids]

    def internal_vertices(self) -> List[int]:
        return [v for v, kids in self.links if kids]

    def is_increasing(self) -> bool:
        return all(v < c for v, kids in self.links for c in kids)

    def format(self) -> str:
        def render(v: int) -> str:
            label = f"{v}*" if v in self.marks else str(v)
            kids = self._table[v]
            return f"{label}[{' '.join(render(c) for c in kids)}]" if kids else label

        return render(self.root)

    @classmethod
    def parse(cls, text: str) -> "OrderedTree":
        """Inverse of format: `0[1[3] 2]`"""
        text = " ".join(text.split())
        children: Dict[int, Tuple[int, ...]] = {}
        marks: List[int] = []

        def node(pos: int) -> Tuple[int, int]:
            label, marked, pos = _parse_label(text, pos)
            if marked:
                marks.append(label)
            kids: List[int] = []
            if pos < len(text) and text[pos] == "[":
                pos += 1
                while True:
                    child, pos = node(pos)
                    kids.append(child)
                    if pos < len(text) and text[pos] == " ":
                        pos += 1
                        continue
                    if pos < len(text) and text[pos] == "]":
                        pos += 1
                        break
                    raise ValueError(f"Malformed ordered tree '{text}' at offset {pos}")
            children[label] = tuple(kids)
            return label, pos

        root, end = node(0)
        if end != len(text):
            raise ValueError(f"Trailing text in ordered tree '{text}'")
        return cls.from_children(root, children, marks)

    def __str__(self) -> str:
        return self.format()


# Phylogenetic trees

PhyloNode = Union[int, Tuple["PhyloNode", ...]]


def _min_leaf(node: PhyloNode) -> int:
    if isinstance(node, int):
        return node
    return min(_min_leaf(c) for c in node)


def _canonical(node: PhyloNode, flavor: PhyloFlavor) -> PhyloNode:
    if isinstance(node, int):
        return node
    kids = [_canonical(c, flavor) for c in node]
    if flavor == PhyloFlavor.UNORDERED:
        kids.sort(key=_min_leaf)
    elif flavor == PhyloFlavor.CYCLIC:
        start = min(range(len(kids)), key=lambda i: _min_leaf(kids[i]))
        kids = kids[start:] + kids[:start]
    return tuple(kids)


@dataclass(frozen=True)
class PhyloTree:
    """
    Leaf-labeled tree as nested tuples: a leaf is its label, an internal vertex
    the tuple of its children. Unordered children are stored sorted by smallest
    leaf, cyclic children rotated so the child with the smallest leaf comes first.
    """

    shape: PhyloNode
    flavor: PhyloFlavor = PhyloFlavor.UNORDERED

    def __post_init__(self):
        object.__setattr__(self, "flavor", PhyloFlavor(self.flavor))
        object.__setattr__(self, "shape", _canonical(self.shape, self.flavor))
        for node in self._internal_nodes():
            if len(node) < 2:
                raise ValueError("Every internal vertex of a phylogenetic tree needs at least two children")
        leaves = sorted(self.leaf_labels())
        if leaves != list(range(1, len(leaves) + 1)):
            raise ValueError(f"Leaf labels must be exactly 1..{len(leaves)}, got {leaves}")

    def _internal_nodes(self) -> Iterator[Tuple[PhyloNode, ...]]:
        stack = [self.shape]
        while stack:
            node = stack.pop()
            if not isinstance(node, int):
                yield node
                stack.extend(node)

    def leaf_labels(self) -> List[int]:
        out = []
        stack = [self.shape]
        while stack:
            node = stack.pop()
            if isinstance(node, int):
                out.append(node)
            else:
                stack.extend(node)
        return out

    @property
    def size(self) -> int:
        """n for a tree with n+1 leaves"""
        return len(self.leaf_labels()) - 1

    def internal_count(self) -> int:
        return sum(1 for _ in self._internal_nodes())

    def child_counts(self) -> List[int]:
        return sorted(len(node) for node in self._internal_nodes())

    def format(self) -> str:
        cyclic = self.flavor == PhyloFlavor.CYCLIC

        def render(node: PhyloNode) -> str:
            if isinstance(node, int):
                return str(node)
            inner = " ".join(render(c) for c in node)
            return f"<{inner}>" if cyclic else f"({inner})"

        return render(self.shape)

    @classmethod
    def parse(cls, text: str, flavor: PhyloFlavor = PhyloFlavor.UNORDERED) -> "PhyloTree":
        """Inverse of format: `((1 2) 3)`, or `<<1 2> 3>` for cyclic children"""
        tokens = text.replace("(", " ( ").replace(")", " ) ").replace("<", " < ").replace(">", " > ").split()
        closing = {"(": ")", "<": ">"}

        def node(pos: int) -> Tuple[PhyloNode, int]:
            token = tokens[pos]
            if token in closing:
                kids = []
                pos += 1
                while pos < len(tokens) and tokens[pos] != closing[token]:
                    child, pos = node(pos)
                    kids.append(child)
                if pos >= len(tokens):
                    raise ValueError(f"Unbalanced phylogenetic tree '{text}'")
                return tuple(kids), pos + 1
            return int(token), pos + 1

        if not tokens:
            raise ValueError("Empty phylogenetic tree")
        shape, end = node(0)
        if end != len(tokens):
            raise ValueError(f"Trailing text in phylogenetic tree '{text}'")
        return cls(shape, flavor)

    def __str__(self) -> str:
        return self.format()


# Reports

class InterpretationCheck(BaseModel):
    """Brute-force counts for one row set against the triangle they should reproduce"""
    name: str
    params: Dict[str, Union[int, str]] = Field(default_factory=dict)
    rows: List[List[int]] = Field(default_factory=list)
    expected: List[List[int]] = Field(default_factory=list)
    mismatches: List[Tuple[int, int]] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches and len(self.rows) == len(self.expected)
