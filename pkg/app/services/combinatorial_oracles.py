"""
Combinatorial Oracles
Brute-force enumerations of derangements, Stirling words, increasing trees and phylogenetic trees
used as independent cross-checks for the triangle recurrences
"""

from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union
import logging

from sympy import ZZ
from sympy.polys.rings import PolyElement, ring

from app.models.combinatorics import (
    InterpretationCheck,
    OrderedTree,
    PhyloFlavor,
    PhyloNode,
    PhyloTree,
    Slot,
    StirlingWord,
    TernaryTree,
)
from app.models.polynomial import IntPolynomial
from app.services.exceptions import CertificationError, GuardExceededError, UnknownKindError
from app.services.triangle_engine import (
    eulerian_r,
    ordered_phylo_triangle,
    quasi_eulerian,
    stirling_cycle_r,
    stirling_subset_r,
)

logger = logging.getLogger(__name__)

DERANGEMENT_MAX_N = 12
WORD_MAX_LETTERS = 14
TREE_MAX_N = 9
PHYLO_MAX_N = 7
EULERIAN_TREE_MAX_N = 8
EULERIAN_MAX_M = 3

ONE_PLUS_X = IntPolynomial((1, 1))


def _guard(what: str, limit: int, requested: int) -> None:
    if requested > limit:
        raise GuardExceededError(what, limit, requested)


def _padded(poly: IntPolynomial, length: int) -> List[int]:
    return [poly.coefficient(k) for k in range(length)]


# Derangements by cycle count

def iter_derangements(N: int) -> Iterator[Tuple[int, ...]]:
    """Fixed-point-free permutations of [N] in one-line notation"""
    _guard("derangement size", DERANGEMENT_MAX_N, N)
    image = [0] * N
    used = [False] * (N + 1)

    def place(i: int) -> Iterator[Tuple[int, ...]]:
        if i == N:
            yield tuple(image)
            return
        for value in range(1, N + 1):
            if value != i + 1 and not used[value]:
                used[value] = True
                image[i] = value
                yield from place(i + 1)
                used[value] = False

    yield from place(0)


def cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i] - 1
    return cycles


@lru_cache(maxsize=None)
def derangement_cycle_counts(N: int) -> Tuple[int, ...]:
    counts = [0] * (N + 1)
    for perm in iter_derangements(N):
        counts[cycle_count(perm)] += 1
    logger.debug(f"Derangements of [{N}] by cycles: {counts}")
    return tuple(counts)


def count_derangements_by_cycles(N: int, k: int) -> int:
    """Derangements of [N] with exactly k cycles; (n+k, k) gives [n k]^(2)"""
    counts = derangement_cycle_counts(N)
    return counts[k] if 0 <= k <= N else 0


# Stirling words of order r

def stirling_multiset(r: int, n: int) -> List[Tuple[int, int]]:
    """(letter, multiplicity) for letters 1..(r−1)n; multiples of r−1 occur twice"""
    if r < 2:
        raise ValueError(f"Stirling words need order r >= 2, got {r}")
    return [(a, 2 if a % (r - 1) == 0 else 1) for a in range(1, (r - 1) * n + 1)]


def enumerate_stirling_perms(r: int, n: int) -> Iterator[StirlingWord]:
    """
    Stirling permutations of the order-r multiset, streamed.

    Letters are inserted in increasing order, a doubled letter as an adjacent
    pair, which produces each word exactly once.
    """
    letters = stirling_multiset(r, n)
    _guard("Stirling word length r*n", WORD_MAX_LETTERS, r * n)

    def grow(word: Tuple[int, ...], index: int) -> Iterator[Tuple[int, ...]]:
        if index == len(letters):
            yield word
            return
        letter, multiplicity = letters[index]
        block = (letter,) * multiplicity
        for pos in range(len(word) + 1):
            yield from grow(word[:pos] + block + word[pos:], index + 1)

    for word in grow((), 0):
        yield StirlingWord(word)


def _block_start(w: StirlingWord, r: int, i: int, first: Dict[int, int]) -> Optional[int]:
    base = (r - 1) * (i - 1)
    p = first.get(base + 1)
    if p is None or p == 0 or w.letters[p - 1] >= base + 1:
        return None
    end = p + r - 2
    if end >= len(w.letters) or first.get(base + r - 1) != end:
        return None
    if any(w.letters[p + j] != base + 1 + j for j in range(r - 1)):
        return None
    return p


def consecutive_ascents(w: StirlingWord, r: int) -> Set[int]:
    """
    Blocks i ∈ [n] whose letters (r−1)(i−1)+1, …, (r−1)i (first occurrence of
    the last one) appear as one run preceded by a smaller letter. Block 1 starts
    with the letter 1 and never qualifies.
    """
    if r < 2:
        raise ValueError(f"Consecutive ascents need order r >= 2, got {r}")
    n = len(w.letters) // r
    first = w.first_positions()
    return {i for i in range(1, n + 1) if _block_start(w, r, i, first) is not None}


def block_mark_positions(w: StirlingWord, r: int, i: int) -> Tuple[int, ...]:
    """Dot positions for a marked block: one before each of its r−1 ascent ends"""
    p = _block_start(w, r, i, w.first_positions())
    if p is None:
        raise ValueError(f"Block {i} is not a consecutive ascent of {w}")
    return tuple(range(p - 1, p + r - 2))


def iter_marked_words(r: int, n: int, k: Optional[int] = None) -> Iterator[StirlingWord]:
    """Consecutive-ascent-marked words (σ, D); restricted to |D| = k when given"""
    for w in enumerate_stirling_perms(r, n):
        blocks = sorted(consecutive_ascents(w, r))
        sizes = range(len(blocks) + 1) if k is None else [k]
        for size in sizes:
            for D in combinations(blocks, size):
                yield w.with_marks(p for i in D for p in block_mark_positions(w, r, i))


@lru_cache(maxsize=None)
def consecutive_ascent_counts(r: int, n: int) -> Tuple[int, ...]:
    """b_{n,k}: words by number of consecutive ascents, k = 0..n"""
    counts = [0] * (n + 1)
    total = 0
    for w in enumerate_stirling_perms(r, n):
        counts[len(consecutive_ascents(w, r))] += 1
        total += 1
    logger.debug(f"Order-{r} Stirling words of size {n}: {total}, by consecutive ascents {counts}")
    return tuple(counts)


def marked_word_counts(r: int, n: int) -> List[int]:
    """v_{n,k} = Σ_i b_{n,i}·C(i,k) for k = 0..n"""
    b = consecutive_ascent_counts(r, n)
    return [sum(b[i] * comb(i, k) for i in range(k, n + 1)) for k in range(n + 1)]


def count_marked_words(r: int, n: int, k: int, check: bool = True) -> int:
    """
    Number of marked words of order r and size n with k marked blocks.

    With check set, the whole row is compared with [n n−k]^(r) and the
    ascent counts with the quasi-Eulerian row Q_C^(r)(n, ·).
    """
    v = marked_word_counts(r, n)
    if check:
        cycle_row = stirling_cycle_r(r, n).row(n)
        if [v[n - j] for j in range(n + 1)] != cycle_row:
            raise CertificationError(n, "marked words", f"r={r}: {v} against C^({r}) row {cycle_row}")
        quasi_row = quasi_eulerian("cycle", r, n).row(n)
        if list(consecutive_ascent_counts(r, n)) != quasi_row:
            raise CertificationError(n, "consecutive ascents", f"r={r}: against Q_C^({r}) row {quasi_row}")
    return v[k] if 0 <= k <= n else 0


# Increasing trees

def _iter_slot_tables(arity: int, count: int, root_slots: Optional[int] = None) -> Iterator[Tuple[Optional[int], ...]]:
    """
    Increasing trees on vertex indices 0..count−1 rooted at 0, as flat tables
    where entry v·arity+s is the child in slot s of v. root_slots limits the
    slots available at the root.
    """
    table: List[Optional[int]] = [None] * (arity * count)
    root_limit = arity if root_slots is None else root_slots

    def insert(v: int) -> Iterator[Tuple[Optional[int], ...]]:
        if v == count:
            yield tuple(table)
            return
        for slot in range(v * arity):
            if table[slot] is None and (slot >= arity or slot < root_limit):
                table[slot] = v
                yield from insert(v + 1)
                table[slot] = None

    if count:
        yield from insert(1)


def _ternary_from_table(table: Tuple[Optional[int], ...], offset: int) -> TernaryTree:
    children = {}
    for v in range(len(table) // 3):
        kids = table[3 * v: 3 * v + 3]
        children[v + offset] = tuple(None if c is None else c + offset for c in kids)
    return TernaryTree.from_children(offset, children)


def iter_ternary_trees(n: int, primed: bool = False) -> Iterator[TernaryTree]:
    """Increasing ternary trees on [n], or on [n]∪{0} with a single left edge at 0 when primed"""
    _guard("ternary tree size", TREE_MAX_N, n)
    if primed:
        for table in _iter_slot_tables(3, n + 1, root_slots=1):
            yield _ternary_from_table(table, 0)
    elif n == 0:
        yield TernaryTree()
    else:
        for table in _iter_slot_tables(3, n):
            yield _ternary_from_table(table, 1)


def enumerate_increasing_ternary(n: int, primed: bool = False) -> List[int]:
    """Tree counts by number of left edges, k = 0..n"""
    counts = [0] * (n + 1)
    for tree in iter_ternary_trees(n, primed):
        counts[tree.edge_counts()[Slot.LEFT]] += 1
    return counts


def edge_marked_ternary_counts(n: int, primed: bool = True) -> List[int]:
    """
    Trees whose middle and right edges may carry a mark, counted by unmarked
    edges, k = 0..n. Primed counts give [n k]^(2); on [n] the index shifts by one.
    """
    total = IntPolynomial()
    for tree in iter_ternary_trees(n, primed):
        edges = tree.edge_counts()
        weight = IntPolynomial.monomial(edges[Slot.LEFT])
        for _ in range(edges[Slot.MIDDLE] + edges[Slot.RIGHT]):
            weight = weight * ONE_PLUS_X
        total = total + weight
    return _padded(total, n + 1)


def iter_ordered_trees(n: int) -> Iterator[OrderedTree]:
    """Increasing ordered trees on [n]∪{0}"""
    _guard("ordered tree size", TREE_MAX_N, n)
    kids: List[List[int]] = [[] for _ in range(n + 1)]

    def grow(v: int) -> Iterator[OrderedTree]:
        if v > n:
            yield OrderedTree.from_children(0, {u: tuple(c) for u, c in enumerate(kids)})
            return
        for u in range(v):
            for pos in range(len(kids[u]) + 1):
                kids[u].insert(pos, v)
                yield from grow(v + 1)
                kids[u].pop(pos)

    yield from grow(1)


def enumerate_increasing_ordered(n: int) -> List[int]:
    """Tree counts by number of internal vertices, k = 0..n"""
    counts = [0] * (n + 1)
    for tree in iter_ordered_trees(n):
        counts[len(tree.internal_vertices())] += 1
    return counts


def vertex_marked_ordered_counts(n: int) -> List[int]:
    """
    Trees whose leaves other than n may carry a mark, counted by unmarked
    vertices. The leaf n (the root when n = 0) is always marked.
    """
    total = IntPolynomial()
    for tree in iter_ordered_trees(n):
        weight = IntPolynomial.monomial(len(tree.internal_vertices()))
        for _ in range(len(tree.leaves()) - 1):
            weight = weight * ONE_PLUS_X
        total = total + weight
    return _padded(total, n + 1)


# Stirling words and ternary trees

def word_to_ternary(w: StirlingWord) -> TernaryTree:
    """
    Split σ = σ₀ a σ₁ a σ₂ at its smallest letter a and hang σ₀, σ₁, σ₂ as the
    left, middle and right subtrees of a. A dot after the first (second) a
    marks the middle (right) edge.
    """
    letters = w.letters
    occurrences: Dict[int, int] = {}
    for a in letters:
        occurrences[a] = occurrences.get(a, 0) + 1
    if any(count != 2 for count in occurrences.values()) or not w.is_stirling():
        raise ValueError(f"{w} is not a Stirling permutation with every letter doubled")

    children: Dict[int, Tuple[Optional[int], ...]] = {}
    marked: List[int] = []
    marks = set(w.marks)

    def build(lo: int, hi: int) -> Optional[int]:
        if lo == hi:
            return None
        a = min(letters[lo:hi])
        i = letters.index(a, lo, hi)
        j = letters.index(a, i + 1, hi)
        kids = (build(lo, i), build(i + 1, j), build(j + 1, hi))
        children[a] = kids
        if i in marks:
            marked.append(kids[Slot.MIDDLE])
        if j in marks:
            marked.append(kids[Slot.RIGHT])
        return a

    root = build(0, len(letters))
    return TernaryTree.from_children(root, children, marked)


def ternary_to_word(T: TernaryTree) -> StirlingWord:
    letters: List[int] = []
    marks: List[int] = []

    def walk(v: Optional[int]) -> None:
        if v is None:
            return
        left, middle, right = (T.child(v, slot) for slot in Slot)
        walk(left)
        letters.append(v)
        if middle is not None and middle in T.marks:
            marks.append(len(letters) - 1)
        walk(middle)
        letters.append(v)
        if right is not None and right in T.marks:
            marks.append(len(letters) - 1)
        walk(right)

    walk(T.root)
    return StirlingWord(tuple(letters), tuple(marks))


def word_tree(w: Sequence[int]) -> TernaryTree:
    """Tree(w): smallest letter i of w = u i v, with Tree(u) as middle and Tree(v) as right subtree"""
    w = tuple(w)
    if len(set(w)) != len(w):
        raise ValueError(f"Word {w} has repeated letters")
    children: Dict[int, Tuple[Optional[int], ...]] = {}

    def build(lo: int, hi: int) -> Optional[int]:
        if lo == hi:
            return None
        i = min(range(lo, hi), key=lambda p: w[p])
        children[w[i]] = (None, build(lo, i), build(i + 1, hi))
        return w[i]

    return TernaryTree.from_children(build(0, len(w)), children)


def _middle_right_word(T: TernaryTree, v: Optional[int]) -> List[int]:
    if v is None:
        return []
    return _middle_right_word(T, T.child(v, Slot.MIDDLE)) + [v] + _middle_right_word(T, T.child(v, Slot.RIGHT))


def tree_word(T: TernaryTree) -> Tuple[int, ...]:
    """Word(T) = Word(middle)·i·Word(right) for a tree without left edges"""
    if T.edge_counts()[Slot.LEFT]:
        raise ValueError("Word(T) is only defined for trees with middle and right edges")
    return tuple(_middle_right_word(T, T.root))


def lanc(T: TernaryTree, j: int) -> int:
    """First vertex on the path from j to the root entered from below by a left edge"""
    v = j
    while True:
        up = T.parent(v)
        if up is None:
            raise ValueError(f"Vertex {j} has no ancestor reached through a left edge")
        parent, slot = up
        if slot == Slot.LEFT:
            return parent
        v = parent


def left_subtree(T: TernaryTree, i: int) -> TernaryTree:
    """left_T(i): middle-right subtree at the left child of i"""
    return T.subtree(T.child(i, Slot.LEFT), slots=(Slot.MIDDLE, Slot.RIGHT))


def _check_primed(T: TernaryTree) -> None:
    if T.root != 0 or T.child(0, Slot.MIDDLE) is not None or T.child(0, Slot.RIGHT) is not None:
        raise ValueError("Expected a tree rooted at 0 whose only edge at the root is a left edge")
    if not T.is_increasing():
        raise ValueError("Expected an increasing tree")


def phi(T: TernaryTree) -> OrderedTree:
    """ch_{Φ(T)}(j) = Word(left_T(j))"""
    _check_primed(T)
    children = {j: tuple(_middle_right_word(T, T.child(j, Slot.LEFT))) for j in T.vertices()}
    return OrderedTree.from_children(0, children)


def psi(S: OrderedTree) -> TernaryTree:
    """left_{Ψ(S)}(i) = Tree(ch_S(i))"""
    if S.root != 0 or not S.is_increasing():
        raise ValueError("Expected an increasing ordered tree rooted at 0")
    slots: Dict[int, List[Optional[int]]] = {v: [None, None, None] for v in S.vertices()}
    for i in S.vertices():
        kids = S.children(i)
        if not kids:
            continue
        t = word_tree(kids)
        slots[i][Slot.LEFT] = t.root
        for v in t.vertices():
            slots[v][Slot.MIDDLE] = t.child(v, Slot.MIDDLE)
            slots[v][Slot.RIGHT] = t.child(v, Slot.RIGHT)
    return TernaryTree.from_children(0, {v: tuple(s) for v, s in slots.items()})


# Phylogenetic trees

def _insertions(node: PhyloNode, leaf: int, flavor: PhyloFlavor) -> Iterator[PhyloNode]:
    """Every way to add the largest leaf to a canonical tree, each result canonical"""
    yield (node, leaf)
    if flavor == PhyloFlavor.ORDERED:
        yield (leaf, node)
    if isinstance(node, int):
        return
    k = len(node)
    if flavor == PhyloFlavor.UNORDERED:
        yield node + (leaf,)
    elif flavor == PhyloFlavor.ORDERED:
        for pos in range(k + 1):
            yield node[:pos] + (leaf,) + node[pos:]
    else:
        for pos in range(1, k + 1):
            yield node[:pos] + (leaf,) + node[pos:]
    for i, child in enumerate(node):
        for new in _insertions(child, leaf, flavor):
            yield node[:i] + (new,) + node[i + 1:]


def _iter_shapes(n: int, flavor: PhyloFlavor) -> Iterator[PhyloNode]:
    _guard("phylogenetic tree size", PHYLO_MAX_N, n)

    def grow(node: PhyloNode, leaf: int) -> Iterator[PhyloNode]:
        if leaf > n + 1:
            yield node
            return
        for new in _insertions(node, leaf, flavor):
            yield from grow(new, leaf + 1)

    yield from grow(1, 2)


def _child_counts(node: PhyloNode) -> List[int]:
    if isinstance(node, int):
        return []
    out = [len(node)]
    for child in node:
        out.extend(_child_counts(child))
    return out


def iter_phylo_trees(n: int, flavor: PhyloFlavor = PhyloFlavor.UNORDERED) -> Iterator[PhyloTree]:
    """Phylogenetic trees with n+1 labeled leaves"""
    flavor = PhyloFlavor(flavor)
    for shape in _iter_shapes(n, flavor):
        yield PhyloTree(shape, flavor)


def _orderings(child_counts: List[int], flavor: PhyloFlavor) -> int:
    out = 1
    for c in child_counts:
        out *= factorial(c) if flavor == PhyloFlavor.ORDERED else factorial(c - 1)
    return out


def enumerate_phylo(n: int, flavor: PhyloFlavor = PhyloFlavor.UNORDERED, explicit: bool = False) -> List[int]:
    """
    Tree counts by internal vertices, k = 0..n.

    Ordered and cyclic counts are obtained from the unordered trees weighted by
    the number of child orders unless explicit is set.
    """
    flavor = PhyloFlavor(flavor)
    counts = [0] * (n + 1)
    source = flavor if explicit else PhyloFlavor.UNORDERED
    for shape in _iter_shapes(n, source):
        sizes = _child_counts(shape)
        weight = 1 if explicit or flavor == PhyloFlavor.UNORDERED else _orderings(sizes, flavor)
        counts[len(sizes)] += weight
    logger.debug(f"Phylogenetic trees ({flavor.value}) with {n + 1} leaves: {counts}")
    return counts


def ward_ring(n: int):
    names = ",".join(f"x{i}" for i in range(1, max(n, 1) + 1))
    R, *_ = ring(names, ZZ)
    return R


def multivariate_ward(n: int) -> PolyElement:
    """W_n: phylogenetic trees on n+1 leaves, x_{i−1} per internal vertex with i children"""
    R = ward_ring(n)
    terms: Dict[Tuple[int, ...], int] = {}
    for shape in _iter_shapes(n, PhyloFlavor.UNORDERED):
        exponent = [0] * R.ngens
        for c in _child_counts(shape):
            exponent[c - 2] += 1
        key = tuple(exponent)
        terms[key] = terms.get(key, 0) + 1
    return R.from_dict(terms)


WARD_SPECIALIZATIONS: Dict[PhyloFlavor, Callable[[int], int]] = {
    PhyloFlavor.UNORDERED: lambda i: 1,
    PhyloFlavor.CYCLIC: factorial,
    PhyloFlavor.ORDERED: lambda i: factorial(i + 1),
}


def specialize_ward(W: PolyElement, multiplier: Callable[[int], int]) -> IntPolynomial:
    """Substitute x_i = multiplier(i)·x"""
    coeffs: Dict[int, int] = {}
    for monom, coeff in W.terms():
        factor = int(coeff)
        for index, e in enumerate(monom):
            factor *= multiplier(index + 1) ** e
        degree = sum(monom)
        coeffs[degree] = coeffs.get(degree, 0) + factor
    top = max(coeffs) if coeffs else -1
    return IntPolynomial(tuple(coeffs.get(d, 0) for d in range(top + 1)))


def ward_specialization(n: int, flavor: PhyloFlavor) -> IntPolynomial:
    """s_{2,n}, c_{2,n} or d_n from W_n"""
    return specialize_ward(multivariate_ward(n), WARD_SPECIALIZATIONS[PhyloFlavor(flavor)])


# Multivariate Eulerian polynomials

def eulerian_ring(m: int):
    R, *_ = ring(",".join(f"x{i}" for i in range(m + 1)), ZZ)
    return R


def multivariate_eulerian(m: int, n: int) -> PolyElement:
    """
    P_n^(m)(x_0, …, x_m): increasing (m+1)-ary trees on [n]∪{0} whose root has
    a single 0-edge, with x_i per i-edge. P_n = x_0·Q_{n−1}.
    """
    if m < 1:
        raise ValueError(f"Arity parameter m must be at least 1, got {m}")
    _guard("multivariate Eulerian arity m", EULERIAN_MAX_M, m)
    _guard("multivariate Eulerian size", EULERIAN_TREE_MAX_N, n)
    R = eulerian_ring(m)
    if n == 0:
        return R.one
    arity = m + 1
    terms: Dict[Tuple[int, ...], int] = {}
    for table in _iter_slot_tables(arity, n):
        exponent = [0] * arity
        exponent[0] = 1
        for index, c in enumerate(table):
            if c is not None:
                exponent[index % arity] += 1
        key = tuple(exponent)
        terms[key] = terms.get(key, 0) + 1
    return R.from_dict(terms)


def specialize_multivariate(P: PolyElement, values: Sequence[IntPolynomial]) -> IntPolynomial:
    """Substitute polynomials in x for every generator"""
    if len(values) != P.ring.ngens:
        raise ValueError(f"Expected {P.ring.ngens} values, got {len(values)}")
    total = IntPolynomial()
    for monom, coeff in P.terms():
        term = IntPolynomial.constant(int(coeff))
        for value, e in zip(values, monom):
            for _ in range(e):
                term = term * value
        total = total + term
    return total


# Interpretation checks

def compare_rows(name: str, params: Dict[str, Union[int, str]], rows: List[List[int]], expected: List[List[int]]) -> InterpretationCheck:
    mismatches = []
    for n, (got, want) in enumerate(zip(rows, expected)):
        for k in range(max(len(got), len(want))):
            a = got[k] if k < len(got) else 0
            b = want[k] if k < len(want) else 0
            if a != b:
                mismatches.append((n, k))
    check = InterpretationCheck(name=name, params=params, rows=rows, expected=expected, mismatches=mismatches)
    if mismatches:
        logger.warning(f"Interpretation {name} {params}: mismatches at {mismatches[:5]}")
    return check


def second_order_binomial_identity(n_max: int) -> InterpretationCheck:
    """[n n−k]^(2) = Σ_i ⟨⟨n i⟩⟩·C(i,k)"""
    E = eulerian_r(2, n_max)
    C = stirling_cycle_r(2, n_max)
    rows = [[sum(E.entry(n, i) * comb(i, k) for i in range(k, n + 1)) for k in range(n + 1)] for n in range(n_max + 1)]
    expected = [[C.entry(n, n - k) for k in range(n + 1)] for n in range(n_max + 1)]
    return compare_rows("binomial", {"n_max": n_max}, rows, expected)


INTERPRETATIONS = [
    "I", "II", "III", "IV", "V", "r-general", "ward",
    "eulerian-trees", "eulerian-trees-cycle", "eulerian-trees-subset", "binomial",
]


def check_interpretation(
    name: str,
    n_max: int,
    r: int = 2,
    flavor: PhyloFlavor = PhyloFlavor.CYCLIC,
    letters: Optional[int] = None,
    explicit: bool = False,
) -> InterpretationCheck:
    """
    Run one brute-force equivalence for rows 0..n_max.

    I derangements, II marked Stirling words, III edge-marked ternary trees,
    IV vertex-marked ordered trees, V phylogenetic trees of the given flavor,
    r-general consecutive ascents of order r against Q_C^(r). The
    eulerian-trees checks specialize the multivariate Eulerian polynomial to
    the Eulerian, cycle and subset rows.

    For I only the entries (n, k) with n + k <= letters are compared, default
    2·n_max. For V, explicit enumerates ordered and cyclic trees one by one
    instead of weighting the unordered ones.
    """
    if name not in INTERPRETATIONS:
        raise UnknownKindError(name, INTERPRETATIONS)
    flavor = PhyloFlavor(flavor)
    sizes = range(n_max + 1)
    cycle2 = stirling_cycle_r(2, n_max)
    params = {"n_max": n_max}

    if name == "I":
        letters = 2 * n_max if letters is None else letters
        params["letters"] = letters
        widths = [min(n, letters - n) + 1 for n in sizes]
        rows = [[count_derangements_by_cycles(n + k, k) for k in range(w)] for n, w in zip(sizes, widths)]
        expected = [row[:max(w, 0)] for row, w in zip(cycle2.rows, widths)]
        return compare_rows(name, params, rows, expected)
    if name == "II":
        rows = []
        for n in sizes:
            v = marked_word_counts(2, n)
            rows.append([v[n - k] for k in range(n + 1)])
        return compare_rows(name, params, rows, cycle2.rows)
    if name == "III":
        return compare_rows(name, params, [edge_marked_ternary_counts(n) for n in sizes], cycle2.rows)
    if name == "IV":
        return compare_rows(name, params, [vertex_marked_ordered_counts(n) for n in sizes], cycle2.rows)
    if name in ("V", "ward"):
        expected = {
            PhyloFlavor.UNORDERED: stirling_subset_r(2, n_max),
            PhyloFlavor.CYCLIC: cycle2,
            PhyloFlavor.ORDERED: ordered_phylo_triangle(n_max),
        }[flavor]
        params["flavor"] = flavor.value
        if name == "V":
            params["explicit"] = int(explicit)
            rows = [enumerate_phylo(n, flavor, explicit) for n in sizes]
        else:
            rows = [_padded(ward_specialization(n, flavor), n + 1) for n in sizes]
        return compare_rows(name, params, rows, expected.rows)
    if name == "r-general":
        params["r"] = r
        rows = [list(consecutive_ascent_counts(r, n)) for n in sizes]
        check = compare_rows(name, params, rows, quasi_eulerian("cycle", r, n_max).rows)
        C = stirling_cycle_r(r, n_max)
        for n in sizes:
            v = marked_word_counts(r, n)
            for k in range(n + 1):
                if v[n - k] != C.entry(n, k):
                    check.mismatches.append((n, k))
        return check
    if name.startswith("eulerian-trees"):
        x = IntPolynomial.monomial(1)
        one = IntPolynomial.constant(1)
        values, target = {
            "eulerian-trees": ([one, x, x], eulerian_r(2, n_max)),
            "eulerian-trees-cycle": ([x, one + x, one + x], cycle2),
            "eulerian-trees-subset": ([x, x, one + x], stirling_subset_r(2, n_max)),
        }[name]
        rows = [_padded(specialize_multivariate(multivariate_eulerian(2, n), values), n + 1) for n in sizes]
        return compare_rows(name, params, rows, target.rows)
    return second_order_binomial_identity(n_max)
