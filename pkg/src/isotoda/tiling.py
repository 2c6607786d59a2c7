"""
The permutohedral subdivision of the torus and its dual simplicial poset.

A face of the subdivision is written as a pair (k, (B_1, ..., B_{j+1}))
of a top cell index k in Z/n and an ordered set partition of [n]. The
pair describes the face of the permutohedron P_k given by the chain
B_1 < B_1 u B_2 < ... and two pairs describe the same face of the torus
exactly when one is a cyclic block rotation of the other:

    (k, (B_1, ..., B_{j+1})) ~ (k + |B_1| mod n, (B_2, ..., B_{j+1}, B_1)).

Each class is stored through its lexicographically least rotation.
Faces of the top cells, their incidences and containing cells are all
derived from this rule and are checked against the closed formula
n (k-1)! S(n, k) for the number of faces of dimension n - k.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

import networkx as nx
from sympy import Matrix
from sympy.functions.combinatorial.numbers import stirling

from .exceptions import CapExceededError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_COMPLEX_CAP = 8
MAX_STATS_N = 20

Blocks = Tuple[Tuple[int, ...], ...]
FaceKey = Tuple[int, Blocks]


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k).

    Raises:
        ValidationError: Unless 0 <= k <= n.
    """
    if not 0 <= k <= n:
        raise ValidationError(f"stirling2 requires 0 <= k <= n (got n={n}, k={k})")
    return int(stirling(n, k, kind=2))


# -- lattices ---------------------------------------------------------------

def _gram_det(vectors: List[Tuple[int, ...]]) -> int:
    gram = Matrix([[sum(x * y for x, y in zip(u, v)) for v in vectors] for u in vectors])
    return int(gram.det())


def _in_N(v: Tuple[int, ...], n: int) -> bool:
    return sum(v) == 0 and all((x - v[0]) % n == 0 for x in v)


@dataclass(frozen=True)
class Lattices:
    """Generators of N and of the sublattice N' inside Z^n."""
    n: int
    alpha: Tuple[Tuple[int, ...], ...]
    beta: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_n(cls, n: int) -> 'Lattices':
        if n < 3:
            raise ValidationError("n must be at least 3")
        alpha = tuple(
            tuple(n - 1 if j == i else -1 for j in range(n)) for i in range(n)
        )
        beta = tuple(
            tuple(x - y for x, y in zip(alpha[k], alpha[k + 1])) for k in range(n - 1)
        )
        return cls(n=n, alpha=alpha, beta=beta)

    def index(self) -> int:
        """[N : N'] from the ratio of Gram determinants."""
        covolume_n = _gram_det(list(self.alpha[:-1]))
        covolume_sub = _gram_det(list(self.beta))
        if covolume_n == 0 or covolume_sub % covolume_n:
            raise ValidationError("N' is not a full-rank sublattice of N")
        ratio = covolume_sub // covolume_n
        root = math.isqrt(ratio)
        if root * root != ratio:
            raise ValidationError("index of N' in N is not an integer")
        return root

    def check(self) -> List[str]:
        """List every violated lattice invariant."""
        n = self.n
        violations = []
        if any(sum(column) != 0 for column in zip(*self.alpha)):
            violations.append("alpha vectors do not sum to zero")
        if not all(_in_N(v, n) for v in self.alpha + self.beta):
            violations.append("a generator lies outside N")
        reference = _gram_det(list(self.alpha[:-1]))
        for omitted in range(n):
            subset = [v for i, v in enumerate(self.alpha) if i != omitted]
            if _gram_det(subset) != reference:
                violations.append(f"alphas without alpha_{omitted + 1} do not generate N")
        if self.index() != n:
            violations.append(f"index of N' in N is {self.index()}, expected {n}")
        return violations


# -- faces ------------------------------------------------------------------

def ordered_set_partitions(n: int) -> List[Blocks]:
    """All ordered set partitions of {1, ..., n}, blocks sorted internally."""
    partitions: List[Blocks] = [()]
    for element in range(1, n + 1):
        grown: List[Blocks] = []
        for blocks in partitions:
            for i, block in enumerate(blocks):
                grown.append(blocks[:i] + (block + (element,),) + blocks[i + 1:])
            for i in range(len(blocks) + 1):
                grown.append(blocks[:i] + ((element,),) + blocks[i:])
        partitions = grown
    return partitions


def rotations(face: FaceKey, n: int) -> Iterator[FaceKey]:
    """All cyclic block rotations of a face representative."""
    k, blocks = face
    offset = 0
    for r in range(len(blocks)):
        yield ((k + offset) % n, blocks[r:] + blocks[:r])
        offset += len(blocks[r])


def canonical(face: FaceKey, n: int) -> FaceKey:
    return min(rotations(face, n))


def containing_cells(face: FaceKey, n: int) -> Tuple[int, ...]:
    """Top cells P_k whose boundary contains the face."""
    k, blocks = face
    cells = []
    offset = 0
    for block in blocks:
        cells.append((k + offset) % n)
        offset += len(block)
    return tuple(sorted(cells))


@dataclass
class WonderfulComplex:
    """Face poset of the subdivision with its covering relation."""
    n: int
    faces: List[FaceKey]
    dims: List[int]
    upper: List[List[int]]
    cells: List[Tuple[int, ...]]
    _index: Dict[FaceKey, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {face: i for i, face in enumerate(self.faces)}

    def index_of(self, face: FaceKey) -> int:
        return self._index[canonical(face, self.n)]

    def f_vector(self) -> List[int]:
        """Number of faces in each dimension 0..n-1."""
        counts = [0] * self.n
        for d in self.dims:
            counts[d] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * f for d, f in enumerate(self.f_vector()))

    def lower(self) -> List[List[int]]:
        """Lower covers of every face."""
        lower: List[List[int]] = [[] for _ in self.faces]
        for i, uppers in enumerate(self.upper):
            for j in uppers:
                lower[j].append(i)
        return lower

    def covers(self) -> List[Tuple[int, int]]:
        """Covering pairs (lower face, upper face)."""
        return [(i, j) for i, uppers in enumerate(self.upper) for j in uppers]

    def cover_graph(self) -> nx.DiGraph:
        """Hasse diagram with edges pointing from a face to its upper covers."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.faces)))
        graph.add_edges_from(self.covers())
        return graph

    def skeleton_graph(self) -> nx.Graph:
        """The 1-skeleton as an undirected graph on vertex indices."""
        vertices, edges = self.one_skeleton()
        graph = nx.Graph()
        graph.add_nodes_from(vertices)
        graph.add_edges_from(edges)
        return graph

    def top_cells(self) -> List[int]:
        return [i for i, d in enumerate(self.dims) if d == self.n - 1]

    def one_skeleton(self) -> Tuple[List[int], List[Tuple[int, int]]]:
        """Vertices and edges (as vertex index pairs) of the subdivision."""
        vertices = [i for i, d in enumerate(self.dims) if d == 0]
        lower = self.lower()
        edges = []
        for i, d in enumerate(self.dims):
            if d == 1:
                ends = sorted(lower[i])
                if len(ends) == 2:
                    edges.append((ends[0], ends[1]))
        return vertices, edges

    def gluing_pairs(self) -> List[Tuple[int, FrozenSet[int], int, FrozenSet[int]]]:
        """Facet identifications (k, S, m, complement of S) with m = k + |S| mod n."""
        pairs = []
        for face, d in zip(self.faces, self.dims):
            if d != self.n - 2:
                continue
            k, (first, second) = face
            pairs.append((k, frozenset(first), (k + len(first)) % self.n, frozenset(second)))
        return pairs


def build_complex(n: int, cap: int = DEFAULT_COMPLEX_CAP) -> WonderfulComplex:
    """Enumerate every face class of the subdivision of the (n-1)-torus.

    Raises:
        ValidationError: If n < 3.
        CapExceededError: If n exceeds ``cap``.
    """
    if n < 3:
        raise ValidationError("n must be at least 3")
    if n > cap:
        raise CapExceededError(f"n = {n} exceeds the complex size cap {cap}")

    partitions = ordered_set_partitions(n)
    classes: Set[FaceKey] = set()
    for k in range(n):
        for blocks in partitions:
            classes.add(canonical((k, blocks), n))

    faces = sorted(classes, key=lambda face: (n - len(face[1]), face))
    index = {face: i for i, face in enumerate(faces)}
    dims = [n - len(blocks) for _, blocks in faces]

    upper: List[List[int]] = []
    for face in faces:
        covers: List[int] = []
        if len(face[1]) > 1:
            for k, blocks in rotations(face, n):
                merged = tuple(sorted(blocks[0] + blocks[1]))
                covers.append(index[canonical((k, (merged,) + blocks[2:]), n)])
        upper.append(sorted(set(covers)))

    cells = [containing_cells(face, n) for face in faces]
    logger.debug("built subdivision for n=%d with %d faces", n, len(faces))
    return WonderfulComplex(n=n, faces=faces, dims=dims, upper=upper, cells=cells,
                            _index=index)


def bipartition(vertices: List[int],
                edges: List[Tuple[int, int]]) -> Optional[Tuple[Set[int], Set[int]]]:
    """Two-colouring of a graph, or None if it has an odd cycle."""
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from(edges)
    if not nx.is_bipartite(graph):
        return None
    colour = nx.bipartite.color(graph)
    return ({v for v, c in colour.items() if c == 0},
            {v for v, c in colour.items() if c == 1})


def poset_to_dict(c: WonderfulComplex) -> dict:
    """JSON-ready dump of faces and covering pairs."""
    return {
        'n': c.n,
        'faces': [
            {'k': k, 'partition': [list(block) for block in blocks], 'dim': d}
            for (k, blocks), d in zip(c.faces, c.dims)
        ],
        'covers': [list(pair) for pair in c.covers()],
    }


# -- crystallization check --------------------------------------------------

@dataclass
class CrystallizationReport:
    """Outcome of the simplicial poset checks on the dual of a subdivision."""
    vertex_count: int
    dimension: int
    pure: bool
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _tops_by_incidence(c: WonderfulComplex) -> List[FrozenSet[int]]:
    tops: List[FrozenSet[int]] = [frozenset()] * len(c.faces)
    for i in sorted(range(len(c.faces)), key=lambda i: -c.dims[i]):
        if not c.upper[i]:
            tops[i] = frozenset([i]) if c.dims[i] == c.n - 1 else frozenset()
        else:
            tops[i] = frozenset().union(*(tops[j] for j in c.upper[i]))
    return tops


def verify_crystallization(c: WonderfulComplex) -> CrystallizationReport:
    """Check that the dual of the subdivision is a minimal simplicial poset.

    The dual must have exactly n vertices (the top cells), be pure of
    dimension n-1, and each face's upper interval must be Boolean: the
    faces above a codimension-j face correspond one to one with the
    non-empty subsets of its j+1 containing top cells. The 1-skeleton of
    the subdivision must also be connected.
    """
    violations: List[str] = []
    top = c.top_cells()
    if len(top) != c.n:
        violations.append(f"dual has {len(top)} vertices, expected {c.n}")

    maximal = [i for i, ups in enumerate(c.upper) if not ups]
    pure = all(c.dims[i] == c.n - 1 for i in maximal)
    if not pure:
        violations.append("some maximal face is not top-dimensional")

    skeleton = c.skeleton_graph()
    if skeleton.number_of_nodes() and not nx.is_connected(skeleton):
        components = nx.number_connected_components(skeleton)
        violations.append(f"1-skeleton has {components} connected components, expected 1")

    hasse = c.cover_graph()
    tops = _tops_by_incidence(c)
    top_cell_of = {i: c.faces[i][0] for i in top}
    for i, face in enumerate(c.faces):
        codim = c.n - 1 - c.dims[i]
        if len(tops[i]) != codim + 1:
            violations.append(
                f"face {face} lies in {len(tops[i])} top cells, expected {codim + 1}"
            )
            continue
        if tuple(sorted(top_cell_of[t] for t in tops[i])) != c.cells[i]:
            violations.append(f"face {face}: incidence disagrees with containing cells")

        above = nx.descendants(hasse, i) | {i}
        labels = {tops[j] for j in above}
        if len(labels) != len(above) or len(above) != 2 ** (codim + 1) - 1:
            violations.append(f"upper interval of face {face} is not Boolean")

    return CrystallizationReport(
        vertex_count=len(top), dimension=c.n - 1, pure=pure, violations=violations,
    )


# -- f-, h-, h'- and h''-numbers ---------------------------------------------

@dataclass(frozen=True)
class SimplicialStats:
    """Face numbers of the dual simplicial poset and their transforms."""
    n: int
    f: Tuple[int, ...]
    h: Tuple[int, ...]
    h_prime: Tuple[int, ...]
    h_pp: Tuple[int, ...]
    betti_tilde: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'f': list(self.f),
            'h': list(self.h),
            'h_prime': list(self.h_prime),
            'h_pp': list(self.h_pp),
            'betti_tilde': list(self.betti_tilde),
        }


def dual_f_vector(n: int) -> List[int]:
    """f_{-1}, f_0, ..., f_{n-1} with f_{k-1} = n (k-1)! S(n, k)."""
    return [1] + [n * math.factorial(k - 1) * stirling2(n, k) for k in range(1, n + 1)]


def h_from_f(f: List[int]) -> List[int]:
    """h-numbers from sum h_j t^{n-j} = sum f_{j-1} (t-1)^{n-j}."""
    n = len(f) - 1
    return [
        sum((-1) ** (j - i) * math.comb(n - i, j - i) * f[i] for i in range(j + 1))
        for j in range(n + 1)
    ]


def dual_poset_stats(n: int) -> SimplicialStats:
    """f, h, h' and h'' numbers of the dual of the subdivision of the (n-1)-torus."""
    if not 3 <= n <= MAX_STATS_N:
        raise ValidationError(f"n must be between 3 and {MAX_STATS_N}")

    f = dual_f_vector(n)
    h = h_from_f(f)
    betti_tilde = [0] + [math.comb(n - 1, j) for j in range(1, n)]

    def reduced(j: int) -> int:
        return betti_tilde[j] if 0 <= j < len(betti_tilde) else 0

    h_prime = [
        h[j] + math.comb(n, j) * sum(
            (-1) ** (j - s - 1) * reduced(s - 1) for s in range(1, j)
        )
        for j in range(n + 1)
    ]
    h_pp = [h_prime[j] - math.comb(n, j) * reduced(j - 1) for j in range(n)] + [h_prime[n]]

    return SimplicialStats(
        n=n, f=tuple(f), h=tuple(h), h_prime=tuple(h_prime), h_pp=tuple(h_pp),
        betti_tilde=tuple(betti_tilde),
    )


def h_closed_form(n: int) -> List[int]:
    """h-numbers from the explicit Stirling-number expression."""
    return [
        (-1) ** l * math.comb(n, n - l) + sum(
            (-1) ** (l - k) * math.comb(n - k, n - l) * n * math.factorial(k - 1)
            * stirling2(n, k)
            for k in range(1, l + 1)
        )
        for l in range(n + 1)
    ]


def facets_of_cell(n: int, k: int) -> List[Tuple[FrozenSet[int], FaceKey]]:
    """The 2^n - 2 facets F_S of the top cell P_k with their face classes."""
    elements = range(1, n + 1)
    facets = []
    for size in range(1, n):
        for subset in combinations(elements, size):
            rest = tuple(e for e in elements if e not in subset)
            facets.append((frozenset(subset), canonical((k, (subset, rest)), n)))
    return facets
