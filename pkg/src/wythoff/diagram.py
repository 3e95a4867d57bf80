"""Decorated Coxeter diagrams: parsing, classification, orders.

A diagram is a finite simple graph with integer edge labels m >= 3 (absent
edge means m = 2) and a mark on every node: ring (the generating mirror does
not pass through the base point) or cross (it does).  Inline notation covers
path diagrams, e.g. ``x4o3o`` for the cube; branched or disconnected diagrams
use a structured JSON document.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import NotFiniteType, ParseError

RING = 1
CROSS = 0

_MARK_CHARS = {"x": RING, "o": CROSS}
_MARK_NAMES = {"ring": RING, "cross": CROSS}
_INLINE_RE = re.compile(r"^[xo](?:\d+[xo])*$")


@dataclass(frozen=True)
class FamilyTag:
    """Finite reflection family of one connected component.

    family is one of A, B, D, E, F, H, I2; k is the edge label for I2.
    nodes holds the component's node indices in the parent diagram.
    """

    family: str
    rank: int
    k: int | None = None
    nodes: tuple[int, ...] = ()

    def __str__(self):
        if self.family == "I2":
            return "I2(%d)" % self.k
        return "%s%d" % (self.family, self.rank)

    @property
    def order(self) -> int:
        if self.family == "A":
            return math.factorial(self.rank + 1)
        if self.family == "B":
            return (1 << self.rank) * math.factorial(self.rank)
        if self.family == "D":
            return (1 << (self.rank - 1)) * math.factorial(self.rank)
        if self.family == "I2":
            return 2 * self.k
        if self.family == "F":
            return 1152
        if self.family == "H":
            return {3: 120, 4: 14400}[self.rank]
        if self.family == "E":
            return {6: 51840, 7: 2903040, 8: 696729600}[self.rank]
        raise ValueError("unknown family %r" % self.family)


@dataclass(frozen=True)
class DecoratedDiagram:
    """Nodes with ring/cross marks plus labelled edges (m >= 3)."""

    node_ids: tuple[str, ...]
    marks: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    _label: dict = field(init=False, repr=False, compare=False, hash=False)
    _adj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.node_ids)
        if n == 0:
            raise ParseError("diagram needs at least one node")
        if len(set(self.node_ids)) != n:
            raise ParseError("duplicate node ids")
        if len(self.marks) != n or any(m not in (RING, CROSS) for m in self.marks):
            raise ParseError("marks must be ring/cross, one per node")
        seen = set()
        adj = [[] for _ in range(n)]
        label = {}
        for i, j, m in self.edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ParseError("bad edge (%r, %r)" % (i, j))
            if not isinstance(m, int) or m < 3:
                raise ParseError("edge label must be an integer >= 3, got %r" % (m,))
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ParseError("duplicate edge %r" % (key,))
            seen.add(key)
            adj[i].append(j)
            adj[j].append(i)
            label[key] = m
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_label", label)

    @property
    def rank(self) -> int:
        return len(self.node_ids)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def label(self, i: int, j: int) -> int:
        """Coxeter label m(i, j); 2 when no edge, 1 on the diagonal."""
        if i == j:
            return 1
        return self._label.get((min(i, j), max(i, j)), 2)

    def with_marks(self, marks) -> "DecoratedDiagram":
        return DecoratedDiagram(self.node_ids, tuple(int(m) for m in marks), self.edges)

    def induced(self, nodes) -> "DecoratedDiagram":
        """Subdiagram on the given node indices (marks carried along)."""
        keep = sorted(set(int(v) for v in nodes))
        pos = {v: i for i, v in enumerate(keep)}
        edges = tuple(
            (pos[i], pos[j], m)
            for i, j, m in self.edges
            if i in pos and j in pos
        )
        return DecoratedDiagram(
            tuple(self.node_ids[v] for v in keep),
            tuple(self.marks[v] for v in keep),
            edges,
        )

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted index tuples, ordered by minimum."""
        n = self.rank
        seen = [False] * n
        out = []
        for start in range(n):
            if seen[start]:
                continue
            comp, stack = [], [start]
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self._adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            out.append(tuple(sorted(comp)))
        return tuple(out)

    def ringed_nodes(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.marks) if m == RING)


def parse(text: str) -> DecoratedDiagram:
    """Parse inline notation or a structured JSON document.

    Validates that every component is finite-type (raises NotFiniteType
    otherwise) but does not reject decoration degeneracy; that is a
    property of the decoration, tested separately.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty diagram")
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError("bad JSON: %s" % e) from None
        d = diagram_from_document(doc)
    else:
        d = parse_inline(text)
    classify_components(d)
    return d


def parse_inline(text: str) -> DecoratedDiagram:
    """Path diagram from mark/label notation, e.g. ``x4o3o`` or ``x``."""
    if not _INLINE_RE.match(text):
        raise ParseError("bad inline notation %r" % text)
    marks = [_MARK_CHARS[c] for c in text if c in _MARK_CHARS]
    labels = [int(s) for s in re.findall(r"\d+", text)]
    if any(m < 3 for m in labels):
        raise ParseError("inline labels must be >= 3 (2 means no edge)")
    n = len(marks)
    ids = tuple("v%d" % (i + 1) for i in range(n))
    edges = tuple((i, i + 1, labels[i]) for i in range(n - 1))
    return DecoratedDiagram(ids, tuple(marks), edges)


def serialize_inline(d: DecoratedDiagram) -> str:
    """Inverse of parse_inline; requires nodes to form a path in index order."""
    n = d.rank
    want = {(i, i + 1) for i in range(n - 1)}
    have = {(min(i, j), max(i, j)) for i, j, _ in d.edges}
    if want != have:
        raise ParseError("diagram is not a path in node order; use a document")
    out = []
    for i in range(n):
        out.append("x" if d.marks[i] == RING else "o")
        if i + 1 < n:
            out.append(str(d.label(i, i + 1)))
    return "".join(out)


def diagram_from_document(doc: dict) -> DecoratedDiagram:
    """Build a diagram from {"nodes": [...], "edges": [...]}."""
    try:
        nodes = doc["nodes"]
        edges = doc.get("edges", [])
    except (TypeError, KeyError):
        raise ParseError("document must have 'nodes' and 'edges'") from None
    if not isinstance(nodes, list) or not nodes:
        raise ParseError("'nodes' must be a non-empty list")
    ids, marks = [], []
    for item in nodes:
        try:
            ids.append(str(item["id"]))
            marks.append(_MARK_NAMES[item["mark"]])
        except (TypeError, KeyError):
            raise ParseError("node entries need 'id' and 'mark' (ring/cross)") from None
    pos = {v: i for i, v in enumerate(ids)}
    if len(pos) != len(ids):
        raise ParseError("duplicate node ids")
    out_edges = []
    for item in edges:
        try:
            a, b, m = str(item["a"]), str(item["b"]), item["m"]
        except (TypeError, KeyError):
            raise ParseError("edge entries need 'a', 'b', 'm'") from None
        if a not in pos or b not in pos:
            raise ParseError("edge references unknown node %r/%r" % (a, b))
        if not isinstance(m, int):
            raise ParseError("edge label must be an integer")
        out_edges.append((pos[a], pos[b], m))
    d = DecoratedDiagram(tuple(ids), tuple(marks), tuple(out_edges))
    classify_components(d)
    return d


def serialize_document(d: DecoratedDiagram) -> dict:
    return {
        "nodes": [
            {"id": v, "mark": "ring" if m == RING else "cross"}
            for v, m in zip(d.node_ids, d.marks)
        ],
        "edges": [
            {"a": d.node_ids[i], "b": d.node_ids[j], "m": m} for i, j, m in d.edges
        ],
    }


def _classify_path(d, comp, degrees):
    """Family of a path-shaped component, or None."""
    ends = [v for v in comp if degrees[v] <= 1]
    if len(comp) == 1:
        return FamilyTag("A", 1, nodes=tuple(comp))
    if len(ends) != 2:
        return None
    # walk the path collecting labels
    order = [ends[0]]
    prev = None
    while len(order) < len(comp):
        nxt = [w for w in d.neighbors(order[-1]) if w != prev]
        if len(nxt) != 1:
            return None
        prev = order[-1]
        order.append(nxt[0])
    labels = tuple(d.label(order[i], order[i + 1]) for i in range(len(order) - 1))
    nodes = tuple(comp)
    n = len(comp)
    labels = max(labels, labels[::-1])
    if n == 2:
        k = labels[0]
        if k == 3:
            return FamilyTag("A", 2, nodes=nodes)
        return FamilyTag("I2", 2, k=k, nodes=nodes)
    if all(m == 3 for m in labels):
        return FamilyTag("A", n, nodes=nodes)
    if labels == (3, 4, 3):
        return FamilyTag("F", 4, nodes=nodes)
    if labels[0] == 4 and all(m == 3 for m in labels[1:]):
        return FamilyTag("B", n, nodes=nodes)
    if labels[0] == 5 and all(m == 3 for m in labels[1:]) and n in (3, 4):
        return FamilyTag("H", n, nodes=nodes)
    return None


def _classify_tree(d, comp, degrees):
    """Family of a component with one degree-3 branch node, or None."""
    centers = [v for v in comp if degrees[v] == 3]
    if len(centers) != 1 or any(degrees[v] > 3 for v in comp):
        return None
    for i, j, m in d.edges:
        if i in comp and m != 3:
            return None
    c = centers[0]
    lengths = []
    for w in d.neighbors(c):
        ln, prev, cur = 1, c, w
        while True:
            nxt = [u for u in d.neighbors(cur) if u != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
            ln += 1
        lengths.append(ln)
    lengths.sort()
    nodes = tuple(comp)
    n = len(comp)
    if lengths[:2] == [1, 1]:
        return FamilyTag("D", n, nodes=nodes)
    if lengths[0] == 1 and lengths[1] == 2 and lengths[2] in (2, 3, 4):
        return FamilyTag("E", n, nodes=nodes)
    return None


def classify_components(d: DecoratedDiagram) -> tuple[FamilyTag, ...]:
    """One FamilyTag per connected component, or NotFiniteType."""
    degrees = [len(d.neighbors(v)) for v in range(d.rank)]
    tags = []
    for comp in d.components():
        comp_set = set(comp)
        if all(degrees[v] <= 2 for v in comp_set):
            tag = _classify_path(d, comp, degrees)
        else:
            tag = _classify_tree(d, comp_set, degrees)
        if tag is None:
            names = ",".join(d.node_ids[v] for v in comp)
            raise NotFiniteType("component {%s} is not finite-type" % names)
        tags.append(tag)
    return tuple(tags)


def group_order(d: DecoratedDiagram) -> int:
    """Order of the reflection group: product of component family orders."""
    if d.rank == 0:
        return 1
    return math.prod(tag.order for tag in classify_components(d))


def coxeter_matrix(d: DecoratedDiagram) -> np.ndarray:
    n = d.rank
    m = np.full((n, n), 2, dtype=np.int64)
    np.fill_diagonal(m, 1)
    for i, j, lab in d.edges:
        m[i, j] = m[j, i] = lab
    return m


def gram_matrix(d: DecoratedDiagram) -> np.ndarray:
    """Bilinear form B_ij = -cos(pi / m_ij); identity diagonal."""
    return -np.cos(np.pi / coxeter_matrix(d))


def is_positive_definite_gram(d: DecoratedDiagram, tol: float = 1e-9) -> bool:
    """Finite-type test by smallest Gram eigenvalue (> tol)."""
    w = np.linalg.eigvalsh(gram_matrix(d))
    return bool(w[0] > tol)


def canonical_certificate(d: DecoratedDiagram):
    """Hashable form identifying the decorated diagram up to isomorphism.

    All finite-type components are paths or the D/E trees, so a certificate
    is the sorted multiset of per-component canonical (labels, marks) data.
    """
    degrees = [len(d.neighbors(v)) for v in range(d.rank)]
    parts = []
    for tag in classify_components(d):
        comp = tag.nodes
        if tag.family in ("D", "E"):
            c = next(v for v in comp if degrees[v] == 3)
            branches = []
            for w in d.neighbors(c):
                seq, prev, cur = [d.marks[w]], c, w
                while True:
                    nxt = [u for u in d.neighbors(cur) if u != prev]
                    if not nxt:
                        break
                    prev, cur = cur, nxt[0]
                    seq.append(d.marks[cur])
                branches.append(tuple(seq))
            branches.sort(key=lambda b: (len(b), b))
            parts.append((str(tag), d.marks[c], tuple(branches)))
        elif len(comp) == 1:
            parts.append((str(tag), d.marks[comp[0]], ()))
        else:
            ends = [v for v in comp if degrees[v] <= 1]
            order = [ends[0]]
            prev = None
            while len(order) < len(comp):
                nxt = [w for w in d.neighbors(order[-1]) if w != prev]
                prev = order[-1]
                order.append(nxt[0])
            labels = tuple(d.label(order[i], order[i + 1]) for i in range(len(order) - 1))
            marks = tuple(d.marks[v] for v in order)
            fwd = (labels, marks)
            rev = (labels[::-1], marks[::-1])
            parts.append((str(tag),) + min(fwd, rev))
    return tuple(sorted(parts))


def _path(labels, marks, prefix="v"):
    n = len(marks)
    ids = tuple("%s%d" % (prefix, i + 1) for i in range(n))
    edges = tuple((i, i + 1, labels[i]) for i in range(n - 1))
    return DecoratedDiagram(ids, tuple(marks), edges)


def family_diagram(family: str, rank: int, k: int | None = None,
                   ringed=()) -> DecoratedDiagram:
    """Canonical layout of one family with rings at the given node indices.

    Layouts: A/B/F/H are paths (B has its 4 on the first edge, H its 5 on the
    first edge); D is a path v1..v(n-2) with two extra leaves on v(n-2); E is
    a path v1..v(n-1) with one extra leaf on v3.
    """
    ringed = set(ringed)
    marks = [RING if i in ringed else CROSS for i in range(rank)]
    if family == "A":
        return _path([3] * (rank - 1), marks)
    if family == "B":
        if rank < 2:
            raise ValueError("B needs rank >= 2")
        return _path([4] + [3] * (rank - 2), marks)
    if family == "H":
        if rank not in (3, 4):
            raise ValueError("H needs rank 3 or 4")
        return _path([5] + [3] * (rank - 2), marks)
    if family == "F":
        if rank != 4:
            raise ValueError("F needs rank 4")
        return _path([3, 4, 3], marks)
    if family == "I2":
        if rank != 2 or k is None or k < 3:
            raise ValueError("I2 needs rank 2 and a label k >= 3")
        return _path([k], marks)
    ids = tuple("v%d" % (i + 1) for i in range(rank))
    if family == "D":
        if rank < 4:
            raise ValueError("D needs rank >= 4")
        edges = [(i, i + 1, 3) for i in range(rank - 3)]
        edges += [(rank - 3, rank - 2, 3), (rank - 3, rank - 1, 3)]
        return DecoratedDiagram(ids, tuple(marks), tuple(edges))
    if family == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E needs rank 6, 7 or 8")
        edges = [(i, i + 1, 3) for i in range(rank - 2)]
        edges += [(2, rank - 1, 3)]
        return DecoratedDiagram(ids, tuple(marks), tuple(edges))
    raise ValueError("unknown family %r" % family)


def disjoint_union(*parts: DecoratedDiagram) -> DecoratedDiagram:
    """Disjoint union; node ids are suffixed per part to stay unique."""
    ids, marks, edges = [], [], []
    for p, d in enumerate(parts):
        off = len(ids)
        ids.extend("%s.%d" % (v, p) for v in d.node_ids)
        marks.extend(d.marks)
        edges.extend((i + off, j + off, m) for i, j, m in d.edges)
    return DecoratedDiagram(tuple(ids), tuple(marks), tuple(edges))
