"""Finite reflexive graphs, vertex maps between them, and structure checks.

Vertices are opaque string ids, ordered lexicographically for determinism.
Every vertex carries an implicit loop (a degenerate edge); only nondegenerate
edges are stored, as sorted pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

BRUTEFORCE_CAP = 16


class CapExceeded(ValueError):
    """A brute-force enumeration was asked to exceed its configured cap."""


def edge_key(u: str, v: str) -> tuple[str, str]:
    if u == v:
        raise ValueError(f"degenerate edge at {u!r}: loops are implicit, never stored")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ReflexiveGraph:
    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        declared = set(self.vertices)
        if len(declared) != len(self.vertices):
            raise ValueError("duplicate vertex id")
        for u, v in self.edges:
            if u == v or u > v:
                raise ValueError(f"edge {(u, v)!r} is not a sorted nondegenerate pair")
            if u not in declared or v not in declared:
                raise ValueError(f"edge {(u, v)!r} mentions an undeclared vertex")

    @classmethod
    def make(cls, vertices, edges=()) -> "ReflexiveGraph":
        vs = tuple(sorted(str(v) for v in vertices))
        es = frozenset(edge_key(str(u), str(v)) for u, v in edges)
        return cls(vs, es)

    def __len__(self) -> int:
        return len(self.vertices)

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def has_edge(self, u: str, v: str) -> bool:
        """Includes the implicit loops."""
        return u == v or edge_key(u, v) in self.edges

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _adj_masks(self) -> list[int]:
        masks = [0] * len(self.vertices)
        idx = self._index
        for u, v in self.edges:
            masks[idx[u]] |= 1 << idx[v]
            masks[idx[v]] |= 1 << idx[u]
        return masks

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        nbrs: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    def _mask_of(self, subset) -> int:
        idx = self._index
        mask = 0
        for v in subset:
            if v not in idx:
                raise ValueError(f"unknown vertex id {v!r}")
            mask |= 1 << idx[v]
        return mask

    def _mask_connected(self, mask: int) -> bool:
        """Empty and singleton masks count as connected."""
        if mask == 0:
            return True
        adj = self._adj_masks
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            f = frontier
            while f:
                bit = f & -f
                f ^= bit
                nxt |= adj[bit.bit_length() - 1]
            frontier = nxt & mask & ~seen
            seen |= frontier
        return seen == mask

    def _mask_components(self, mask: int) -> list[int]:
        adj = self._adj_masks
        comps = []
        rest = mask
        while rest:
            start = rest & -rest
            seen = start
            frontier = start
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    bit = f & -f
                    f ^= bit
                    nxt |= adj[bit.bit_length() - 1]
                frontier = nxt & mask & ~seen
                seen |= frontier
            comps.append(seen)
            rest &= ~seen
        return comps

    def _mask_vertices(self, mask: int) -> list[str]:
        out = []
        while mask:
            bit = mask & -mask
            mask ^= bit
            out.append(self.vertices[bit.bit_length() - 1])
        return out

    def is_connected(self) -> bool:
        return self._mask_connected((1 << len(self.vertices)) - 1)


@dataclass(frozen=True)
class RootedGraph:
    graph: ReflexiveGraph
    root: str

    def __post_init__(self):
        if not self.graph.has_vertex(self.root):
            raise ValueError(f"root {self.root!r} is not a vertex")


@dataclass(frozen=True, eq=True)
class GraphMorphism:
    dom: ReflexiveGraph
    cod: ReflexiveGraph
    mapping: dict[str, str]

    def __post_init__(self):
        missing = [v for v in self.dom.vertices if v not in self.mapping]
        if missing:
            raise ValueError(f"map undefined on {missing[:3]!r}")
        extra = [v for v in self.mapping if not self.dom.has_vertex(v)]
        if extra:
            raise ValueError(f"map defined on non-vertices {extra[:3]!r}")
        bad = [w for w in self.mapping.values() if not self.cod.has_vertex(w)]
        if bad:
            raise ValueError(f"image {bad[:3]!r} is not in the codomain")

    def __call__(self, v: str) -> str:
        return self.mapping[v]

    def __hash__(self):
        return hash((self.dom, self.cod, tuple(sorted(self.mapping.items()))))

    @cached_property
    def _fiber_masks(self) -> dict[str, int]:
        """Preimage of each codomain vertex as a domain bitmask."""
        fibers = {v: 0 for v in self.cod.vertices}
        idx = self.dom._index
        for x, y in self.mapping.items():
            fibers[y] |= 1 << idx[x]
        return fibers

    def fiber(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(self.dom._mask_vertices(self._fiber_masks[v])))

    def image_vertices(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.mapping.values())))


def identity(g: ReflexiveGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.vertices})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """Pointwise composition f o g (g applied first)."""
    if g.cod != f.dom:
        raise ValueError("compose: cod(g) != dom(f)")
    return GraphMorphism(g.dom, f.cod, {x: f.mapping[g.mapping[x]] for x in g.dom.vertices})


def is_homomorphism(m: GraphMorphism) -> bool:
    """Edges map to edges, degenerate collapses allowed."""
    f = m.mapping
    for u, v in m.dom.edges:
        if not m.cod.has_edge(f[u], f[v]):
            return False
    return True


def is_epimorphism(m: GraphMorphism) -> bool:
    """Homomorphism surjective on vertices and on nondegenerate edges."""
    if not is_homomorphism(m):
        return False
    if set(m.mapping.values()) != set(m.cod.vertices):
        return False
    f = m.mapping
    hit = set()
    for u, v in m.dom.edges:
        if f[u] != f[v]:
            hit.add(edge_key(f[u], f[v]))
    return hit == set(m.cod.edges)


def is_tree(g: ReflexiveGraph) -> bool:
    """Connected and acyclic, loops ignored."""
    if len(g.vertices) == 0:
        return False
    return len(g.edges) == len(g.vertices) - 1 and g.is_connected()


def connected_components(g: ReflexiveGraph, subset) -> list[tuple[str, ...]]:
    """Partition of subset into classes connected within the induced subgraph."""
    mask = g._mask_of(subset)
    comps = [tuple(sorted(g._mask_vertices(c))) for c in g._mask_components(mask)]
    return sorted(comps)


def _require_homomorphism(m: GraphMorphism) -> None:
    if not is_homomorphism(m):
        raise ValueError("property check requires a graph homomorphism")


def _connected_subset_masks(g: ReflexiveGraph, cap: int):
    n = len(g.vertices)
    if n > cap:
        raise CapExceeded(f"{n} codomain vertices exceed the brute-force cap {cap}")
    for mask in range(1, 1 << n):
        if g._mask_connected(mask):
            yield mask


def _preimage_mask(m: GraphMorphism, cod_mask: int) -> int:
    fibers = m._fiber_masks
    verts = m.cod.vertices
    pm = 0
    while cod_mask:
        bit = cod_mask & -cod_mask
        cod_mask ^= bit
        pm |= fibers[verts[bit.bit_length() - 1]]
    return pm


def _linkable_pairs(m: GraphMorphism) -> list[tuple[str, str]]:
    """Image-vertex pairs joinable in the codomain without touching a third image vertex.

    For vertex-surjective maps these are exactly the codomain edges; interior
    non-image vertices otherwise act as invisible corridors that a preimage of
    a connected set may have to bridge.
    """
    cod = m.cod
    image = set(m.mapping.values())
    img_sorted = sorted(image)
    if len(image) == len(cod.vertices):
        return sorted(set(cod.edges))
    pairs = []
    idx = cod._index
    interior = 0
    for v in cod.vertices:
        if v not in image:
            interior |= 1 << idx[v]
    for i, u in enumerate(img_sorted):
        for v in img_sorted[i + 1 :]:
            allowed = interior | (1 << idx[u]) | (1 << idx[v])
            # BFS from u within allowed, looking for v
            seen = 1 << idx[u]
            frontier = seen
            target = 1 << idx[v]
            while frontier and not (seen & target):
                nxt = 0
                f = frontier
                while f:
                    bit = f & -f
                    f ^= bit
                    nxt |= cod._adj_masks[bit.bit_length() - 1]
                frontier = nxt & allowed & ~seen
                seen |= frontier
            if seen & target:
                pairs.append((u, v))
    return pairs


def is_monotone(m: GraphMorphism, method: str = "fiber", cap: int = BRUTEFORCE_CAP) -> bool:
    """Preimages of connected vertex sets induce connected subgraphs."""
    _require_homomorphism(m)
    dom = m.dom
    if method == "fiber":
        fibers = m._fiber_masks
        for v in m.image_vertices():
            if not dom._mask_connected(fibers[v]):
                return False
        for u, v in _linkable_pairs(m):
            if not dom._mask_connected(fibers[u] | fibers[v]):
                return False
        return True
    if method == "bruteforce":
        for qmask in _connected_subset_masks(m.cod, cap):
            if not dom._mask_connected(_preimage_mask(m, qmask)):
                return False
        return True
    raise ValueError(f"unknown method {method!r}")


def is_confluent(m: GraphMorphism, method: str = "edge", cap: int = BRUTEFORCE_CAP) -> bool:
    """Every component of the preimage of a connected set maps onto it."""
    _require_homomorphism(m)
    dom = m.dom
    f = m.mapping
    if method == "edge":
        fibers = m._fiber_masks
        for a, b in sorted(m.cod.edges):
            pm = fibers[a] | fibers[b]
            for comp in dom._mask_components(pm):
                img = {f[x] for x in dom._mask_vertices(comp)}
                if img != {a, b}:
                    return False
        return True
    if method == "bruteforce":
        cod_idx = m.cod._index
        for qmask in _connected_subset_masks(m.cod, cap):
            pm = _preimage_mask(m, qmask)
            for comp in dom._mask_components(pm):
                img = 0
                for x in dom._mask_vertices(comp):
                    img |= 1 << cod_idx[f[x]]
                if img != qmask:
                    return False
        return True
    raise ValueError(f"unknown method {method!r}")


# --- serialization ---------------------------------------------------------


def graph_to_json(g: ReflexiveGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in sorted(g.edges)],
    }


def graph_from_json(data: dict) -> ReflexiveGraph:
    return ReflexiveGraph.make(data["vertices"], data.get("edges", []))


def morphism_to_json(m: GraphMorphism) -> dict:
    return {
        "dom": graph_to_json(m.dom),
        "cod": graph_to_json(m.cod),
        "map": {u: m.mapping[u] for u in m.dom.vertices},
    }


def morphism_from_json(data: dict) -> GraphMorphism:
    return GraphMorphism(
        graph_from_json(data["dom"]),
        graph_from_json(data["cod"]),
        dict(data["map"]),
    )


def graph_to_dot(g: ReflexiveGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for u, v in sorted(g.edges):
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
