"""Finite posets as cover relations: lattice diagnostics, tries, chain-word labelings."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .graphs import ReflexiveGraph, edge_key
from .words import prefix_id


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class FinitePoset:
    """Elements plus the covering relation; (a, b) in covers means a <. b."""

    elements: tuple[str, ...]
    covers: frozenset[tuple[str, str]]

    def __post_init__(self):
        declared = set(self.elements)
        if len(declared) != len(self.elements):
            raise PosetError("duplicate element id")
        for a, b in self.covers:
            if a == b or a not in declared or b not in declared:
                raise PosetError(f"bad cover pair {(a, b)!r}")
        below = self.below  # also detects cycles
        for a, b in self.covers:
            for c in below[b]:
                if c != a and a in self.below[c]:
                    raise PosetError(f"cover {(a, b)!r} is implied by {a!r} < {c!r} < {b!r}")

    @classmethod
    def make(cls, elements, covers=()) -> "FinitePoset":
        return cls(tuple(sorted(str(e) for e in elements)),
                   frozenset((str(a), str(b)) for a, b in covers))

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def down(self) -> dict[str, tuple[str, ...]]:
        """Elements covered by each element."""
        d: dict[str, list[str]] = {e: [] for e in self.elements}
        for a, b in self.covers:
            d[b].append(a)
        return {e: tuple(sorted(v)) for e, v in d.items()}

    @cached_property
    def up(self) -> dict[str, tuple[str, ...]]:
        u: dict[str, list[str]] = {e: [] for e in self.elements}
        for a, b in self.covers:
            u[a].append(b)
        return {e: tuple(sorted(v)) for e, v in u.items()}

    @cached_property
    def below(self) -> dict[str, frozenset[str]]:
        """Strict down-sets, computed along a topological order of the cover DAG."""
        indeg = {e: 0 for e in self.elements}
        for a, b in self.covers:
            indeg[b] += 1
        order = sorted(e for e in self.elements if indeg[e] == 0)
        queue = list(order)
        below: dict[str, set[str]] = {}
        seen = 0
        while queue:
            e = queue.pop(0)
            seen += 1
            acc: set[str] = set()
            for a in self.down[e]:
                acc.add(a)
                acc |= below[a]
            below[e] = acc
            for b in self.up[e]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
        if seen != len(self.elements):
            raise PosetError("cover relation contains a cycle")
        return {e: frozenset(s) for e, s in below.items()}

    def leq(self, a: str, b: str) -> bool:
        return a == b or a in self.below[b]

    def minimal_elements(self) -> tuple[str, ...]:
        targets = {b for _, b in self.covers}
        return tuple(e for e in self.elements if e not in targets)

    def maximal_elements(self) -> tuple[str, ...]:
        sources = {a for a, _ in self.covers}
        return tuple(e for e in self.elements if e not in sources)


def from_relation(elements, leq) -> FinitePoset:
    """Build a poset from a verified order predicate; covers are the transitive reduction."""
    items = sorted((str(e), e) for e in elements)
    if len({i for i, _ in items}) != len(items):
        raise PosetError("element ids collide under str()")
    for i, x in items:
        if not leq(x, x):
            raise PosetError(f"relation is not reflexive at {i!r}")
    rel: dict[tuple[str, str], bool] = {}
    for i, x in items:
        for j, y in items:
            rel[i, j] = bool(leq(x, y))
    for i, _ in items:
        for j, _ in items:
            if i != j and rel[i, j] and rel[j, i]:
                raise PosetError(f"relation is not antisymmetric on ({i!r}, {j!r})")
    ids = [i for i, _ in items]
    for i in ids:
        for j in ids:
            if not rel[i, j]:
                continue
            for k in ids:
                if rel[j, k] and not rel[i, k]:
                    raise PosetError(f"relation is not transitive on ({i!r}, {j!r}, {k!r})")
    covers = []
    for i in ids:
        for j in ids:
            if i == j or not rel[i, j]:
                continue
            if any(k != i and k != j and rel[i, k] and rel[k, j] for k in ids):
                continue
            covers.append((i, j))
    return FinitePoset(tuple(ids), frozenset(covers))


def hasse_graph(p: FinitePoset) -> ReflexiveGraph:
    return ReflexiveGraph(p.elements, frozenset(edge_key(a, b) for a, b in p.covers))


def maximal_chains(p: FinitePoset) -> list[tuple[str, ...]]:
    """All maximal chains, top to bottom, in lexicographic traversal order."""
    chains: list[tuple[str, ...]] = []
    down = p.down

    def descend(chain: list[str]) -> None:
        lower = down[chain[-1]]
        if not lower:
            chains.append(tuple(chain))
            return
        for nxt in lower:
            chain.append(nxt)
            descend(chain)
            chain.pop()

    for top in sorted(p.maximal_elements()):
        descend([top])
    return chains


@dataclass
class LatticeProfile:
    is_lattice: bool
    meet: dict[tuple[str, str], str] | None
    join: dict[tuple[str, str], str] | None
    lattice_witness: tuple[str, str, str] | None  # (kind, a, b)
    is_distributive: bool | None
    distributive_witness: tuple[str, str, str] | None
    is_graded: bool
    rank: dict[str, int] | None
    graded_witness: tuple[str, str] | None  # offending cover


def _bound_table(p: FinitePoset, kind: str):
    """All-pairs meet or join; returns (table, witness_pair)."""
    els = p.elements
    if kind == "meet":
        sets = {e: p.below[e] | {e} for e in els}
        beats = p.leq  # the bound must dominate every common lower bound
    else:
        sets = {e: frozenset(x for x in els if p.leq(e, x)) | {e} for e in els}
        beats = lambda x, c: p.leq(c, x)
    table: dict[tuple[str, str], str] = {}
    for i, a in enumerate(els):
        for b in els[i:]:
            common = sets[a] & sets[b]
            best = None
            for c in common:
                if all(beats(x, c) for x in common):
                    best = c
                    break
            if best is None:
                return None, (a, b)
            table[a, b] = best
            table[b, a] = best
    return table, None


def _rank_function(p: FinitePoset):
    """A cover-compatible rank per weakly connected component, or an offending cover."""
    rank: dict[str, int] = {}
    neighbors: dict[str, list[tuple[str, int]]] = {e: [] for e in p.elements}
    for a, b in p.covers:
        neighbors[a].append((b, +1))
        neighbors[b].append((a, -1))
    for start in p.elements:
        if start in rank:
            continue
        rank[start] = 0
        queue = [start]
        comp = [start]
        while queue:
            e = queue.pop(0)
            for other, step in neighbors[e]:
                want = rank[e] + step
                if other not in rank:
                    rank[other] = want
                    queue.append(other)
                    comp.append(other)
                elif rank[other] != want:
                    bad = (e, other) if step == +1 else (other, e)
                    return None, bad
        low = min(rank[e] for e in comp)
        for e in comp:
            rank[e] -= low
    return rank, None


def lattice_profile(p: FinitePoset) -> LatticeProfile:
    meet, w1 = _bound_table(p, "meet")
    join, w2 = _bound_table(p, "join")
    is_lattice = meet is not None and join is not None
    witness = None
    if not is_lattice:
        if meet is None:
            witness = ("meet", *w1)
        else:
            witness = ("join", *w2)
    is_distr = None
    distr_witness = None
    if is_lattice:
        is_distr = True
        els = p.elements
        for x in els:
            for y in els:
                for z in els:
                    if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
                        is_distr = False
                        distr_witness = (x, y, z)
                        break
                if distr_witness:
                    break
            if distr_witness:
                break
    rank, bad_cover = _rank_function(p)
    return LatticeProfile(
        is_lattice=is_lattice,
        meet=meet,
        join=join,
        lattice_witness=witness,
        is_distributive=is_distr,
        distributive_witness=distr_witness,
        is_graded=rank is not None,
        rank=rank,
        graded_witness=bad_cover,
    )


def adjoin_bottom(p: FinitePoset, label: str) -> FinitePoset:
    """New element below exactly the minimal elements of p."""
    if label in set(p.elements):
        raise PosetError(f"element id {label!r} already present")
    covers = set(p.covers)
    for m in p.minimal_elements():
        covers.add((label, m))
    return FinitePoset(tuple(sorted(p.elements + (label,))), frozenset(covers))


# --- chain-word machinery --------------------------------------------------


@dataclass(frozen=True)
class LabeledHasse:
    """Poset with a letter on each cover pair so maximal chains spell words."""

    poset: FinitePoset
    root: str | None
    labels: dict[tuple[str, str], int] = field(compare=False)

    def __post_init__(self):
        if set(self.labels) != set(self.poset.covers):
            raise PosetError("labels must cover exactly the cover pairs")
        if self.root is not None and self.root not in set(self.poset.elements):
            raise PosetError(f"root {self.root!r} is not an element")

    def chain_word(self, chain: tuple[str, ...]) -> tuple[int, ...]:
        """Letters read along a top-to-bottom chain."""
        return tuple(self.labels[chain[i + 1], chain[i]] for i in range(len(chain) - 1))


@dataclass(frozen=True)
class ChainWordReport:
    words_spelled: tuple[tuple[int, ...], ...]
    is_chain_word: bool
    witness: tuple[str, tuple[int, ...]] | None


def build_trie(words) -> LabeledHasse:
    """Prefix trie of a set of equal-length words, root on top.

    Each maximal chain read top-to-bottom spells exactly one input word; the
    cover from prefix u.x up to u carries label x.
    """
    ws = sorted({tuple(w) for w in words})
    if not ws:
        raise PosetError("word set is empty")
    n = len(ws[0])
    if any(len(w) != n for w in ws):
        raise PosetError("words must all have the same length")
    if any(a < 1 for w in ws for a in w):
        raise PosetError("letters must be positive integers")
    prefixes = {()}
    for w in ws:
        for i in range(1, n + 1):
            prefixes.add(w[:i])
    ids = {p: prefix_id(p) for p in prefixes}
    covers = {}
    for p in prefixes:
        if p:
            covers[ids[p], ids[p[:-1]]] = p[-1]
    poset = FinitePoset(tuple(sorted(ids.values())), frozenset(covers))
    return LabeledHasse(poset, prefix_id(()), covers)


def verify_chain_word(lh: LabeledHasse, target) -> ChainWordReport:
    """Do the maximal chains spell exactly the target words, each once?"""
    want = {tuple(w) for w in target}
    spelled = [lh.chain_word(c) for c in maximal_chains(lh.poset)]
    seen: set[tuple[int, ...]] = set()
    witness = None
    for w in spelled:
        if w in seen:
            witness = ("duplicate", w)
            break
        seen.add(w)
        if w not in want:
            witness = ("unexpected", w)
            break
    if witness is None:
        missing = sorted(want - seen)
        if missing:
            witness = ("missing", missing[0])
    ok = witness is None and len(spelled) == len(seen)
    return ChainWordReport(tuple(sorted(spelled)), ok, witness)


@dataclass(frozen=True)
class LabelingSearchResult:
    status: str  # "found" | "no-labeling" | "budget-exhausted"
    labeling: LabeledHasse | None
    nodes: int


def search_chain_word_labeling(p: FinitePoset, target, budget: int = 10**6) -> LabelingSearchResult:
    """Backtracking search for an edge labeling spelling the target words.

    Exhausting the budget proves nothing; exhausting the search space proves
    no labeling exists.
    """
    words = sorted({tuple(w) for w in target})
    if not words:
        raise PosetError("target word set is empty")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise PosetError("target words must all have the same length")
    chains = maximal_chains(p)
    if len(chains) != len(words):
        raise PosetError(
            f"{len(chains)} maximal chains cannot spell {len(words)} words bijectively")
    if any(len(c) != n + 1 for c in chains):
        raise PosetError(f"every maximal chain must have {n} cover steps")

    chain_edges = [[(c[i + 1], c[i]) for i in range(n)] for c in chains]
    labels: dict[tuple[str, str], int] = {}
    nodes = 0

    class _Budget(Exception):
        pass

    def assign(ci: int, used: set[tuple[int, ...]]):
        nonlocal nodes
        if ci == len(chains):
            return True
        edges = chain_edges[ci]
        for w in words:
            if w in used:
                continue
            nodes += 1
            if nodes > budget:
                raise _Budget()
            placed = []
            ok = True
            for e, letter in zip(edges, w):
                have = labels.get(e)
                if have is None:
                    labels[e] = letter
                    placed.append(e)
                elif have != letter:
                    ok = False
                    break
            if ok:
                used.add(w)
                if assign(ci + 1, used):
                    return True
                used.discard(w)
            for e in placed:
                del labels[e]
        return False

    try:
        found = assign(0, set())
    except _Budget:
        return LabelingSearchResult("budget-exhausted", None, nodes)
    if not found:
        return LabelingSearchResult("no-labeling", None, nodes)
    tops = p.maximal_elements()
    root = tops[0] if len(tops) == 1 else None
    lh = LabeledHasse(p, root, dict(labels))
    return LabelingSearchResult("found", lh, nodes)


# --- serialization ---------------------------------------------------------


def poset_to_json(p: FinitePoset, labels: dict | None = None, root: str | None = None) -> dict:
    data = {
        "elements": list(p.elements),
        "covers": [list(c) for c in sorted(p.covers)],
    }
    if labels is not None:
        data["labels"] = [[a, b, letter] for (a, b), letter in sorted(labels.items())]
    if root is not None:
        data["root"] = root
    return data


def poset_from_json(data: dict) -> FinitePoset:
    return FinitePoset.make(data["elements"], data.get("covers", []))


def poset_to_dot(p: FinitePoset, name: str = "P", labels: dict | None = None,
                 rankdir: str = "BT") -> str:
    """Covers drawn bottom-to-top; rank hints added when the poset is graded."""
    lines = [f"digraph {name} {{", f"  rankdir={rankdir};"]
    for e in p.elements:
        lines.append(f'  "{e}";')
    for a, b in sorted(p.covers):
        if labels and (a, b) in labels:
            lines.append(f'  "{a}" -> "{b}" [label="{labels[a, b]}"];')
        else:
            lines.append(f'  "{a}" -> "{b}";')
    rank, _ = _rank_function(p)
    if rank is not None:
        by_rank: dict[int, list[str]] = {}
        for e, r in rank.items():
            by_rank.setdefault(r, []).append(e)
        for r in sorted(by_rank):
            row = "; ".join(f'"{e}"' for e in sorted(by_rank[r]))
            lines.append(f"  {{ rank=same; {row}; }}")
    lines.append("}")
    return "\n".join(lines) + "\n"
