"""Builders for the poset families and the bonding epimorphisms between members.

Every builder returns a FamilyInstance whose element ids are readable value
strings (words, step strings, sorted sets, coordinate strings, intervals).
Bonding maps act on Hasse graphs and are returned as GraphMorphisms; their
epimorphism/monotonicity/confluence status is measured by the graph checkers,
never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

from .graphs import GraphMorphism, ReflexiveGraph, compose, edge_key
from .posets import FinitePoset, LabeledHasse, adjoin_bottom, build_trie, hasse_graph
from .rgf import SetPartition, enumerate_rgfs, parse_pattern, partition_str
from .words import EPSILON_ID, ROOT_ID, prefix_id

FAMILY_IDS = (
    "rgf-trie", "rgf-lattice", "rgf-trie-nk", "dyck-ascent", "dyck-stanley",
    "flats", "hessenberg", "hook-ppartition", "nc2", "boolean",
)


class BondError(ValueError):
    pass


@dataclass
class FamilyInstance:
    family: str
    index: dict
    poset: FinitePoset
    decode: dict[str, object]
    root: str | None = None
    labels: dict[tuple[str, str], int] | None = None
    trie: LabeledHasse | None = None
    meta: dict = field(default_factory=dict)

    @property
    def hasse(self) -> ReflexiveGraph:
        return hasse_graph(self.poset)

    def __len__(self) -> int:
        return len(self.poset)


# --- id helpers -------------------------------------------------------------


def set_id(s) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def coords_id(v) -> str:
    if v and max(v) > 9:
        return ",".join(str(x) for x in v)
    return "".join(str(x) for x in v)


def interval_id(iv) -> str:
    if iv == "eps":
        return EPSILON_ID
    i, j = iv
    return f"{i}..{j}"


# --- RGF tries and lattices --------------------------------------------------


def _resolve_patterns(patterns) -> tuple[SetPartition, ...]:
    out = []
    for p in patterns:
        out.append(parse_pattern(p) if isinstance(p, str) else p)
    return tuple(out)


def build_rgf_trie(n: int, patterns=(), k: int | None = None,
                   lattice: bool = False) -> FamilyInstance:
    pats = _resolve_patterns(patterns)
    words = [w.letters for w in enumerate_rgfs(n, k, avoid=pats)]
    if not words:
        raise ValueError(f"no words: n={n}, k={k}, patterns={[str(p) for p in pats]}")
    trie = build_trie(words)
    poset = trie.poset
    decode: dict[str, object] = {}
    for w in words:
        for i in range(n + 1):
            decode[prefix_id(w[:i])] = w[:i]
    if lattice:
        poset = adjoin_bottom(poset, EPSILON_ID)
        decode[EPSILON_ID] = "eps"
    family = "rgf-lattice" if (lattice and k is None) else ("rgf-trie-nk" if k is not None else "rgf-trie")
    index = {"n": n}
    if k is not None:
        index["k"] = k
    if pats:
        index["patterns"] = tuple(partition_str(p) for p in pats)
    if lattice:
        index["lattice"] = True
    return FamilyInstance(family, index, poset, decode, root=ROOT_ID,
                          labels=dict(trie.labels), trie=trie,
                          meta={"words": tuple(words)})


def _truncate(w: tuple[int, ...], depth: int) -> tuple[int, ...]:
    return w[:depth]


def bond_rgf_vary_n(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    """Prefixes of depth <= small n map identically, deeper ones to their ancestor."""
    n_small = small.index["n"]
    if big.index["n"] <= n_small:
        raise BondError("vary-n bond needs a strictly deeper domain")
    if big.index.get("patterns") != small.index.get("patterns") or \
       big.index.get("k") != small.index.get("k") or \
       big.index.get("lattice") != small.index.get("lattice"):
        raise BondError("vary-n bond needs matching pattern/k/lattice structure")
    small_ids = set(small.poset.elements)
    mapping = {}
    for v in big.poset.elements:
        if v == EPSILON_ID:
            mapping[v] = EPSILON_ID
            continue
        w = big.decode[v]
        mapping[v] = prefix_id(_truncate(w, n_small))
    images = set(mapping.values())
    if images != small_ids:
        raise BondError(
            f"prefix coherence failure: {sorted(images ^ small_ids)[:4]}")
    return GraphMorphism(big.hasse, small.hasse, mapping)


def _children_map(words) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    n = len(next(iter(words)))
    prefixes = {()}
    for w in words:
        for i in range(1, n + 1):
            prefixes.add(w[:i])
    children: dict[tuple[int, ...], list[tuple[int, ...]]] = {p: [] for p in prefixes}
    for p in prefixes:
        if p:
            children[p[:-1]].append(p)
    return {p: sorted(cs) for p, cs in children.items()}


def _embed_trie(cod_children, dom_children) -> dict | None:
    """Rooted embedding of the codomain trie into the domain trie.

    Children are matched injectively; among shape-compatible candidates the
    lexicographically smallest assignment wins (depth-first, first success).
    """

    viable: dict[tuple, bool] = {}

    def can_embed(c, v) -> bool:
        key = (c, v)
        if key in viable:
            return viable[key]
        result = _match_children(c, v, probe=True) is not None
        viable[key] = result
        return result

    def _match_children(c, v, probe: bool):
        cs = cod_children[c]
        vs = dom_children.get(v, [])
        if len(cs) > len(vs):
            return None
        assignment: dict = {}

        def assign(i: int, used: set) -> bool:
            if i == len(cs):
                return True
            for w in vs:
                if w in used or not can_embed(cs[i], w):
                    continue
                used.add(w)
                assignment[cs[i]] = w
                if assign(i + 1, used):
                    return True
                used.discard(w)
                del assignment[cs[i]]
            return False

        if not assign(0, set()):
            return None
        return assignment

    mapping: dict = {(): ()}

    def build(c, v) -> bool:
        assignment = _match_children(c, v, probe=False)
        if assignment is None:
            return False
        for child, target in assignment.items():
            mapping[child] = target
            if not build(child, target):
                return False
        return True

    if not build((), ()):
        return None
    return mapping


def bond_rgf_1_23_vary_k(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    """Retract the 1/23 trie at (n, k+1) onto the copy of the (n, k) trie.

    The embedded copy maps back identically; every other vertex at depth d
    lands on the depth-d vertex of the rightmost (lex-largest) codomain chain.
    """
    n = big.index["n"]
    k_hi, k_lo = big.index.get("k"), small.index.get("k")
    if big.index.get("patterns") != ("1/23",) or small.index.get("patterns") != ("1/23",):
        raise BondError("vary-k bond is defined for the 1/23 family")
    if small.index["n"] != n or k_hi != k_lo + 1:
        raise BondError(f"vary-k bond needs (n,k+1)->(n,k); got {big.index} -> {small.index}")
    if not (2 <= k_lo and k_hi <= n - 1):
        raise BondError(f"inadmissible indices n={n}, k={k_hi}->{k_lo}")
    big_words = set(big.meta["words"])
    small_words = set(small.meta["words"])
    emb = _embed_trie(_children_map(small_words), _children_map(big_words))
    if emb is None:
        raise BondError(
            f"no trie embedding: domain {sorted(big_words)} vs codomain {sorted(small_words)}")
    rightmost = max(small_words)
    image_inv = {prefix_id(v): prefix_id(u) for u, v in emb.items()}
    mapping = {}
    for el in big.poset.elements:
        if el == EPSILON_ID:
            mapping[el] = EPSILON_ID
        elif el in image_inv:
            mapping[el] = image_inv[el]
        else:
            d = len(big.decode[el])
            mapping[el] = prefix_id(rightmost[:d])
    return GraphMorphism(big.hasse, small.hasse, mapping)


def bond_rgf_1_23_vary_n(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    """Fixed-k step for the 1/23 family: the deeper trie is the shallower one
    hanging under one extra root edge, so everything shifts up by one letter."""
    n_hi, n_lo = big.index["n"], small.index["n"]
    k = big.index.get("k")
    if big.index.get("patterns") != ("1/23",) or small.index.get("patterns") != ("1/23",):
        raise BondError("vary-n unshift is defined for the 1/23 family")
    if small.index.get("k") != k or n_hi != n_lo + 1 or k is None:
        raise BondError(f"vary-n unshift needs (n+1,k)->(n,k); got {big.index} -> {small.index}")
    if not (2 <= k < n_lo):
        raise BondError(f"inadmissible indices n={n_hi}->{n_lo}, k={k}")
    big_words = set(big.meta["words"])
    small_words = set(small.meta["words"])
    if big_words != {(1,) + w for w in small_words}:
        raise BondError("unshift failure: domain words are not 1-prefixed codomain words")
    mapping = {}
    for el in big.poset.elements:
        if el == EPSILON_ID:
            mapping[el] = EPSILON_ID
        elif el == ROOT_ID:
            mapping[el] = ROOT_ID
        else:
            w = big.decode[el]
            mapping[el] = prefix_id(w[1:])
    return GraphMorphism(big.hasse, small.hasse, mapping)


def bond_rgf_12_3_spider(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    """Spider retraction for the 12/3 family.

    Top stem edges collapse to the root loop, the embedded copy retracts
    identically, leg bottoms collapse to end-vertex loops, and the extra legs
    fold onto the leftmost codomain leg.
    """
    if big.index.get("patterns") != ("12/3",) or small.index.get("patterns") != ("12/3",):
        raise BondError("spider bond is defined for the 12/3 family")
    n1, k1 = big.index["n"], big.index.get("k")
    n2, k2 = small.index["n"], small.index.get("k")
    if k1 is None or k2 is None:
        raise BondError("spider bond needs explicit k on both sides")
    if not (n1 >= n2 and k1 >= k2 and (n1 - n2) >= (k1 - k2)):
        raise BondError(f"inadmissible spider indices ({n1},{k1}) -> ({n2},{k2})")
    dk = k1 - k2
    leg2 = n2 - k2

    def image(w: tuple[int, ...]) -> tuple[int, ...]:
        if len(w) <= k1:  # stem prefix 1 2 ... j
            j = len(w)
            return tuple(range(1, max(j - dk, 0) + 1))
        c = w[k1]
        t = len(w) - k1
        c2 = c if c <= k2 else 1
        return tuple(range(1, k2 + 1)) + (c2,) * min(t, leg2)

    mapping = {}
    for el in big.poset.elements:
        if el == EPSILON_ID:
            mapping[el] = EPSILON_ID
        else:
            mapping[el] = prefix_id(image(big.decode[el]))
    return GraphMorphism(big.hasse, small.hasse, mapping)


# --- Dyck paths --------------------------------------------------------------


def dyck_paths(n: int) -> list[str]:
    paths = []

    def grow(s: str, ups: int, downs: int) -> None:
        if len(s) == 2 * n:
            paths.append(s)
            return
        if ups < n:
            grow(s + "U", ups + 1, downs)
        if downs < ups:
            grow(s + "D", ups, downs + 1)

    grow("", 0, 0)
    return sorted(paths)


def ascent_moves(path: str) -> list[str]:
    """Replace one factor D U^k D by U^k D D."""
    out = []
    n = len(path)
    i = 0
    while i < n:
        if path[i] == "D":
            j = i + 1
            while j < n and path[j] == "U":
                j += 1
            if j > i + 1 and j < n and path[j] == "D":
                k = j - i - 1
                out.append(path[:i] + "U" * k + "DD" + path[j + 1:])
        i += 1
    return out


def stanley_leq(p: str, q: str) -> bool:
    """p lies weakly below q: every prefix has at most as many up steps."""
    hp = hq = 0
    for a, b in zip(p, q):
        hp += 1 if a == "U" else 0
        hq += 1 if b == "U" else 0
        if hp > hq:
            return False
    return True


def _closure_and_reduction(elements: list[str], moves) -> tuple[frozenset, frozenset]:
    """Transitive closure of the declared moves; covers are its reduction."""
    succ = {e: set(moves(e)) for e in elements}
    reach: dict[str, set[str]] = {}

    def dfs(e: str) -> set[str]:
        if e in reach:
            return reach[e]
        acc = set()
        reach[e] = acc  # move graph is acyclic: every move shrinks nothing but goes up
        for f in succ[e]:
            acc.add(f)
            acc |= dfs(f)
        return acc

    for e in elements:
        dfs(e)
    covers = set()
    for a in elements:
        for b in reach[a]:
            if not any(b in reach[c] for c in reach[a] if c != b):
                covers.add((a, b))
    return frozenset((a, b) for a in elements for b in reach[a]), frozenset(covers)


def build_dyck_ascent(n: int) -> FamilyInstance:
    if n < 1:
        raise ValueError("n must be >= 1")
    paths = dyck_paths(n)
    closure, covers = _closure_and_reduction(paths, ascent_moves)
    declared = frozenset((p, q) for p in paths for q in ascent_moves(p))
    poset = FinitePoset(tuple(paths), covers)
    return FamilyInstance("dyck-ascent", {"n": n}, poset, {p: p for p in paths},
                          meta={"declared_moves": declared, "closure": closure})


def build_dyck_stanley(n: int) -> FamilyInstance:
    if n < 1:
        raise ValueError("n must be >= 1")
    paths = dyck_paths(n)
    relation = frozenset((p, q) for p in paths for q in paths
                         if p != q and stanley_leq(p, q))
    covers = set()
    for p, q in relation:
        if not any((p, c) in relation and (c, q) in relation for c in paths):
            covers.add((p, q))
    valley_moves = frozenset(
        (p, p[:i] + "UD" + p[i + 2:]) for p in paths
        for i in range(len(p) - 1) if p[i : i + 2] == "DU")
    poset = FinitePoset(tuple(paths), frozenset(covers))
    return FamilyInstance("dyck-stanley", {"n": n}, poset, {p: p for p in paths},
                          meta={"valley_peak_moves": valley_moves, "closure": relation})


def delete_first_peak(path: str) -> str:
    i = path.find("UD")
    if i < 0:
        raise ValueError(f"{path!r} has no peak")
    return path[:i] + path[i + 2:]


def bond_dyck(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    if big.index["n"] != small.index["n"] + 1 or big.family != small.family:
        raise BondError("dyck bond needs consecutive sizes in the same order")
    mapping = {p: delete_first_peak(p) for p in big.poset.elements}
    return GraphMorphism(big.hasse, small.hasse, mapping)


# --- lattice of flats of uniform matroids ------------------------------------


def build_flats(k: int, n: int) -> FamilyInstance:
    if not 1 <= k <= n:
        raise ValueError(f"flats need 1 <= k <= n; got k={k}, n={n}")
    ground = frozenset(range(1, n + 1))
    flats: list[frozenset[int]] = [frozenset(c) for size in range(k)
                                   for c in combinations(sorted(ground), size)]
    flats.append(ground)
    ids = {f: set_id(f) for f in flats}
    covers = set()
    for f in flats:
        if len(f) < k - 1:
            for x in ground - f:
                covers.add((ids[f], ids[f | {x}]))
        elif len(f) == k - 1:
            covers.add((ids[f], ids[ground]))
    poset = FinitePoset(tuple(sorted(ids.values())), frozenset(covers))
    decode = {v: f for f, v in ids.items()}
    return FamilyInstance("flats", {"k": k, "n": n}, poset, decode)


def _slide_flat(f: frozenset[int], n: int) -> frozenset[int]:
    """Replace the maximal run {t,...,n} by {t-1,...,n-1}."""
    t = n
    while t - 1 in f:
        t -= 1
    return frozenset(x for x in f if x < t) | frozenset(range(t - 1, n))


def bond_flats(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    k = big.index["k"]
    n = big.index["n"]
    if small.index["k"] != k or small.index["n"] != n - 1:
        raise BondError("flats bond needs (k,n)->(k,n-1)")
    if n - 1 <= k:
        raise BondError(f"flats bond needs n-1 > k; got k={k}, n={n}")
    ground = frozenset(range(1, n + 1))
    mapping = {}
    for el in big.poset.elements:
        f = big.decode[el]
        if f == ground:
            mapping[el] = set_id(ground - {n})
        elif n in f:
            mapping[el] = set_id(_slide_flat(f, n))
        else:
            mapping[el] = el
    return GraphMorphism(big.hasse, small.hasse, mapping)


# --- Hessenberg functions -----------------------------------------------------


def hessenberg_functions(n: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def grow(h: list[int]) -> None:
        i = len(h)
        if i == n:
            out.append(tuple(h))
            return
        lo = max(i + 1, h[-1] if h else 1)
        for v in range(lo, n + 1):
            h.append(v)
            grow(h)
            h.pop()

    grow([])
    return sorted(out)


def _hessenberg_covers(values: list[tuple[int, ...]], n: int) -> frozenset:
    present = set(values)
    covers = set()
    for h in values:
        for i in range(n):
            up = h[:i] + (h[i] + 1,) + h[i + 1:]
            if up in present:
                covers.add((coords_id(h), coords_id(up)))
    return frozenset(covers)


def hessenberg_rank(h: tuple[int, ...]) -> int:
    return sum(v - i for i, v in enumerate(h, start=1))


def build_hessenberg(n: int) -> FamilyInstance:
    if n < 1:
        raise ValueError("n must be >= 1")
    hs = hessenberg_functions(n)
    poset = FinitePoset(tuple(coords_id(h) for h in hs), _hessenberg_covers(hs, n))
    return FamilyInstance("hessenberg", {"n": n}, poset, {coords_id(h): h for h in hs})


def bond_hessenberg(big: FamilyInstance, small: FamilyInstance,
                    rule: str = "meet") -> GraphMorphism:
    """Retract H_n onto its copy {h(n)=n, h(i)<=n-1} and drop the last value.

    rule="meet" clamps every coordinate into the copy (a lattice retraction);
    rule="rank" reproduces the drawing-based recipe: high ranks to the copy
    top, low ranks to the lex-smallest copy element of equal rank.
    """
    n = big.index["n"]
    if small.index["n"] != n - 1:
        raise BondError("hessenberg bond needs n->n-1")
    if n < 2:
        raise BondError("hessenberg bond needs n >= 2")
    cap = (n - 1,) * (n - 1) + (n,)
    in_copy = lambda h: all(v <= n - 1 for v in h[:-1])
    if rule == "meet":
        def image(h):
            return tuple(min(v, c) for v, c in zip(h, cap))
    elif rule == "rank":
        copy_by_rank: dict[int, list[tuple[int, ...]]] = {}
        for el in big.poset.elements:
            h = big.decode[el]
            if in_copy(h):
                copy_by_rank.setdefault(hessenberg_rank(h), []).append(h)
        top_rank = max(copy_by_rank)

        def image(h):
            if in_copy(h):
                return h
            r = hessenberg_rank(h)
            if r >= top_rank:
                return cap
            return min(copy_by_rank[r])
    else:
        raise ValueError(f"unknown rule {rule!r}")
    mapping = {el: coords_id(image(big.decode[el])[:-1]) for el in big.poset.elements}
    return GraphMorphism(big.hasse, small.hasse, mapping)


# --- hook-shaped P-partition lattices ----------------------------------------


def fence_vectors(m: int, n: int) -> list[tuple[int, ...]]:
    """Weakly decreasing to the corner, weakly increasing after, parts in 0..m."""
    length = 2 * n - 1
    out: list[tuple[int, ...]] = []

    def grow(v: list[int]) -> None:
        i = len(v)
        if i == length:
            out.append(tuple(v))
            return
        if i == 0:
            rng = range(m, -1, -1)
        elif i < n:
            rng = range(v[-1], -1, -1)
        else:
            rng = range(v[-1], m + 1)
        for x in rng:
            v.append(x)
            grow(v)
            v.pop()

    grow([])
    return sorted(out)


def _fence_valid(v: tuple[int, ...], m: int, n: int) -> bool:
    if any(not 0 <= x <= m for x in v):
        return False
    return all(v[i] >= v[i + 1] for i in range(n - 1)) and \
        all(v[i] <= v[i + 1] for i in range(n - 1, 2 * n - 2))


def build_hook(m: int, n: int) -> FamilyInstance:
    if m < 1 or n < 1:
        raise ValueError("hook lattice needs m, n >= 1")
    vs = fence_vectors(m, n)
    present = set(vs)
    covers = set()
    for v in vs:
        for i in range(len(v)):
            up = v[:i] + (v[i] + 1,) + v[i + 1:]
            if up in present:
                covers.add((coords_id(v), coords_id(up)))
    poset = FinitePoset(tuple(coords_id(v) for v in vs), frozenset(covers))
    return FamilyInstance("hook-ppartition", {"m": m, "n": n}, poset,
                          {coords_id(v): v for v in vs})


def bond_hook(big: FamilyInstance, small: FamilyInstance,
              rule: str = "clamp") -> GraphMorphism:
    """Retract G^m[n,n] onto G^m[n-1,n-1] (outer coordinates pinned to m, an
    up-set) or onto G^{m-1}[n,n] (values capped at m-1, a down-set).

    rule="clamp" joins/meets with the copy extreme; rule="extreme" reproduces
    the drawing-based recipe (wrong-side ranks to the copy extreme, otherwise
    the lex-extreme copy element of equal rank).
    """
    m, n = big.index["m"], big.index["n"]
    m2, n2 = small.index["m"], small.index["n"]
    if (m2, n2) == (m, n - 1):
        axis = "n"
        if n < 2:
            raise BondError("hook vary-n bond needs n >= 2")
        in_copy = lambda v: v[0] == m and v[-1] == m
        clamp = lambda v: (m,) + v[1:-1] + (m,)
        decode_copy = lambda v: v[1:-1] if n >= 2 else v
        extreme = (m,) + (0,) * (2 * n - 3) + (m,)  # copy bottom
        wrong_side = lambda r, er: r <= er
    elif (m2, n2) == (m - 1, n):
        axis = "m"
        if m < 2:
            raise BondError("hook vary-m bond needs m >= 2")
        in_copy = lambda v: all(x <= m - 1 for x in v)
        clamp = lambda v: tuple(min(x, m - 1) for x in v)
        decode_copy = lambda v: v
        extreme = (m - 1,) * (2 * n - 1)  # copy top
        wrong_side = lambda r, er: r >= er
    else:
        raise BondError(f"hook bond needs (m,n-1) or (m-1,n); got {small.index}")

    if rule == "clamp":
        def image(v):
            return clamp(v)
    elif rule == "extreme":
        copy_by_rank: dict[int, list[tuple[int, ...]]] = {}
        for el in big.poset.elements:
            v = big.decode[el]
            if in_copy(v):
                copy_by_rank.setdefault(sum(v), []).append(v)
        extreme_rank = sum(extreme)

        def image(v):
            if in_copy(v):
                return v
            r = sum(v)
            if wrong_side(r, extreme_rank):
                return extreme
            row = sorted(copy_by_rank[r])
            if v < row[0]:
                return row[0]
            return row[-1]
    else:
        raise ValueError(f"unknown rule {rule!r}")

    mapping = {el: coords_id(decode_copy(image(big.decode[el])))
               for el in big.poset.elements}
    return GraphMorphism(big.hasse, small.hasse, mapping)


# --- noncrossing partitions with two blocks ----------------------------------


def build_nc2(n: int) -> FamilyInstance:
    """Intervals [i,j] inside [2,n] (the non-initial block) plus a bottom eps."""
    if n < 2:
        raise ValueError("nc2 needs n >= 2")
    intervals = [(i, j) for i in range(2, n + 1) for j in range(i, n + 1)]
    covers = set()
    for i, j in intervals:
        if i == j:
            covers.add((EPSILON_ID, interval_id((i, j))))
        if i - 1 >= 2:
            covers.add((interval_id((i, j)), interval_id((i - 1, j))))
        if j + 1 <= n:
            covers.add((interval_id((i, j)), interval_id((i, j + 1))))
    elements = tuple(sorted([interval_id(iv) for iv in intervals] + [EPSILON_ID]))
    poset = FinitePoset(elements, frozenset(covers))
    decode: dict[str, object] = {interval_id(iv): iv for iv in intervals}
    decode[EPSILON_ID] = "eps"
    return FamilyInstance("nc2", {"n": n}, poset, decode)


def bond_nc2(big: FamilyInstance, small: FamilyInstance) -> GraphMorphism:
    n = big.index["n"]
    if small.index["n"] != n - 1:
        raise BondError("nc2 bond needs n->n-1")
    if n < 4:
        raise BondError("nc2 bond needs n >= 4")
    mapping = {}
    for el in big.poset.elements:
        iv = big.decode[el]
        if iv == "eps":
            mapping[el] = EPSILON_ID
        else:
            i, j = iv
            if j <= n - 1:
                mapping[el] = el
            elif i <= n - 1:
                mapping[el] = interval_id((i, n - 1))
            else:
                mapping[el] = interval_id((n - 1, n - 1))
    return GraphMorphism(big.hasse, small.hasse, mapping)


# --- Boolean lattice ----------------------------------------------------------


def build_boolean(n: int) -> FamilyInstance:
    if n < 1:
        raise ValueError("n must be >= 1")
    subsets = [frozenset(c) for size in range(n + 1)
               for c in combinations(range(1, n + 1), size)]
    ids = {s: set_id(s) for s in subsets}
    covers = set()
    for s in subsets:
        for x in range(1, n + 1):
            if x not in s:
                covers.add((ids[s], ids[s | {x}]))
    poset = FinitePoset(tuple(sorted(ids.values())), frozenset(covers))
    return FamilyInstance("boolean", {"n": n}, poset, {v: s for s, v in ids.items()})


# --- dispatch -----------------------------------------------------------------


@lru_cache(maxsize=512)
def _build_cached(family: str, key: tuple) -> FamilyInstance:
    params = dict(key)
    return build(family, **params)


def build_instance(family: str, **params) -> FamilyInstance:
    """Cached build; treat the result as immutable."""
    key = tuple(sorted(params.items()))
    return _build_cached(family, key)


def build(family: str, n: int | None = None, k: int | None = None,
          m: int | None = None, patterns=(), lattice: bool = False) -> FamilyInstance:
    patterns = tuple(patterns)
    if family == "rgf-trie":
        return build_rgf_trie(n, patterns, k=k, lattice=lattice)
    if family == "rgf-lattice":
        return build_rgf_trie(n, patterns, k=k, lattice=True)
    if family == "rgf-trie-nk":
        if k is None:
            raise ValueError("rgf-trie-nk needs k")
        return build_rgf_trie(n, patterns, k=k, lattice=lattice)
    if family == "dyck-ascent":
        return build_dyck_ascent(n)
    if family == "dyck-stanley":
        return build_dyck_stanley(n)
    if family == "flats":
        if k is None:
            raise ValueError("flats needs k")
        return build_flats(k, n)
    if family == "hessenberg":
        return build_hessenberg(n)
    if family == "hook-ppartition":
        if m is None or n is None:
            raise ValueError("hook-ppartition needs m and n")
        return build_hook(m, n)
    if family == "nc2":
        return build_nc2(n)
    if family == "boolean":
        return build_boolean(n)
    raise ValueError(f"unknown family {family!r}")


def _elementary_bond(family: str, hi: dict, lo: dict, options: dict) -> GraphMorphism:
    opts = dict(options)
    patterns = tuple(opts.pop("patterns", ()))
    lattice = opts.pop("lattice", False)

    def inst(idx: dict) -> FamilyInstance:
        return build_instance(family, patterns=patterns, lattice=lattice, **idx)

    if family in ("rgf-trie", "rgf-lattice"):
        return bond_rgf_vary_n(inst(hi), inst(lo))
    if family == "rgf-trie-nk":
        if patterns == ("1/23",):
            if hi["n"] == lo["n"]:
                return bond_rgf_1_23_vary_k(inst(hi), inst(lo))
            return bond_rgf_1_23_vary_n(inst(hi), inst(lo))
        if patterns == ("12/3",):
            return bond_rgf_12_3_spider(inst(hi), inst(lo))
        raise BondError(f"no nk bonding rule for patterns {patterns!r}")
    if family in ("dyck-ascent", "dyck-stanley"):
        return bond_dyck(inst(hi), inst(lo))
    if family == "flats":
        return bond_flats(inst(hi), inst(lo))
    if family == "hessenberg":
        return bond_hessenberg(inst(hi), inst(lo), rule=opts.get("rule", "meet"))
    if family == "hook-ppartition":
        return bond_hook(inst(hi), inst(lo), rule=opts.get("rule", "clamp"))
    if family == "nc2":
        return bond_nc2(inst(hi), inst(lo))
    raise BondError(f"family {family!r} has no bonding maps")


def _index_steps(family: str, hi: dict, lo: dict, patterns=()) -> list[dict]:
    """Canonical descending index path; k (or m) varies first, then n."""
    steps = [dict(hi)]
    cur = dict(hi)
    if family == "rgf-trie-nk" and tuple(patterns) == ("12/3",):
        if cur != lo:
            steps.append(dict(lo))  # the spider bond covers any admissible pair
        return steps
    for axis in ("k", "m"):
        while axis in cur and axis in lo and cur[axis] > lo[axis]:
            cur[axis] -= 1
            steps.append(dict(cur))
    while cur.get("n", 0) > lo.get("n", 0):
        cur["n"] -= 1
        steps.append(dict(cur))
    if cur != lo:
        raise BondError(f"no descending index path from {hi} to {lo}")
    return steps


def family_bond(family: str, hi: dict, lo: dict, **options) -> GraphMorphism:
    """Bonding map from the instance at hi onto the instance at lo, composing
    elementary steps along the canonical index path."""
    steps = _index_steps(family, hi, lo, options.get("patterns", ()))
    if len(steps) < 2:
        raise BondError(f"indices {hi} and {lo} are equal")
    morphism = _elementary_bond(family, steps[0], steps[1], options)
    for i in range(1, len(steps) - 1):
        nxt = _elementary_bond(family, steps[i], steps[i + 1], options)
        morphism = compose(nxt, morphism)
    return morphism
