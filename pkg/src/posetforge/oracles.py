"""Independent brute-force enumerators used to cross-check the builders.

Everything here is deliberately naive and shares no code with the family
constructions it validates.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb


def _set_partitions(n: int) -> list[list[set[int]]]:
    """All partitions of [n] by inserting each element into every slot in turn."""
    if n < 1:
        raise ValueError("n must be >= 1")
    parts: list[list[set[int]]] = [[{1}]]
    for x in range(2, n + 1):
        nxt = []
        for p in parts:
            for i in range(len(p)):
                q = [set(b) for b in p]
                q[i].add(x)
                nxt.append(q)
            nxt.append([set(b) for b in p] + [{x}])
        parts = nxt
    return parts


def set_partition_count(n: int) -> int:
    return len(_set_partitions(n))


def set_partitions(n: int) -> list[tuple[frozenset[int], ...]]:
    out = []
    for p in _set_partitions(n):
        out.append(tuple(sorted((frozenset(b) for b in p), key=min)))
    return sorted(out)


def dyck_paths_brute(n: int) -> list[str]:
    """All Dyck paths of size n by filtering every U/D string of length 2n."""
    if n == 0:
        return [""]
    paths = []
    for bits in product("UD", repeat=2 * n):
        height = 0
        ok = True
        for c in bits:
            height += 1 if c == "U" else -1
            if height < 0:
                ok = False
                break
        if ok and height == 0:
            paths.append("".join(bits))
    return sorted(paths)


def dyck_count(n: int) -> int:
    return len(dyck_paths_brute(n))


def noncrossing_two_block_partitions(n: int) -> list[tuple[frozenset[int], frozenset[int]]]:
    """All noncrossing 2-block partitions of [n]; the block without 1 comes second."""
    out = []
    ground = set(range(1, n + 1))
    for size in range(1, n):
        for second in combinations(sorted(ground - {1}), size):
            first = tuple(sorted(ground - set(second)))
            crossing = False
            for a, c in combinations(first, 2):
                for b, d in combinations(second, 2):
                    if a < b < c < d or b < a < d < c:
                        crossing = True
                        break
                if crossing:
                    break
            if not crossing:
                out.append((frozenset(first), frozenset(second)))
    return sorted(out, key=lambda p: sorted(p[1]))


def flats_count(k: int, n: int) -> int:
    return sum(comb(n, i) for i in range(k)) + 1


def fence_vectors_brute(m: int, n: int) -> list[tuple[int, ...]]:
    """V-shaped fence labelings: arm down to the corner, arm back up, parts <= m."""
    length = 2 * n - 1
    out = []
    for v in product(range(m + 1), repeat=length):
        if all(v[i] >= v[i + 1] for i in range(n - 1)) and \
           all(v[i] <= v[i + 1] for i in range(n - 1, length - 1)):
            out.append(v)
    return sorted(out)


def fence_count_formula(m: int, n: int) -> int:
    return sum(comb(m - b + n - 1, n - 1) ** 2 for b in range(m + 1))


def hessenberg_count_oracle(n: int) -> int:
    """Hessenberg functions are counted by the same numbers as Dyck paths."""
    return dyck_count(n)


def boolean_count(n: int) -> int:
    return 2 ** n
