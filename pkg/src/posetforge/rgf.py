"""Restricted growth functions, set partitions in standard form, pattern avoidance.

The letters of a restricted growth function double as block indices of the
corresponding partition: i sits in block a_i.  Pattern containment is decided
by standardizing subpartitions, equivalently by comparing first-occurrence
signatures of letter subsequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .words import word_str

SUBSET_GUARD = 14  # contains_pattern enumerates subsets; refuse huge ground sets


@dataclass(frozen=True, order=True)
class Rgf:
    letters: tuple[int, ...]

    def __post_init__(self):
        w = self.letters
        if not w:
            raise ValueError("empty word")
        if w[0] != 1:
            raise ValueError(f"{w!r}: first letter must be 1")
        run_max = 1
        for a in w[1:]:
            if not 1 <= a <= run_max + 1:
                raise ValueError(f"{w!r}: letter {a} exceeds running max {run_max} + 1")
            run_max = max(run_max, a)

    @classmethod
    def make(cls, letters) -> "Rgf":
        return cls(tuple(int(a) for a in letters))

    def __str__(self) -> str:
        return word_str(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def max_letter(self) -> int:
        return max(self.letters)


@dataclass(frozen=True, order=True)
class SetPartition:
    """Blocks in standard form: ordered by their minima, ground set [n]."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("partition needs at least one block")
        seen: set[int] = set()
        prev_min = 0
        for blk in self.blocks:
            if not blk:
                raise ValueError("empty block")
            if blk & seen:
                raise ValueError("blocks are not disjoint")
            if min(blk) <= prev_min:
                raise ValueError("blocks are not ordered by minima")
            prev_min = min(blk)
            seen |= blk
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError(f"ground set {sorted(seen)} is not an initial segment of N")

    @classmethod
    def make(cls, blocks) -> "SetPartition":
        bs = sorted((frozenset(int(x) for x in blk) for blk in blocks), key=min)
        return cls(tuple(bs))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_of(self) -> dict[int, int]:
        """1-based block index of each element."""
        out = {}
        for j, blk in enumerate(self.blocks, start=1):
            for x in blk:
                out[x] = j
        return out

    def __str__(self) -> str:
        return partition_str(self)


Pattern = SetPartition


def partition_str(sp: SetPartition) -> str:
    if sp.n <= 9:
        return "/".join("".join(str(x) for x in sorted(b)) for b in sp.blocks)
    return "/".join(",".join(str(x) for x in sorted(b)) for b in sp.blocks)


def parse_pattern(text: str) -> SetPartition:
    """Blocks separated by '/'; digit shorthand allowed when all elements <= 9."""
    blocks = []
    for part in text.strip().split("/"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty block in {text!r}")
        if "," in part:
            blocks.append([int(x) for x in part.split(",")])
        else:
            blocks.append([int(c) for c in part])
    return SetPartition.make(blocks)


parse_partition = parse_pattern


def partition_to_rgf(sp: SetPartition) -> Rgf:
    blk = sp.block_of
    return Rgf(tuple(blk[i] for i in range(1, sp.n + 1)))


def rgf_to_partition(w: Rgf) -> SetPartition:
    blocks: dict[int, set[int]] = {}
    for i, a in enumerate(w.letters, start=1):
        blocks.setdefault(a, set()).add(i)
    return SetPartition.make(blocks[j] for j in sorted(blocks))


def restrict(sp: SetPartition, subset) -> tuple[frozenset[int], ...]:
    """Nonempty intersections of the blocks with subset, ordered by minima."""
    s = frozenset(int(x) for x in subset)
    if not s:
        raise ValueError("subset must be nonempty")
    if not s <= set(sp.block_of):
        raise ValueError("subset is not contained in the ground set")
    parts = [blk & s for blk in sp.blocks if blk & s]
    return tuple(sorted(parts, key=min))


def restrict_standardize(sp: SetPartition, subset) -> SetPartition:
    """Subpartition on subset, relabeled order-isomorphically onto an initial segment."""
    parts = restrict(sp, subset)
    relabel = {x: i for i, x in enumerate(sorted(x for blk in parts for x in blk), start=1)}
    return SetPartition.make(frozenset(relabel[x] for x in blk) for blk in parts)


def _signature(letters: tuple[int, ...]) -> tuple[int, ...]:
    """First-occurrence relabeling; the RGF word of the standardized subpartition."""
    relabel: dict[int, int] = {}
    out = []
    for a in letters:
        if a not in relabel:
            relabel[a] = len(relabel) + 1
        out.append(relabel[a])
    return tuple(out)


def contains_pattern(sp: SetPartition, pattern: SetPartition) -> bool:
    """Does some subpartition of sp standardize to the pattern?"""
    m = pattern.n
    n = sp.n
    if m > n:
        return False
    if n > SUBSET_GUARD:
        raise ValueError(f"ground set of size {n} exceeds the subset guard {SUBSET_GUARD}")
    want = partition_to_rgf(pattern).letters
    letters = partition_to_rgf(sp).letters
    for subset in combinations(range(n), m):
        if _signature(tuple(letters[i] for i in subset)) == want:
            return True
    return False


def avoids(sp: SetPartition, pattern: SetPartition) -> bool:
    return not contains_pattern(sp, pattern)


def enumerate_rgfs(n: int, k: int | None = None, avoid=()) -> list[Rgf]:
    """All RGFs of length n (max letter exactly k when given), filtered by avoidance."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k is not None and not 1 <= k <= n:
        raise ValueError(f"k={k} must satisfy 1 <= k <= {n}")
    patterns = tuple(avoid)
    out: list[Rgf] = []
    word = [1] + [0] * (n - 1)

    def grow(i: int, run_max: int) -> None:
        if i == n:
            if k is not None and run_max != k:
                return
            w = Rgf(tuple(word))
            if all(avoids(rgf_to_partition(w), p) for p in patterns):
                out.append(w)
            return
        top = run_max + 1 if k is None else min(run_max + 1, k)
        for a in range(1, top + 1):
            word[i] = a
            grow(i + 1, max(run_max, a))

    grow(1, 1)
    return out


# --- characterized avoidance classes ---------------------------------------


def _words_1_2_3(n: int, k: int | None) -> set[tuple[int, ...]]:
    # at most two blocks: words over {1, 2}
    if k is not None and k > 2:
        return set()
    ks = [k] if k is not None else [1, 2]
    out: set[tuple[int, ...]] = set()
    for kk in ks:
        if kk == 1:
            out.add((1,) * n)
        else:
            for bits in range(1 << (n - 1)):
                w = (1,) + tuple(1 + ((bits >> i) & 1) for i in range(n - 1))
                if 2 in w:
                    out.add(w)
    return out


def _words_1_23(n: int, k: int | None) -> set[tuple[int, ...]]:
    # a single 1 inserted into 1^l 2 3 ... m, with l + m = n
    ms = [k] if k is not None else list(range(1, n + 1))
    out: set[tuple[int, ...]] = set()
    for m in ms:
        l = n - m
        if l < 0:
            continue
        base = [1] * l + list(range(2, m + 1))
        for pos in range(len(base) + 1):
            w = tuple(base[:pos] + [1] + base[pos:])
            if w[0] == 1:
                out.add(w)
    return out


def _words_13_2(n: int, k: int | None) -> set[tuple[int, ...]]:
    # layered words 1^{l_1} 2^{l_2} ... m^{l_m}
    out: set[tuple[int, ...]] = set()

    def extend(prefix: list[int], letter: int, remaining: int) -> None:
        if remaining == 0:
            if k is None or letter - 1 == k:
                out.add(tuple(prefix))
            return
        for run in range(1, remaining + 1):
            extend(prefix + [letter] * run, letter + 1, remaining - run)

    extend([], 1, n)
    return out


def _words_12_3(n: int, k: int | None) -> set[tuple[int, ...]]:
    # initial run 1 2 ... m, then a constant tail bounded by m
    ms = [k] if k is not None else list(range(1, n + 1))
    out: set[tuple[int, ...]] = set()
    for m in ms:
        if m > n:
            continue
        head = tuple(range(1, m + 1))
        if m == n:
            out.add(head)
        else:
            for c in range(1, m + 1):
                out.add(head + (c,) * (n - m))
    return out


def _words_123(n: int, k: int | None) -> set[tuple[int, ...]]:
    # no letter used more than twice
    out: set[tuple[int, ...]] = set()
    word = [0] * n

    def grow(i: int, run_max: int, counts: dict[int, int]) -> None:
        if i == n:
            if k is None or run_max == k:
                out.add(tuple(word))
            return
        top = 1 if i == 0 else (run_max + 1 if k is None else min(run_max + 1, k))
        for a in range(1, top + 1):
            if counts.get(a, 0) >= 2:
                continue
            word[i] = a
            counts[a] = counts.get(a, 0) + 1
            grow(i + 1, max(run_max, a), counts)
            counts[a] -= 1

    grow(0, 0, {})
    return out


_CHARACTERIZED = {
    "1/2/3": _words_1_2_3,
    "1/23": _words_1_23,
    "13/2": _words_13_2,
    "12/3": _words_12_3,
    "123": _words_123,
}

CHARACTERIZED_PATTERNS = tuple(sorted(_CHARACTERIZED))


def generator_characterized(n: int, k: int | None, pattern: SetPartition | str) -> list[Rgf]:
    """Avoidance class built directly from its structural characterization."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k is not None and not 1 <= k <= n:
        raise ValueError(f"k={k} must satisfy 1 <= k <= {n}")
    key = pattern if isinstance(pattern, str) else partition_str(pattern)
    if key not in _CHARACTERIZED:
        raise ValueError(f"pattern {key!r} has no characterized generator")
    return sorted(Rgf(w) for w in _CHARACTERIZED[key](n, k))
