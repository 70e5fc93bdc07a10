"""
Brute-force ground truth for subgroup lattices of small finite abelian groups.

The group is materialised element by element; subgroups are Python ints used as
bit sets over element indices, so meets are a single ``&`` and translating a
whole subgroup by a group element is a handful of shifts. Everything the formula
engine claims can be checked against the counts produced here.
"""
import logging
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import gcd, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from ..config import DEFAULT_AUT_ORACLE_CAP, DEFAULT_ORACLE_CAP
from ..utils.errors import ContainmentError, DomainError, OracleScaleExceeded
from ..utils.spec_parser import format_group_type
from .abelian import Count, GroupType, canonicalize


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exact_log(value: int, p: int) -> int:
    """The e with p**e == value; value must be a power of p."""
    e = 0
    while value > 1:
        value, r = divmod(value, p)
        assert r == 0, "not a power of the prime"
        e += 1
    return e


class ExplicitGroup:
    """
    Z_{m_1} x ... x Z_{m_r} with every element stored as a tuple.

    Element indices are mixed-radix with the last coordinate varying fastest,
    so index 0 is the identity.
    """

    def __init__(self, moduli: Sequence[int]):
        self.moduli: Tuple[int, ...] = tuple(moduli)
        if any(m < 2 for m in self.moduli):
            raise DomainError(f"cyclic factors must have order >= 2, got {self.moduli}")
        self.order = prod(self.moduli, start=1)
        self.elements: List[Tuple[int, ...]] = list(
            product(*(range(m) for m in self.moduli))
        )
        strides = []
        step = 1
        for m in reversed(self.moduli):
            strides.append(step)
            step *= m
        self.strides: Tuple[int, ...] = tuple(reversed(strides))
        self.full_mask = (1 << self.order) - 1
        self.prime_exponents: Dict[int, int] = {}
        for m in self.moduli:
            for p, e in factorint(m).items():
                self.prime_exponents[p] = max(self.prime_exponents.get(p, 0), e)
        self._shift_masks = [self._coordinate_masks(j) for j in range(len(self.moduli))]
        self._fibers: Dict[Tuple[int, int], Dict[int, int]] = {}
        self._preimages: Dict[Tuple[int, int, int], int] = {}

    def __repr__(self):
        inner = " x ".join(f"Z{m}" for m in self.moduli) or "1"
        return f"ExplicitGroup({inner})"

    def _coordinate_masks(self, j: int) -> List[Tuple[int, int]]:
        """For each shift k, masks of elements whose j-th coordinate stays below m_j and wraps."""
        m = self.moduli[j]
        masks = [(0, 0)]
        for k in range(1, m):
            low = high = 0
            for index, x in enumerate(self.elements):
                if x[j] < m - k:
                    low |= 1 << index
                else:
                    high |= 1 << index
            masks.append((low, high))
        return masks

    def index_of(self, x: Sequence[int]) -> int:
        return sum(xi * s for xi, s in zip(x, self.strides))

    def add(self, i: int, j: int) -> int:
        x, y = self.elements[i], self.elements[j]
        return self.index_of([(a + b) % m for a, b, m in zip(x, y, self.moduli)])

    def multiple(self, i: int, c: int) -> int:
        return self.index_of([(c * a) % m for a, m in zip(self.elements[i], self.moduli)])

    def element_order(self, i: int) -> int:
        order = 1
        for a, m in zip(self.elements[i], self.moduli):
            k = m // gcd(a, m)
            order = order * k // gcd(order, k)
        return order

    def translate(self, mask: int, i: int) -> int:
        """The set mask + x for the element with index i."""
        for j, (k, m, s) in enumerate(zip(self.elements[i], self.moduli, self.strides)):
            if k == 0:
                continue
            low, high = self._shift_masks[j][k]
            mask = ((mask & low) << (k * s)) | ((mask & high) >> ((m - k) * s))
        return mask

    def cyclic_mask(self, i: int) -> int:
        mask, x = 1, i
        while x != 0:
            mask |= 1 << x
            x = self.add(x, i)
        return mask

    def join_cyclic(self, mask: int, i: int) -> int:
        """The subgroup H + <x> for a subgroup mask H and element index i."""
        joined = coset = mask
        x = i
        while not (mask >> x) & 1:
            coset = self.translate(coset, i)
            joined |= coset
            x = self.add(x, i)
        return joined

    def preimage(self, mask: int, p: int, k: int) -> int:
        """{x : p^k x in H} for a subgroup mask H."""
        key = (mask, p, k)
        cached = self._preimages.get(key)
        if cached is not None:
            return cached
        fibers = self._fibers.get((p, k))
        if fibers is None:
            fibers = defaultdict(int)
            for index in range(self.order):
                fibers[self.multiple(index, p**k)] |= 1 << index
            fibers = self._fibers[(p, k)] = dict(fibers)
        result = 0
        for h in iter_bits(mask):
            result |= fibers.get(h, 0)
        self._preimages[key] = result
        return result


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a bit set over element indices of its group."""

    mask: int

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def members(self) -> List[int]:
        return list(iter_bits(self.mask))

    def __contains__(self, index: int) -> bool:
        return bool((self.mask >> index) & 1)

    def issubset(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0


@dataclass(eq=False)
class SubgroupLattice:
    """
    Every subgroup of ``group``, sorted by (order, mask): index 0 is the trivial
    subgroup and the last index the whole group. ``meet_table`` and
    ``join_table`` are read-only index matrices.
    """

    group: ExplicitGroup
    subgroups: List[Subgroup]
    index: Dict[int, int]
    meet_table: np.ndarray
    join_table: np.ndarray
    generators: List[Tuple[int, ...]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.subgroups) - 1

    def leq(self, i: int, j: int) -> bool:
        return self.subgroups[i].issubset(self.subgroups[j])

    def meet(self, i: int, j: int) -> int:
        return int(self.meet_table[i, j])

    def join(self, i: int, j: int) -> int:
        return int(self.join_table[i, j])

    def order_counts(self) -> Dict[int, int]:
        """Number of subgroups of each order."""
        return dict(sorted(Counter(s.order for s in self.subgroups).items()))


def build_group(t: GroupType, cap: int = DEFAULT_ORACLE_CAP) -> ExplicitGroup:
    """
    Materialise a group of type ``t``.

    Raises:
        OracleScaleExceeded: |t| is above ``cap``.
    """
    if t.order > cap:
        logging.info(f"Refusing to build a group of order {t.order} (cap {cap})")
        raise OracleScaleExceeded(t.order, cap)
    return ExplicitGroup(t.moduli())


def enumerate_subgroups(g: ExplicitGroup) -> SubgroupLattice:
    """
    Find every subgroup of ``g`` and fill the meet and join tables.

    Seeds are the cyclic subgroups; each round joins the newly found subgroups
    with every cyclic subgroup until no new subgroup appears.
    """
    started = time.perf_counter()

    cyclic_generator: Dict[int, int] = {}
    for i in range(1, g.order):
        cyclic_generator.setdefault(g.cyclic_mask(i), i)
    cyclics = list(cyclic_generator.items())

    masks: List[int] = [1]
    gens: List[Tuple[int, ...]] = [()]
    found: Dict[int, int] = {1: 0}
    for c, (mask, _) in enumerate(cyclics):
        found[mask] = len(masks)
        masks.append(mask)
        gens.append((c,))

    join_with_cyclic: List[Optional[List[int]]] = [None] * len(masks)
    frontier = list(range(len(masks)))
    while frontier:
        discovered = []
        for i in frontier:
            row = []
            base = masks[i]
            for c, (cmask, generator) in enumerate(cyclics):
                if cmask & ~base == 0:
                    row.append(i)
                    continue
                joined = g.join_cyclic(base, generator)
                j = found.get(joined)
                if j is None:
                    j = found[joined] = len(masks)
                    masks.append(joined)
                    gens.append(gens[i] + (c,))
                    join_with_cyclic.append(None)
                    discovered.append(j)
                row.append(j)
            join_with_cyclic[i] = row
        frontier = discovered

    order = sorted(range(len(masks)), key=lambda i: (masks[i].bit_count(), masks[i]))
    rank = {old: new for new, old in enumerate(order)}
    subgroups = [Subgroup(masks[old]) for old in order]
    generators = [gens[old] for old in order]
    steps = [[rank[j] for j in join_with_cyclic[old]] for old in order]
    index = {s.mask: i for i, s in enumerate(subgroups)}

    n = len(subgroups)
    meet_table = np.empty((n, n), dtype=np.int32)
    join_table = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(subgroups):
        meet_table[i, :] = [index[a.mask & b.mask] for b in subgroups]
        row = []
        for j in range(n):
            k = i
            for c in generators[j]:
                k = steps[k][c]
            row.append(k)
        join_table[i, :] = row
    meet_table.flags.writeable = False
    join_table.flags.writeable = False

    logging.info(
        f"Enumerated {n} subgroups of {g} ({len(cyclics)} cyclic) "
        f"in {time.perf_counter() - started:.2f}s"
    )
    return SubgroupLattice(g, subgroups, index, meet_table, join_table, generators)


@lru_cache(maxsize=32)
def lattice_for(t: GroupType, cap: int = DEFAULT_ORACLE_CAP) -> SubgroupLattice:
    """Build and enumerate the group of type ``t``; cached per (type, cap)."""
    return enumerate_subgroups(build_group(t, cap))


def is_closed(g: ExplicitGroup, s: Subgroup) -> bool:
    members = s.members()
    return 0 in s and all(g.add(x, y) in s for x in members for y in members)


def quotient_type(g: ExplicitGroup, h: Subgroup, k: Subgroup) -> GroupType:
    """
    Type of the section K/H.

    For each prime p, t_k = |{x in K : p^k x in H}| / |H| counts the cosets of
    p^k-torsion, and the number of cyclic factors of order >= p^k is
    log_p(t_k / t_{k-1}).

    Raises:
        ContainmentError: H is not contained in K.
    """
    if not h.issubset(k):
        raise ContainmentError("section K/H requires H to be a subgroup of K")
    h_order = h.order
    factors = []
    for p, top in g.prime_exponents.items():
        previous = 1
        at_least = []
        for e in range(1, top + 1):
            torsion = (k.mask & g.preimage(h.mask, p, e)).bit_count() // h_order
            at_least.append(exact_log(torsion // previous, p))
            previous = torsion
        at_least.append(0)
        for e in range(1, top + 1):
            factors.extend([(p, e)] * (at_least[e - 1] - at_least[e]))
    return canonicalize(factors)


def subgroup_type(g: ExplicitGroup, s: Subgroup) -> GroupType:
    return quotient_type(g, Subgroup(1), s)


@dataclass
class SectionCensus:
    """n_S(G) for every section type S, the trivial type included."""

    counts: Dict[GroupType, Count]

    def __getitem__(self, s: GroupType) -> Count:
        return self.counts.get(s, 0)

    def total(self) -> Count:
        return sum(self.counts.values())


def section_census(lat: SubgroupLattice) -> SectionCensus:
    """Bucket every pair H <= K of the lattice by the type of K/H."""
    g = lat.group
    counts: Counter = Counter()
    for k in lat.subgroups:
        for h in lat.subgroups:
            if h.order > k.order:
                break
            if h.issubset(k):
                counts[quotient_type(g, h, k)] += 1
    return SectionCensus(dict(counts))


def subgroup_types(lat: SubgroupLattice) -> List[GroupType]:
    return [subgroup_type(lat.group, s) for s in lat.subgroups]


def quotient_types(lat: SubgroupLattice) -> List[GroupType]:
    whole = lat.subgroups[lat.top]
    return [quotient_type(lat.group, s, whole) for s in lat.subgroups]


def subgroup_type_counts(lat: SubgroupLattice) -> Dict[GroupType, int]:
    return dict(Counter(subgroup_types(lat)))


def quotient_type_counts(lat: SubgroupLattice) -> Dict[GroupType, int]:
    return dict(Counter(quotient_types(lat)))


def overgroup_count(lat: SubgroupLattice, i: int) -> int:
    """|L(G/T)| for the subgroup T at index i, read off as the number of subgroups above T."""
    t = lat.subgroups[i]
    return sum(1 for s in lat.subgroups[i:] if t.issubset(s))


@dataclass(frozen=True)
class SectionClass:
    """Subgroups T of a fixed type sharing the quotient type G/T."""

    quotient: GroupType
    subgroups: int
    quotient_lattice_size: int

    @property
    def sections(self) -> int:
        return self.subgroups * self.quotient_lattice_size


def section_classes(lat: SubgroupLattice, s: GroupType) -> List[SectionClass]:
    """Split the subgroups isomorphic to ``s`` by quotient type, as in n_S(G) = sum |L(G/T)|."""
    whole = lat.subgroups[lat.top]
    grouped: Dict[GroupType, List[int]] = defaultdict(list)
    for i, t in enumerate(lat.subgroups):
        if subgroup_type(lat.group, t) == s:
            grouped[quotient_type(lat.group, t, whole)].append(overgroup_count(lat, i))
    classes = []
    for quotient, sizes in grouped.items():
        assert len(set(sizes)) == 1, "isomorphic quotients with different lattice sizes"
        classes.append(SectionClass(quotient, len(sizes), sizes[0]))
    return sorted(classes, key=lambda c: -c.subgroups)


def _incomparable_pair_keys(lat: SubgroupLattice) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index pairs (i < j) of incomparable subgroups and their meet*n + join keys."""
    n = len(lat)
    rows, cols = np.triu_indices(n, 1)
    meets = lat.meet_table[rows, cols]
    joins = lat.join_table[rows, cols]
    incomparable = (meets != rows) & (meets != cols)
    rows, cols = rows[incomparable], cols[incomparable]
    keys = meets[incomparable].astype(np.int64) * n + joins[incomparable]
    return rows, cols, keys


def _buckets(lat: SubgroupLattice, key: Optional[int] = None) -> Iterator[List[Tuple[int, int]]]:
    """Edge lists of the pair graphs with at least three edges, one per (meet, join) key."""
    rows, cols, keys = _incomparable_pair_keys(lat)
    if key is not None:
        selected = keys == key
        rows, cols, keys = rows[selected], cols[selected], keys[selected]
    if len(keys) == 0:
        return
    by_key = np.argsort(keys, kind="stable")
    _, starts, sizes = np.unique(keys[by_key], return_index=True, return_counts=True)
    for start, size in zip(starts.tolist(), sizes.tolist()):
        if size < 3:
            continue
        chosen = by_key[start:start + size]
        yield list(zip(rows[chosen].tolist(), cols[chosen].tolist()))


def _forward_adjacency(edges: List[Tuple[int, int]]) -> Dict[int, int]:
    forward: Dict[int, int] = defaultdict(int)
    for u, v in edges:
        forward[u] |= 1 << v
    return forward


def _count_triangles(edges: List[Tuple[int, int]]) -> int:
    forward = _forward_adjacency(edges)
    return sum((forward[u] & forward.get(v, 0)).bit_count() for u, v in edges)


def _triangles(edges: List[Tuple[int, int]]) -> Iterator[Tuple[int, int, int]]:
    forward = _forward_adjacency(edges)
    for u, v in edges:
        for w in iter_bits(forward[u] & forward.get(v, 0)):
            yield (u, v, w)


def count_diamonds(lat: SubgroupLattice) -> Count:
    """Number of M5 sublattices: triangles in the per-(meet, join) pair graphs."""
    started = time.perf_counter()
    total = sum(_count_triangles(edges) for edges in _buckets(lat))
    logging.info(
        f"Counted {total} diamonds in {lat.group} in {time.perf_counter() - started:.2f}s"
    )
    return total


def count_primary_diamonds(lat: SubgroupLattice) -> Count:
    """Diamonds whose meet is the trivial subgroup and whose join is the whole group."""
    key = lat.bottom * len(lat) + lat.top
    return sum(_count_triangles(edges) for edges in _buckets(lat, key))


def iter_diamonds(lat: SubgroupLattice, primary_only: bool = False) -> Iterator[Tuple[int, int, int]]:
    """Yield every diamond once as a sorted triple of subgroup indices."""
    key = lat.bottom * len(lat) + lat.top if primary_only else None
    for edges in _buckets(lat, key):
        yield from _triangles(edges)


def naive_count_diamonds(lat: SubgroupLattice) -> Count:
    """Reference O(|L|^3) scan over all triples."""
    meet, join = lat.meet_table.tolist(), lat.join_table.tolist()
    total = 0
    for a, b, c in combinations(range(len(lat)), 3):
        m = meet[a][b]
        if m != meet[b][c] or m != meet[a][c]:
            continue
        j = join[a][b]
        if j == join[b][c] == join[a][c]:
            total += 1
    return total


def brute_force_aut_order(g: ExplicitGroup, cap: int = DEFAULT_AUT_ORACLE_CAP) -> Count:
    """
    Count automorphisms by choosing images of the standard generators e_1..e_r.

    The image y_j must satisfy m_j y_j = 0, and the partial map stays injective
    exactly when each new image multiplies the order of the image subgroup by
    m_j. How many ways remain depends only on that image subgroup, so the search
    is memoised on it.

    Raises:
        OracleScaleExceeded: |g| is above ``cap``.
    """
    if g.order > cap:
        raise OracleScaleExceeded(g.order, cap, what="automorphism oracle")
    r = len(g.moduli)
    candidates = [
        [y for y in range(g.order) if g.multiple(y, m) == 0] for m in g.moduli
    ]
    memo: Dict[Tuple[int, int], int] = {}

    def extensions(j: int, image: int) -> int:
        if j == r:
            return 1
        key = (j, image)
        if key in memo:
            return memo[key]
        target = image.bit_count() * g.moduli[j]
        total = 0
        for y in candidates[j]:
            if (image >> y) & 1:
                continue
            joined = g.join_cyclic(image, y)
            if joined.bit_count() == target:
                total += extensions(j + 1, joined)
        memo[key] = total
        return total

    return extensions(0, 1)


def dump_lattice(lat: SubgroupLattice) -> Iterator[str]:
    """One tab-separated line per subgroup: order, member indices, type."""
    for s in lat.subgroups:
        members = ",".join(str(x) for x in s.members())
        yield f"{s.order}\t{members}\t{format_group_type(subgroup_type(lat.group, s))}"
