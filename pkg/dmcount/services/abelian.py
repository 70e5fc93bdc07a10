"""
Isomorphism types of finite abelian groups and the closed-form counts built on them.

A finite abelian p-group is described by a ``PPartition`` (the prime and the
sorted exponents of its cyclic factors); an arbitrary finite abelian group by a
``GroupType``, one ``PPartition`` per prime dividing its order. Every count is a
Python ``int`` so nothing here ever overflows.
"""
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from sympy import isprime
from sympy.utilities.iterables import partitions

from ..utils.errors import DomainError, NotPrimeError

# Arbitrary-precision nonnegative integer.
Count = int

# Primality is only decided for moduli below this bound.
MAX_PRIME = 2**64


@lru_cache(maxsize=None)
def require_prime(p: int) -> int:
    """Return ``p`` unchanged if it is a prime below 2**64, raise otherwise."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise NotPrimeError(p)
    if p >= MAX_PRIME:
        raise DomainError(f"prime {p} is beyond the supported 64-bit range")
    if not isprime(p):
        raise NotPrimeError(p)
    return p


@dataclass(frozen=True, order=True)
class PPartition:
    """Type of a nontrivial finite abelian p-group: Z_{p^a1} x ... x Z_{p^an}, a1 <= ... <= an."""

    p: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        require_prime(self.p)
        exponents = tuple(self.exponents)
        if not exponents:
            raise DomainError("a p-partition needs at least one exponent")
        if any(not isinstance(a, int) or a < 1 for a in exponents):
            raise DomainError(f"exponents must be positive integers, got {exponents}")
        if list(exponents) != sorted(exponents):
            raise DomainError(f"exponents must be nondecreasing, got {exponents}")
        object.__setattr__(self, "exponents", exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> Count:
        return self.p ** sum(self.exponents)

    @property
    def is_elementary(self) -> bool:
        return all(a == 1 for a in self.exponents)

    @property
    def is_cyclic(self) -> bool:
        return self.rank == 1

    def doubled(self) -> "PPartition":
        """The type of S x S: every exponent appears twice."""
        return PPartition(self.p, tuple(sorted(self.exponents + self.exponents)))

    def moduli(self) -> List[int]:
        return [self.p**a for a in self.exponents]

    def lex_key(self) -> Tuple[int, ...]:
        """Exponents written largest first, the usual order for comparing partitions."""
        return tuple(reversed(self.exponents))


@dataclass(frozen=True)
class GroupType:
    """Type of a finite abelian group: at most one PPartition per prime, primes increasing."""

    components: Tuple[PPartition, ...] = ()

    def __post_init__(self):
        components = tuple(sorted(self.components, key=lambda c: c.p))
        primes = [c.p for c in components]
        if len(set(primes)) != len(primes):
            raise DomainError(f"two components share a prime: {primes}")
        object.__setattr__(self, "components", components)

    @classmethod
    def of(cls, mapping: Mapping[int, Sequence[int]]) -> "GroupType":
        """Build from ``{p: exponents}``; empty exponent lists are dropped."""
        return cls(
            tuple(
                PPartition(p, tuple(sorted(exps)))
                for p, exps in mapping.items()
                if len(exps) > 0
            )
        )

    @classmethod
    def from_partition(cls, s: PPartition) -> "GroupType":
        return cls((s,))

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(c.p for c in self.components)

    def __getitem__(self, p: int) -> PPartition:
        for c in self.components:
            if c.p == p:
                return c
        raise KeyError(p)

    def __contains__(self, p) -> bool:
        return p in self.primes

    def __len__(self) -> int:
        return len(self.components)

    def items(self) -> Iterator[Tuple[int, PPartition]]:
        return ((c.p, c) for c in self.components)

    def as_dict(self) -> Dict[int, Tuple[int, ...]]:
        return {c.p: c.exponents for c in self.components}

    @property
    def is_trivial(self) -> bool:
        return not self.components

    @property
    def is_p_group(self) -> bool:
        return len(self.components) == 1

    @property
    def is_cyclic(self) -> bool:
        return all(c.is_cyclic for c in self.components)

    @property
    def order(self) -> Count:
        return group_order(self)

    def moduli(self) -> List[int]:
        """Orders of the prime-power cyclic factors, primes increasing, exponents increasing."""
        return [m for c in self.components for m in c.moduli()]


def canonicalize(raw_factors: Iterable[Tuple[int, int]]) -> GroupType:
    """
    Normalise a list of cyclic factors Z_{p^e}, given as ``(p, e)`` pairs.

    Factors with e = 0 vanish, exponents are grouped by prime and sorted.

    Raises:
        NotPrimeError: a base is not a prime.
        DomainError: an exponent is negative.
    """
    grouped: Dict[int, List[int]] = {}
    for p, e in raw_factors:
        require_prime(p)
        if e < 0:
            raise DomainError(f"negative exponent {e} for prime {p}")
        if e == 0:
            continue
        grouped.setdefault(p, []).append(e)
    return GroupType.of(grouped)


def group_order(t: GroupType) -> Count:
    return prod((c.order for c in t.components), start=1)


def aut_order(s: PPartition) -> Count:
    """
    Order of Aut(G) for G = Z_{p^a1} x ... x Z_{p^an}, a1 <= ... <= an.

    With d_k the last and c_k the first (1-based) position holding the value a_k,
    |Aut(G)| = prod (p^{d_k} - p^{k-1}) * prod p^{a_k (n - d_k)} * prod p^{(a_k - 1)(n - c_k + 1)}.
    """
    p, exps, n = s.p, s.exponents, s.rank
    last = [bisect_right(exps, a) for a in exps]
    first = [bisect_left(exps, a) + 1 for a in exps]
    units = prod(p ** last[k] - p**k for k in range(n))
    exponent = sum(a * (n - d) for a, d in zip(exps, last))
    exponent += sum((a - 1) * (n - c + 1) for a, c in zip(exps, first))
    return units * p**exponent


def group_aut_order(t: GroupType) -> Count:
    """|Aut| of a finite abelian group: the product over its primary components."""
    return prod((aut_order(c) for c in t.components), start=1)


def elementary_aut_order(n: int, p: int) -> Count:
    """|Aut(Z_p^n)| = |GL(n, p)| = p^{n(n-1)/2} prod_{i=1}^{n} (p^i - 1)."""
    return p ** (n * (n - 1) // 2) * prod((p**i - 1 for i in range(1, n + 1)), start=1)


def gaussian_subgroup_count(n: int, i: int, p: int) -> Count:
    """
    a_{n,p}(i): the number of subgroups of order p^i in Z_p^n.

    Built up one factor at a time; every intermediate value is itself a
    Gaussian binomial, so each floor division is exact.
    """
    if n < 0 or not 0 <= i <= n:
        raise DomainError(f"index {i} out of range for rank {n}")
    require_prime(p)
    count = 1
    for k in range(i):
        count = count * (p ** (n - k) - 1) // (p ** (k + 1) - 1)
    return count


def subgroup_lattice_size_elementary(n: int, p: int) -> Count:
    """|L(Z_p^n)|, the sum of a_{n,p}(j) over j = 0..n."""
    if n < 0:
        raise DomainError(f"negative rank {n}")
    return sum(gaussian_subgroup_count(n, j, p) for j in range(n + 1))


def f_p(x1: int, x2: int, p: int) -> Count:
    """(p-1)^2 times the number of subgroups of Z_{p^x1} x Z_{p^x2}."""
    if not 0 <= x1 <= x2:
        raise DomainError(f"f_p needs 0 <= x1 <= x2, got ({x1}, {x2})")
    require_prime(p)
    return (
        (x2 - x1 + 1) * p ** (x1 + 2)
        - (x2 - x1 - 1) * p ** (x1 + 1)
        - (x1 + x2 + 3) * p
        + (x1 + x2 + 1)
    )


def subgroup_lattice_size_rank2(alpha1: int, alpha2: int, p: int) -> Count:
    """|L(Z_{p^alpha1} x Z_{p^alpha2})| for 0 <= alpha1 <= alpha2."""
    size, remainder = divmod(f_p(alpha1, alpha2, p), (p - 1) ** 2)
    assert remainder == 0, f"f_{p}({alpha1}, {alpha2}) not divisible by (p-1)^2"
    return size


def iter_p_partitions(p: int, n: int) -> Iterator[PPartition]:
    """Every type of abelian group of order p^n (n >= 1), in no particular order."""
    require_prime(p)
    if n < 1:
        raise DomainError(f"exponent must be positive, got {n}")
    for part in partitions(n):
        exponents = sorted(k for k, mult in part.items() for _ in range(mult))
        yield PPartition(p, tuple(exponents))


def iter_group_types(max_order: int, primes: Sequence[int]) -> Iterator[GroupType]:
    """All group types of order <= max_order whose order only involves ``primes``."""
    primes = sorted(set(primes))

    def extend(index: int, budget: int, acc: Tuple[PPartition, ...]):
        if index == len(primes):
            yield GroupType(acc)
            return
        p = primes[index]
        yield from extend(index + 1, budget, acc)
        n = 1
        while p**n <= budget:
            for s in iter_p_partitions(p, n):
                yield from extend(index + 1, budget // p**n, acc + (s,))
            n += 1

    yield from extend(0, max_order, ())
