"""
Closed formulas for dm(G), the number of diamond (M5) sublattices of L(G).

For a p-group the count is a sum over section types S x S of
n_{S x S}(G) * |Aut(S x S)| / (6 |Aut(S)|). Elementary abelian and rank 2
groups have closed forms for the section numbers; other p-groups take them
from the oracle census. Coprime components combine through their lattice sizes.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import prod
from typing import Dict, List, Mapping, Optional, Tuple, Union

from sympy import Rational, binomial

from ..config import EngineConfig
from ..utils.errors import DomainError, MethodUnavailable, OracleScaleExceeded
from .abelian import (
    Count,
    GroupType,
    PPartition,
    group_aut_order,
    f_p,
    gaussian_subgroup_count,
    require_prime,
    subgroup_lattice_size_elementary,
    subgroup_lattice_size_rank2,
)
from .oracle import count_diamonds, lattice_for, section_census


class Method(str, Enum):
    ELEMENTARY = "elementary"
    RANK2 = "rank2"
    COROLLARY = "corollary"
    MASTER_SUM = "master-sum"
    ORACLE = "oracle"
    MULTIPRIME = "multiprime-combination"


@dataclass(frozen=True)
class ComponentResult:
    """dm and |L| of one primary component, with the methods that produced them."""

    partition: PPartition
    dm: Count
    method: Method
    lattice_size: Count
    lattice_method: Method


@dataclass(frozen=True)
class DmResult:
    value: Count
    method: Method
    breakdown: Tuple[ComponentResult, ...] = ()


def _as_group_type(s: Union[PPartition, GroupType, None]) -> GroupType:
    if isinstance(s, PPartition):
        return GroupType.from_partition(s)
    if s is None or s.is_trivial:
        raise DomainError("a trivial section has no primary diamonds")
    return s


def _exact_div(numerator: int, denominator: int, what: str) -> Count:
    quotient, remainder = divmod(numerator, denominator)
    assert remainder == 0, f"{what}: {numerator} is not divisible by {denominator}"
    return quotient


def primary_diamond_count(s: Union[PPartition, GroupType]) -> Count:
    """
    Primary diamonds of S x S: |Aut(S x S)| / (6 |Aut(S)|).

    Coprime components multiply through Aut, so S need not be a p-group.
    """
    s = _as_group_type(s)
    doubled = GroupType(tuple(c.doubled() for c in s.components))
    return _exact_div(group_aut_order(doubled), 6 * group_aut_order(s), "primary diamonds")


def elementary_primary_ratio(i: int, p: int) -> Count:
    """
    Primary diamonds of Z_p^{2i}: (1/6) p^{i(3i-1)/2} prod_{k=i+1}^{2i} (p^k - 1).

    Equal to |Aut(Z_p^{2i})| / (6 |Aut(Z_p^i)|).
    """
    if i < 1:
        raise DomainError(f"section rank index must be >= 1, got {i}")
    numerator = p ** (i * (3 * i - 1) // 2) * prod(p**k - 1 for k in range(i + 1, 2 * i + 1))
    return _exact_div(numerator, 6, "elementary ratio")


def rank2_primary_ratio(i: int, p: int) -> Count:
    """Primary diamonds of Z_{p^i} x Z_{p^i}: p^{3i-2} (p^2 - 1) / 6."""
    if i < 1:
        raise DomainError(f"section exponent must be >= 1, got {i}")
    return _exact_div(p ** (3 * i - 2) * (p * p - 1), 6, "rank 2 ratio")


def halve(t: GroupType) -> Optional[GroupType]:
    """S when t is the type of S x S for a nontrivial S, else None."""
    if t.is_trivial:
        return None
    halves = []
    for s in t.components:
        exps = s.exponents
        if s.rank % 2 or any(exps[k] != exps[k + 1] for k in range(0, s.rank, 2)):
            return None
        halves.append(PPartition(s.p, exps[::2]))
    return GroupType(tuple(halves))


def elementary_census(n: int, p: int) -> Dict[GroupType, Count]:
    """n_{S x S}(Z_p^n) for S = Z_p^i: a_{n,p}(2i) |L(Z_p^{n-2i})|."""
    return {
        GroupType.of({p: (1,) * (2 * i)}): gaussian_subgroup_count(n, 2 * i, p)
        * subgroup_lattice_size_elementary(n - 2 * i, p)
        for i in range(1, n // 2 + 1)
    }


def rank2_census(alpha1: int, alpha2: int, p: int) -> Dict[GroupType, Count]:
    """n_{S x S} for S = Z_{p^i}: one subgroup Z_{p^i}^2 with quotient Z_{p^{a1-i}} x Z_{p^{a2-i}}."""
    return {
        GroupType.of({p: (i, i)}): subgroup_lattice_size_rank2(alpha1 - i, alpha2 - i, p)
        for i in range(1, alpha1 + 1)
    }


def _rank2_exponents(s: PPartition) -> Tuple[int, int]:
    return (0, s.exponents[0]) if s.rank == 1 else s.exponents


def census_for(s: PPartition, config: Optional[EngineConfig] = None) -> Mapping[GroupType, Count]:
    """
    Section numbers for a p-group: closed forms when they exist, oracle census otherwise.

    Raises:
        MethodUnavailable: the oracle is needed and |s| is above the cap.
    """
    config = config or EngineConfig()
    if s.is_elementary:
        return elementary_census(s.rank, s.p)
    if s.rank <= 2:
        return rank2_census(*_rank2_exponents(s), s.p)
    return oracle_census(s, config)


def oracle_census(s: PPartition, config: Optional[EngineConfig] = None) -> Mapping[GroupType, Count]:
    config = config or EngineConfig()
    try:
        return section_census(lattice_for(GroupType.from_partition(s), config.oracle_cap)).counts
    except OracleScaleExceeded as e:
        raise MethodUnavailable(
            f"section census of {s.p}-group {s.exponents} needs the oracle, "
            f"but its order {s.order} is above the cap {config.oracle_cap}"
        ) from e


@dataclass(frozen=True)
class DiamondClass:
    """Diamonds that are primary in sections of one type S x S."""

    section: GroupType
    half: GroupType
    sections: Count
    per_section: Count

    @property
    def subtotal(self) -> Count:
        return self.sections * self.per_section


def diamond_classes(census: Mapping[GroupType, Count]) -> List[DiamondClass]:
    """The S x S entries of a census with their primary-diamond multipliers, by rank and then order."""
    classes = []
    for section, count in census.items():
        half = halve(section)
        if half is None or count == 0:
            continue
        classes.append(DiamondClass(section, half, count, primary_diamond_count(half)))
    return sorted(
        classes,
        key=lambda c: (max(s.rank for s in c.section.components), c.section.order, c.section.moduli()),
    )


def dm_master_sum(
    s: PPartition,
    census_source: Optional[Mapping[GroupType, Count]] = None,
    config: Optional[EngineConfig] = None,
) -> Count:
    """
    Sum over nontrivial S of n_{S x S}(G) times the primary diamonds of S x S.

    ``census_source`` maps section types to n_S(G); only the S x S entries are
    read. Without one, ``census_for`` supplies it.
    """
    census = census_source if census_source is not None else census_for(s, config)
    return sum(c.subtotal for c in diamond_classes(census) if c.half.primes == (s.p,))


def dm_elementary(n: int, p: int) -> Count:
    """dm(Z_p^n) by the elementary abelian closed form."""
    if n < 0:
        raise DomainError(f"negative rank {n}")
    require_prime(p)
    total = sum(
        p ** (i * (3 * i - 1) // 2)
        * gaussian_subgroup_count(n, 2 * i, p)
        * subgroup_lattice_size_elementary(n - 2 * i, p)
        * prod(p**k - 1 for k in range(i + 1, 2 * i + 1))
        for i in range(1, n // 2 + 1)
    )
    return _exact_div(total, 6, f"dm(Z_{p}^{n})")


def dm_rank2(alpha1: int, alpha2: int, p: int) -> Count:
    """dm(Z_{p^a1} x Z_{p^a2}) = (p+1)/(6(p-1)) sum_{i=1}^{a1} p^{3i-2} f_p(a1-i, a2-i)."""
    if not 0 <= alpha1 <= alpha2:
        raise DomainError(f"rank 2 exponents must satisfy 0 <= a1 <= a2, got ({alpha1}, {alpha2})")
    require_prime(p)
    inner = sum(p ** (3 * i - 2) * f_p(alpha1 - i, alpha2 - i, p) for i in range(1, alpha1 + 1))
    value = Rational(p + 1, 6 * (p - 1)) * inner
    assert value.q == 1, f"dm(Z{p**alpha1} x Z{p**alpha2}) came out as {value}"
    return int(value.p)


def dm_corollary_shortcuts(alpha1: int, alpha2: int, p: int) -> Optional[Count]:
    """
    Closed forms for dm(Z_p x Z_{p^n}) = n C(p+1, 3) and for dm(Z_{2^n} x Z_{2^n}).

    Returns None when neither shape applies.
    """
    if alpha1 == 1 and alpha2 >= 1:
        return alpha2 * int(binomial(p + 1, 3))
    if p == 2 and alpha1 == alpha2 >= 1:
        n = alpha1
        return _exact_div(3 * 2 ** (3 * n + 2) - 49 * 2**n + 14 * n + 37, 49, "corollary b")
    return None


def dm_multiprime(
    t: GroupType,
    per_prime_dm: Mapping[int, Count],
    per_prime_L: Mapping[int, Count],
) -> Count:
    """
    Combine coprime components: sum over nonempty prime subsets T of
    6^{|T|-1} * prod_{p in T} dm(G_p) * prod_{p not in T} |L(G_p)|.
    """
    primes = t.primes
    missing = [p for p in primes if p not in per_prime_dm or p not in per_prime_L]
    if missing:
        raise DomainError(f"missing dm or |L| data for primes {missing}")
    total = 0
    for size in range(1, len(primes) + 1):
        for chosen in combinations(primes, size):
            term = 6 ** (size - 1)
            for p in primes:
                term *= per_prime_dm[p] if p in chosen else per_prime_L[p]
            total += term
    return total


def component_lattice_size(s: PPartition, config: Optional[EngineConfig] = None) -> Tuple[Count, Method]:
    """|L| of a p-group by closed form, or by oracle enumeration within the cap."""
    config = config or EngineConfig()
    if s.is_elementary:
        return subgroup_lattice_size_elementary(s.rank, s.p), Method.ELEMENTARY
    if s.rank <= 2:
        return subgroup_lattice_size_rank2(*_rank2_exponents(s), s.p), Method.RANK2
    try:
        return len(lattice_for(GroupType.from_partition(s), config.oracle_cap)), Method.ORACLE
    except OracleScaleExceeded as e:
        raise MethodUnavailable(
            f"|L| of {s.p}-group {s.exponents} has no closed form and its order "
            f"{s.order} is above the oracle cap {config.oracle_cap}"
        ) from e


def lattice_size(t: GroupType, config: Optional[EngineConfig] = None) -> Count:
    """|L(G)| as the product of the component lattice sizes."""
    return prod((component_lattice_size(s, config)[0] for s in t.components), start=1)


def _component_dm(s: PPartition, config: EngineConfig, allow_oracle: bool) -> Tuple[Count, Method]:
    if s.is_elementary:
        return dm_elementary(s.rank, s.p), Method.ELEMENTARY
    if s.rank <= 2:
        return dm_rank2(*_rank2_exponents(s), s.p), Method.RANK2
    try:
        return dm_master_sum(s, oracle_census(s, config)), Method.MASTER_SUM
    except MethodUnavailable:
        if not allow_oracle:
            raise
    try:
        return count_diamonds(lattice_for(GroupType.from_partition(s), config.oracle_cap)), Method.ORACLE
    except OracleScaleExceeded as e:
        raise MethodUnavailable(
            f"no method for the {s.p}-component {s.exponents}: order {s.order} "
            f"is above the oracle cap {config.oracle_cap}"
        ) from e


def dm_oracle(t: GroupType, config: Optional[EngineConfig] = None) -> Count:
    """Count diamonds of the whole explicit group, all primes at once."""
    config = config or EngineConfig()
    try:
        return count_diamonds(lattice_for(t, config.oracle_cap))
    except OracleScaleExceeded as e:
        raise MethodUnavailable(
            f"oracle method unavailable: order {t.order} is above the cap {config.oracle_cap}"
        ) from e


def dm(t: GroupType, config: Optional[EngineConfig] = None, method: str = "auto") -> DmResult:
    """
    dm(G) by the cheapest method that applies.

    ``method`` is ``auto`` (formulas, oracle as a last resort), ``formula``
    (never count diamonds directly) or ``oracle`` (count on the explicit group).

    Raises:
        MethodUnavailable: naming the component and cap that block every method.
    """
    config = config or EngineConfig()
    if method == "oracle":
        return DmResult(dm_oracle(t, config), Method.ORACLE)
    if method not in ("auto", "formula"):
        raise DomainError(f"unknown method {method!r}")

    breakdown = []
    for s in t.components:
        value, used = _component_dm(s, config, allow_oracle=method == "auto")
        size, size_method = component_lattice_size(s, config)
        logging.info(f"dm of {s.p}-component {s.exponents} = {value} via {used.value}")
        breakdown.append(ComponentResult(s, value, used, size, size_method))

    if not breakdown:
        return DmResult(0, Method.ELEMENTARY)
    if len(breakdown) == 1:
        return DmResult(breakdown[0].dm, breakdown[0].method, tuple(breakdown))
    value = dm_multiprime(
        t,
        {c.partition.p: c.dm for c in breakdown},
        {c.partition.p: c.lattice_size for c in breakdown},
    )
    return DmResult(value, Method.MULTIPRIME, tuple(breakdown))


def component_method_values(s: PPartition, config: Optional[EngineConfig] = None) -> Dict[str, Count]:
    """Every formula method that applies to one p-group, keyed by method name."""
    config = config or EngineConfig()
    values: Dict[str, Count] = {}
    if s.is_elementary:
        values[Method.ELEMENTARY.value] = dm_elementary(s.rank, s.p)
    if s.rank <= 2:
        a1, a2 = _rank2_exponents(s)
        values[Method.RANK2.value] = dm_rank2(a1, a2, s.p)
        shortcut = dm_corollary_shortcuts(a1, a2, s.p)
        if shortcut is not None:
            values[Method.COROLLARY.value] = shortcut
    if s.is_elementary or s.rank <= 2:
        values[f"{Method.MASTER_SUM.value} (closed-form census)"] = dm_master_sum(s, census_for(s, config))
    try:
        values[f"{Method.MASTER_SUM.value} (oracle census)"] = dm_master_sum(s, oracle_census(s, config))
    except MethodUnavailable as e:
        logging.info(f"Skipping oracle census: {e}")
    return values
