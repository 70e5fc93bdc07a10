"""
Command implementations shared by the CLI and the HTTP views.

Each command returns a ``Report``: a JSON-ready payload in which every number
is a decimal string, plus the exit code the CLI should use.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..config import EngineConfig
from ..utils.errors import MethodUnavailable, OracleScaleExceeded
from ..utils.spec_parser import format_group_type, format_partition, parse_group_spec
from .abelian import GroupType, group_aut_order, iter_p_partitions
from .formulas import (
    Method,
    component_method_values,
    diamond_classes,
    dm,
    dm_multiprime,
    dm_oracle,
    lattice_size,
)
from .oracle import (
    brute_force_aut_order,
    build_group,
    count_diamonds,
    dump_lattice,
    iter_diamonds,
    lattice_for,
    section_census,
    section_classes,
    subgroup_type_counts,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNAVAILABLE = 2
EXIT_MISMATCH = 3

# Diamond listings are only produced for groups this small.
LIST_DIAMONDS_MAX_ORDER = 64

# Without --by-type or --dump, the oracle breakdown is skipped above this many subgroups.
BREAKDOWN_MAX_SUBGROUPS = 4096


@dataclass
class Report:
    command: str
    payload: Dict
    exit_code: int = EXIT_OK
    lines: List[str] = field(default_factory=list)


def _header(command: str, text: str, t: GroupType) -> Dict:
    return {
        "command": command,
        "input": text,
        "canonical_type": format_group_type(t),
        "order": str(t.order),
    }


def _timings(started: float) -> Dict[str, str]:
    return {"total_seconds": f"{time.perf_counter() - started:.6f}"}


def _lattice(t: GroupType, config: EngineConfig):
    try:
        return lattice_for(t, config.oracle_cap)
    except OracleScaleExceeded as e:
        raise MethodUnavailable(
            f"oracle needed but the order {t.order} is above the cap {config.oracle_cap}; "
            f"raise it with --oracle-cap"
        ) from e


def cmd_dm(text: str, config: EngineConfig, method: str = "auto", list_diamonds: bool = False) -> Report:
    started = time.perf_counter()
    t = parse_group_spec(text)
    result = dm(t, config, method)
    payload = _header("dm", text, t)
    payload.update(
        {
            "value": str(result.value),
            "method": result.method.value,
            "breakdown": [
                {
                    "prime": str(c.partition.p),
                    "type": format_partition(c.partition),
                    "dm": str(c.dm),
                    "method": c.method.value,
                    "lattice_size": str(c.lattice_size),
                    "lattice_method": c.lattice_method.value,
                }
                for c in result.breakdown
            ],
        }
    )
    if list_diamonds:
        if t.order > LIST_DIAMONDS_MAX_ORDER:
            raise MethodUnavailable(
                f"diamond listing is limited to order {LIST_DIAMONDS_MAX_ORDER}, got {t.order}"
            )
        lat = _lattice(t, config)
        payload["diamonds"] = [
            [[str(m) for m in sorted(lat.subgroups[i].members())] for i in triple] for triple in iter_diamonds(lat)
        ]
    payload["timings"] = _timings(started)
    return Report("dm", payload)


def cmd_verify(text: str, config: EngineConfig) -> Report:
    """Run every applicable method and the oracle; PASS only when all values agree."""
    started = time.perf_counter()
    t = parse_group_spec(text)
    if t.order > config.oracle_cap:
        raise MethodUnavailable(
            f"verify needs the oracle but the order {t.order} is above the cap {config.oracle_cap}"
        )

    dispatched = dm(t, config)
    values: Dict[str, int] = {"dispatcher": dispatched.value}
    if t.is_p_group:
        values.update(component_method_values(t.components[0], config))
    elif len(t) > 1:
        per_dm, per_size = {}, {}
        for s in t.components:
            lat = lattice_for(GroupType.from_partition(s), config.oracle_cap)
            per_dm[s.p] = count_diamonds(lat)
            per_size[s.p] = len(lat)
        values["multiprime (oracle components)"] = dm_multiprime(t, per_dm, per_size)
        values["master-sum (whole-group census)"] = sum(
            c.subtotal for c in diamond_classes(section_census(_lattice(t, config)).counts)
        )
    values[Method.ORACLE.value] = dm_oracle(t, config)

    passed = len(set(values.values())) == 1
    if not passed:
        logging.error(f"Verification mismatch for {format_group_type(t)}: {values}")
    payload = _header("verify", text, t)
    payload.update(
        {
            "values": {name: str(v) for name, v in values.items()},
            "method": dispatched.method.value,
            "verdict": "PASS" if passed else "FAIL",
            "timings": _timings(started),
        }
    )
    return Report("verify", payload, EXIT_OK if passed else EXIT_MISMATCH)


def cmd_sections(text: str, config: EngineConfig) -> Report:
    started = time.perf_counter()
    t = parse_group_spec(text)
    lat = _lattice(t, config)
    census = section_census(lat)
    rows = sorted(census.counts.items(), key=lambda item: (item[0].order, item[0].moduli()))
    classes = diamond_classes(census.counts)

    payload = _header("sections", text, t)
    payload.update(
        {
            "sections": [{"type": format_group_type(s), "count": str(n)} for s, n in rows],
            "diamond_classes": [
                {
                    "section": format_group_type(c.section),
                    "half": format_group_type(c.half),
                    "sections": str(c.sections),
                    "per_section": str(c.per_section),
                    "subtotal": str(c.subtotal),
                    "subgroup_classes": [
                        {
                            "subgroups": str(k.subgroups),
                            "quotient": format_group_type(k.quotient),
                            "quotient_lattice_size": str(k.quotient_lattice_size),
                        }
                        for k in section_classes(lat, c.section)
                    ],
                }
                for c in classes
            ],
            "value": str(sum(c.subtotal for c in classes)),
            "method": Method.MASTER_SUM.value,
            "timings": _timings(started),
        }
    )
    return Report("sections", payload)


def cmd_aut(text: str, config: EngineConfig, brute_force: bool = False) -> Report:
    started = time.perf_counter()
    t = parse_group_spec(text)
    payload = _header("aut", text, t)
    payload["value"] = str(group_aut_order(t))
    payload["method"] = "formula"
    payload["components"] = [
        {"prime": str(s.p), "type": format_partition(s), "value": str(group_aut_order(GroupType.from_partition(s)))}
        for s in t.components
    ]
    if brute_force:
        try:
            payload["brute_force"] = str(
                brute_force_aut_order(build_group(t, config.aut_oracle_cap), config.aut_oracle_cap)
            )
        except OracleScaleExceeded as e:
            raise MethodUnavailable(str(e)) from e
    payload["timings"] = _timings(started)
    return Report("aut", payload)


def cmd_subgroups(text: str, config: EngineConfig, by_type: bool = False, dump: bool = False) -> Report:
    """
    |L(G)| by closed form when possible; the oracle adds per-order and per-type counts.

    The per-order breakdown comes for free once the oracle has run. Otherwise it
    is only computed for lattices of at most BREAKDOWN_MAX_SUBGROUPS subgroups,
    unless --by-type or --dump asks for the lattice anyway.
    """
    started = time.perf_counter()
    t = parse_group_spec(text)
    payload = _header("subgroups", text, t)
    lines: List[str] = []
    try:
        size = lattice_size(t, config)
        payload["method"] = "formula"
    except MethodUnavailable:
        size = len(_lattice(t, config))
        payload["method"] = Method.ORACLE.value
    payload["value"] = str(size)

    wanted = by_type or dump or payload["method"] == Method.ORACLE.value or size <= BREAKDOWN_MAX_SUBGROUPS
    lat = None
    if not wanted:
        logging.info(f"Skipping per-order breakdown of {size} subgroups; pass --by-type or --dump to force it")
    else:
        try:
            lat = lattice_for(t, config.oracle_cap)
        except OracleScaleExceeded:
            logging.info(f"Skipping per-order breakdown above the cap {config.oracle_cap}")
        if lat is not None:
            payload["by_order"] = {str(k): str(v) for k, v in lat.order_counts().items()}
            if by_type:
                counts = sorted(subgroup_type_counts(lat).items(), key=lambda i: (i[0].order, i[0].moduli()))
                payload["by_type"] = {format_group_type(k): str(v) for k, v in counts}
            if dump:
                lines = list(dump_lattice(lat))
    payload["timings"] = _timings(started)
    return Report("subgroups", payload, lines=lines)


def cmd_survey(p: int, n: int, config: EngineConfig, sort: str = "lex") -> Report:
    """
    dm for every abelian group of order p^n.

    Types are ranked lexicographically with the elementary abelian group first
    and the cyclic group last; a row is flagged when its dm is not strictly
    below the previous row's in that order.
    """
    started = time.perf_counter()
    types = sorted(iter_p_partitions(p, n), key=lambda s: s.lex_key())
    rows = []
    previous: Optional[int] = None
    for rank, s in enumerate(types):
        row = {"type": format_partition(s), "lex_rank": str(rank)}
        try:
            result = dm(GroupType.from_partition(s), config)
        except MethodUnavailable as e:
            row.update({"dm": None, "method": "unavailable", "note": str(e)})
            previous = None
        else:
            row.update({"dm": str(result.value), "method": result.method.value})
            row["violates_order"] = previous is not None and result.value >= previous
            previous = result.value
        rows.append(row)

    if sort == "dm":
        rows.sort(key=lambda r: (r["dm"] is None, -int(r["dm"] or 0)))
    payload = {
        "command": "survey",
        "input": f"p={p} n={n}",
        "canonical_type": f"abelian groups of order {p}^{n}",
        "order": str(p**n),
        "method": "auto",
        "values": {r["type"]: r["dm"] for r in rows if r["dm"] is not None},
        "rows": rows,
        "violations": str(sum(1 for r in rows if r.get("violates_order"))),
        "timings": _timings(started),
    }
    return Report("survey", payload)
