"""
This module renders command reports as plain-text tables for the terminal.

The JSON form of a report is its payload plus any listing lines; the text form is produced here.
"""
import json
from typing import Dict, List, Sequence

from ..services.reports import Report

VERDICT_LINES = {
    "PASS": "PASS: every method agrees",
    "FAIL": "FAIL: methods disagree",
}


def table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> List[str]:
    """
    Align columns; the first column is left-aligned, the rest right-aligned.

    Args:
        headers: column titles
        rows: cells, already formatted as strings

    Returns:
        list of lines, header and rule included
    """
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(str(c))) for w, c in zip(widths, row)]

    def line(cells):
        first, *rest = [str(c) for c in cells]
        return "  ".join([first.ljust(widths[0])] + [c.rjust(w) for c, w in zip(rest, widths[1:])])

    return [line(headers), "  ".join("-" * w for w in widths)] + [line(r) for r in rows]


def _title(payload: Dict) -> str:
    return f"G = {payload['canonical_type']}  (order {payload['order']})"


def render_dm(payload: Dict) -> List[str]:
    lines = [_title(payload), f"dm(G) = {payload['value']}  [{payload['method']}]"]
    if len(payload["breakdown"]) > 1:
        lines.append("")
        lines += table(
            ["component", "dm", "method", "|L|", "|L| method"],
            [
                [c["type"], c["dm"], c["method"], c["lattice_size"], c["lattice_method"]]
                for c in payload["breakdown"]
            ],
        )
    for triple in payload.get("diamonds", []):
        lines.append(" | ".join("{" + ",".join(map(str, members)) + "}" for members in triple))
    return lines


def render_verify(payload: Dict) -> List[str]:
    lines = [_title(payload), ""]
    lines += table(["method", "dm"], list(payload["values"].items()))
    lines += ["", VERDICT_LINES[payload["verdict"]]]
    return lines


def render_sections(payload: Dict) -> List[str]:
    lines = [_title(payload), "", "Section census n_S(G):"]
    lines += table(["S", "n_S"], [[r["type"], r["count"]] for r in payload["sections"]])
    lines += ["", "Diamonds by section type S x S:"]
    lines += table(
        ["S x S", "sections", "per section", "subtotal"],
        [[c["section"], c["sections"], c["per_section"], c["subtotal"]] for c in payload["diamond_classes"]],
    )
    for c in payload["diamond_classes"]:
        if not c["subgroup_classes"]:
            continue
        lines.append("")
        lines.append(f"  {c['section']}: subgroups isomorphic to {c['section']} by quotient")
        for k in c["subgroup_classes"]:
            lines.append(
                f"    {k['subgroups']} with quotient {k['quotient']} "
                f"(|L(G/T)| = {k['quotient_lattice_size']})"
            )
    lines += ["", f"dm(G) = {payload['value']}"]
    return lines


def render_aut(payload: Dict) -> List[str]:
    lines = [_title(payload), f"|Aut(G)| = {payload['value']}"]
    if len(payload["components"]) > 1:
        lines += table(["component", "|Aut|"], [[c["type"], c["value"]] for c in payload["components"]])
    if "brute_force" in payload:
        lines.append(f"brute force: {payload['brute_force']}")
    return lines


def render_subgroups(payload: Dict) -> List[str]:
    lines = [_title(payload), f"|L(G)| = {payload['value']}  [{payload['method']}]"]
    if "by_order" in payload:
        lines += ["", *table(["order", "subgroups"], list(payload["by_order"].items()))]
    if "by_type" in payload:
        lines += ["", *table(["type", "subgroups"], list(payload["by_type"].items()))]
    return lines


def render_survey(payload: Dict) -> List[str]:
    lines = [f"Abelian groups of order {payload['order']} ({payload['input']})", ""]
    lines += table(
        ["type", "lex rank", "dm", "method", "flag"],
        [
            [r["type"], r["lex_rank"], r["dm"] or "-", r["method"], "not decreasing" if r.get("violates_order") else ""]
            for r in payload["rows"]
        ],
    )
    lines += ["", f"violations of the lexicographic ordering: {payload['violations']}"]
    return lines


RENDERERS = {
    "dm": render_dm,
    "verify": render_verify,
    "sections": render_sections,
    "aut": render_aut,
    "subgroups": render_subgroups,
    "survey": render_survey,
}


def render(report: Report, as_json: bool = False) -> str:
    if as_json:
        body = dict(report.payload)
        if report.lines:
            body["lines"] = report.lines
        return json.dumps(body, indent=2)
    lines = RENDERERS[report.command](report.payload)
    if report.lines:
        lines = lines + [""] + report.lines
    return "\n".join(lines)
