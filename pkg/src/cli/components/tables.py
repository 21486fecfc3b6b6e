# src/cli/components/tables.py
from typing import Any, Dict, List, Sequence

from src.core.bounds import BoundsReport
from src.core.broadcast_simulator import SimulationReport
from src.core.graph import bits_of, vertex_name
from src.core.index_code import DecodingPlan, LinearCode
from src.core.verification import VerificationReport, node_label


def format_table(headers: Sequence[str], rows: List[Sequence[str]]) -> str:
    """Plain column-aligned table, one header rule."""
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = [" | ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
             "-+-".join("-" * w for w in widths)]
    lines += [" | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines)


def _sum(vertices: Sequence[int]) -> str:
    return " + ".join(vertex_name(v) for v in vertices)


def render_report(report: VerificationReport) -> str:
    rows = []
    for c in report.conditions:
        rows.append([c.name, "PASS" if c.passed else "FAIL", c.title if c.passed else c.message])
    verdict = "accepted" if report.passed else f"rejected ({', '.join(report.failed_conditions)})"
    return format_table(["condition", "result", "detail"], rows) + f"\n\n{report.subject.upper()} structure {verdict}"


def render_branches(report: VerificationReport) -> str:
    rows = [[vertex_name(b.root), f"{node_label(b.parent)} -> {node_label(b.child)}",
             vertex_name(b.shared), b.mode, _sum(b.targets) or "-", str(b.terminal_depth)]
            for b in report.branches]
    return format_table(["root", "edge", "shared", "mode", "targets", "depth"], rows)


def render_code(code: LinearCode) -> str:
    """The code the way it is usually displayed: one symbol per line."""
    return "\n".join(f"{s.label} = {s.describe()}" for s in code.symbols)


def render_plan(plan: DecodingPlan) -> str:
    rows = []
    for r in plan.receivers:
        tau = [r.receiver] + bits_of(r.side_mask)
        rows.append([vertex_name(r.receiver), ", ".join(r.gamma), _sum(tau)])
    return format_table(["receiver", "symbols", "combined"], rows)


def render_bounds(report: BoundsReport) -> str:
    capacity = str(report.capacity) if report.capacity is not None else "open"
    lines = [
        f"code length   {report.code_length}",
        f"MAIS          {report.mais if report.mais is not None else 'not computed'}",
        f"witness       {_sum(sorted(report.oic_witness))}",
        f"broadcast     {report.beta if report.beta is not None else 'between bounds'}",
        f"capacity      {capacity}",
    ]
    lines += [f"note          {n}" for n in report.notes]
    return "\n".join(lines)


def render_simulation(report: SimulationReport) -> str:
    rows = [[vertex_name(k), str(s["decoded"]), str(s["failures"])] for k, s in sorted(report.receivers.items())]
    summary = f"{report.mode} simulation: {report.trials} broadcasts, {report.failures} failures"
    if report.seed is not None:
        summary += f" (seed {report.seed})"
    return format_table(["receiver", "decoded", "failures"], rows) + "\n\n" + summary


def render_fixture_rows(rows: List[Dict[str, Any]]) -> str:
    table = [[r["name"], "PASS" if r["passed"] else "FAIL", str(r["length"]),
              str(r["mais"]) if r["mais"] is not None else "-", r["capacity"], r.get("note", "")]
             for r in rows]
    return format_table(["fixture", "result", "length", "mais", "capacity", "note"], table)
