"""Deterministic rendering of family analyses.

Every writer in this module is byte-stable: running the same analysis twice
produces identical files.  No timestamps, no environment-dependent paths, no
hash randomization — sets are sorted ascending, rationals print as ``num/den``
(plain integers when the denominator is one), and group elements print as
coordinate tuples.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .cuts import CutDescriptor
from .family import (
    BetaTable,
    ClassifyResult,
    Check,
    DegreeOneReport,
    FamilyAnalysis,
    SInfinityResult,
    VbReport,
    VuReport,
)
from .ordgroup import GroupElement, Value, is_finite


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def value_text(v: Value) -> str:
    """Inline rendering: '(a, b)' for group elements, 'inf'/'-inf' at the ends."""
    if isinstance(v, GroupElement):
        return str(v)
    return str(v)


def value_json(v: Value):
    """JSON rendering: coordinate array of rational strings, or 'inf'/'-inf'."""
    if isinstance(v, GroupElement):
        return [format_fraction(c) for c in v.coords]
    return str(v)


def _check_json(c: Check) -> dict:
    return {"name": c.name, "passed": c.passed, "detail": c.detail}


def _beta_table_json(table: BetaTable) -> dict:
    return {
        "indices": list(table.indices),
        "rows": [
            {
                "ell": row.ell,
                "kind": row.kind,
                "locked_at": row.locked_at,
                "certified": row.certified,
                "tail": None if row.form is None else {
                    "slope": row.form.slope,
                    "shift": value_json(row.form.shift),
                },
                "values": [value_json(v) for v in row.values],
                "term_values": [value_json(v) for v in row.term_values],
                "note": row.note,
            }
            for row in table.rows
        ],
    }


def _classification_json(cls: ClassifyResult) -> dict:
    return {
        "B": sorted(cls.B),
        "Bct": sorted(cls.Bct),
        "Bunb": sorted(cls.Bunb),
        "J": sorted(cls.J),
        "mode": cls.mode,
        "unclassified": sorted(cls.unclassified),
        "rows": [
            {
                "ell": v.ell,
                "member": v.member,
                "stratum": v.stratum,
                "certified": v.certified,
                "witness": v.witness,
                "detail": v.detail,
            }
            for v in cls.verdicts
        ],
    }


def _s_infinity_json(s: SInfinityResult) -> dict:
    return {
        "value": s.value,
        "stabilized_at": s.stabilized_at,
        "min_indices": list(s.min_indices),
        "epsilons": [value_json(e) for e in s.epsilons],
        "offsets": [value_json(t) for t in s.taus],
        "constancy_ok": s.constancy_ok,
        "offset_constant_ok": s.tau_constant_ok,
        "epsilon_step_ok": s.epsilon_step_ok,
        "monotone_ok": s.monotone_ok,
    }


def _pipeline_json(p) -> Optional[dict]:
    if p is None:
        return None
    if isinstance(p, VbReport):
        return {
            "kind": "vertically-bounded",
            "d": p.d,
            "supremum_anchor": value_json(p.b),
            "anchor_index": p.anchor_index,
            "kept_constant_rows": sorted(p.b_prime),
            "checks": [_check_json(c) for c in p.checks],
            "ok": p.ok,
        }
    if isinstance(p, VuReport):
        return {
            "kind": "vertically-unbounded",
            "invariance_subgroup": str(p.H),
            "residue_value_position": p.vp_position,
            "drop_recursion": [[j, n] for j, n in p.recursion_table],
            "checks": [_check_json(c) for c in p.checks],
            "ok": p.ok,
        }
    raise TypeError(f"unknown pipeline report {type(p).__name__}")


def _degree_one_json(d: Optional[DegreeOneReport]) -> Optional[dict]:
    if d is None:
        return None
    return {
        "checks": [_check_json(c) for c in d.checks],
        "binomial_rows_checked": d.lucas_rows,
        "ok": d.ok,
    }


def analysis_to_dict(a: FamilyAnalysis) -> dict:
    """The full report as a JSON-ready dictionary (deterministic ordering)."""
    return {
        "family": {
            "name": a.family_name,
            "field": a.field_description,
            "key_degree": a.m,
        },
        "target": a.target.format(),
        "target_degree": a.D,
        "horizon": a.horizon,
        "mode": a.classification.mode,
        "gamma_cut": a.gamma.to_json(),
        "delta_cut": a.delta.to_json(),
        "vertically_bounded": a.vb,
        "vb_certificate": a.vb_certificate,
        "invariance_subgroup": str(a.invariance),
        "classification": _classification_json(a.classification),
        "beta_table": _beta_table_json(a.table),
        "defect": {"value": a.d, "method": a.d_method},
        "s_infinity": _s_infinity_json(a.s_inf_data),
        "minimal_lkp": {
            "index": a.minimal_lkp_index,
            "polynomial": a.minimal_lkp.format(),
            "equals_target": a.minimal_lkp == a.target,
        },
        "invariants": [_check_json(c) for c in a.invariants],
        "pipeline": _pipeline_json(a.pipeline),
        "degree_one": _degree_one_json(a.degree_one),
        "diagnostics": list(a.diagnostics),
        "ok": a.ok,
    }


def render_json(a: FamilyAnalysis) -> str:
    return json.dumps(analysis_to_dict(a), indent=2, sort_keys=True) + "\n"


def _check_lines(checks: Sequence[Check], indent: str) -> list[str]:
    out = []
    for c in checks:
        mark = "ok" if c.passed else "FAIL"
        out.append(f"{indent}[{mark}] {c.name}")
        if c.detail:
            out.append(f"{indent}     {c.detail}")
    return out


def render_text(a: FamilyAnalysis) -> str:
    """Sectioned plain-text report."""
    lines: list[str] = []
    lines.append(f"family   : {a.family_name}")
    lines.append(f"field    : {a.field_description}")
    lines.append(f"target   : {a.target.format()}  (degree {a.D}, key degree {a.m})")
    lines.append(f"horizon  : {a.horizon}")
    lines.append(f"mode     : {a.classification.mode}")
    lines.append(f"result   : {'all checks passed' if a.ok else 'CHECK FAILURES'}")
    lines.append("")
    lines.append("cuts")
    lines.append(f"  weight cut : {a.gamma.describe()}")
    lines.append(f"  limit cut  : {a.delta.describe()}")
    lines.append(f"  vertically bounded: {a.vb} ({a.vb_certificate})")
    lines.append(f"  invariance subgroup: {a.invariance}")
    lines.append("")
    lines.append("classification")
    lines.append(f"  kept rows B        : {sorted(a.B)}")
    lines.append(f"  constant rows      : {sorted(a.Bct)}")
    lines.append(f"  window-cofinal rows: {sorted(a.Bunb)}")
    lines.append(f"  superfluous rows J : {sorted(a.J)}")
    for v in a.classification.verdicts:
        w = f", crossing witnessed at index {v.witness}" if v.witness is not None else ""
        cert = "certified" if v.certified else "heuristic"
        lines.append(f"    row {v.ell}: {v.member}"
                     f"{('/' + v.stratum) if v.stratum else ''} ({cert}{w})")
    lines.append("")
    lines.append(f"relative degree d : {a.d}  [{a.d_method}]")
    lines.append(f"stable level order: {a.s_inf} (stabilized at index "
                 f"{a.s_inf_data.stabilized_at})")
    lines.append(f"minimal limit key : {a.minimal_lkp.format()} "
                 f"(at index {a.minimal_lkp_index}"
                 f"{', equals target' if a.minimal_lkp == a.target else ''})")
    lines.append("")
    lines.append("digit value table")
    header = "  row |" + "".join(f" {i:>10}" for i in a.table.indices)
    lines.append(header)
    lines.append("  " + "-" * (len(header) - 2))
    for row in a.table.rows:
        cells = "".join(f" {value_text(v):>10}" for v in row.values)
        lines.append(f"  {row.ell:>3} |{cells}   [{row.kind}]")
    lines.append("")
    lines.append("invariants")
    lines.extend(_check_lines(a.invariants, "  "))
    if a.pipeline is not None:
        kind = ("vertically-bounded" if isinstance(a.pipeline, VbReport)
                else "vertically-unbounded")
        lines.append("")
        lines.append(f"pipeline ({kind})")
        lines.extend(_check_lines(a.pipeline.checks, "  "))
    if a.degree_one is not None:
        lines.append("")
        lines.append("degree-one checks")
        lines.extend(_check_lines(a.degree_one.checks, "  "))
    if a.diagnostics:
        lines.append("")
        lines.append("diagnostics")
        for d in a.diagnostics:
            lines.append(f"  - {d}")
    return "\n".join(lines) + "\n"


def render_tree(a: FamilyAnalysis) -> str:
    """Indented tree rendering of the same report content."""

    lines: list[str] = []

    def node(depth: int, text: str) -> None:
        lines.append("  " * depth + ("- " if depth else "") + text)

    node(0, f"analysis of {a.target.format()} along {a.family_name}")
    node(1, f"field: {a.field_description}")
    node(1, f"horizon {a.horizon}, mode {a.classification.mode}, "
            f"{'ok' if a.ok else 'CHECK FAILURES'}")
    node(1, "cuts")
    node(2, f"weight cut: {a.gamma.describe()}")
    node(2, f"limit cut: {a.delta.describe()}")
    node(2, f"vertically bounded: {a.vb}")
    node(2, f"invariance subgroup: {a.invariance}")
    node(1, "classification")
    node(2, f"B {sorted(a.B)}; constant {sorted(a.Bct)}; "
            f"window-cofinal {sorted(a.Bunb)}; superfluous {sorted(a.J)}")
    for v in a.classification.verdicts:
        extra = f" witness {v.witness}" if v.witness is not None else ""
        node(3, f"row {v.ell}: {v.member}{('/' + v.stratum) if v.stratum else ''}"
                f" ({'certified' if v.certified else 'heuristic'}{extra})")
    node(1, f"relative degree {a.d} [{a.d_method}]")
    node(1, f"stable level order {a.s_inf}")
    node(1, f"minimal limit key: {a.minimal_lkp.format()}")
    node(1, "invariants")
    for c in a.invariants:
        node(2, f"{'ok' if c.passed else 'FAIL'}: {c.name}")
    if a.pipeline is not None:
        node(1, "pipeline")
        for c in a.pipeline.checks:
            node(2, f"{'ok' if c.passed else 'FAIL'}: {c.name}")
    if a.degree_one is not None:
        node(1, "degree-one checks")
        for c in a.degree_one.checks:
            node(2, f"{'ok' if c.passed else 'FAIL'}: {c.name}")
    if a.diagnostics:
        node(1, "diagnostics")
        for d in a.diagnostics:
            node(2, d)
    return "\n".join(lines) + "\n"


def polygon_tsv(rows: Sequence[tuple[int, Value, bool]]) -> str:
    """Tab-separated polygon rows: expansion index, value, on-hull flag."""
    out = ["ell\tvalue\ton_hull"]
    for ell, v, on in rows:
        out.append(f"{ell}\t{value_text(v)}\t{'true' if on else 'false'}")
    return "\n".join(out) + "\n"


def write_analysis(
    a: FamilyAnalysis,
    out_dir: Path,
    fam,
    svg: bool = False,
    text_format: str = "text",
) -> list[Path]:
    """Write report.json, report.txt, and per-index polygon files.

    Returns the list of written paths (sorted).  With ``svg=True`` each
    polygon also renders to an SVG next to its delimited file.
    """
    from .family import polygon_rows

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    json_path = out_dir / "report.json"
    json_path.write_text(render_json(a), encoding="utf-8")
    written.append(json_path)

    renderer = render_tree if text_format == "tree" else render_text
    txt_path = out_dir / "report.txt"
    txt_path.write_text(renderer(a), encoding="utf-8")
    written.append(txt_path)

    poly_dir = out_dir / "polygons"
    poly_dir.mkdir(parents=True, exist_ok=True)
    for i in a.table.indices:
        rows = polygon_rows(fam, a.target, i)
        tsv_path = poly_dir / f"polygon_i{i:03d}.tsv"
        tsv_path.write_text(polygon_tsv(rows), encoding="utf-8")
        written.append(tsv_path)
        if svg:
            from .plotting import save_polygon_svg

            finite_rows = [(ell, v, on) for ell, v, on in rows if is_finite(v)]
            svg_path = poly_dir / f"polygon_i{i:03d}.svg"
            save_polygon_svg(
                svg_path,
                finite_rows,
                title=f"digit values at index {i}",
                rank=fam.rank(),
            )
            written.append(svg_path)
    return sorted(written)
