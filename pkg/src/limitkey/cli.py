"""Command-line front end.

Subcommands:

* ``analyze CONFIG``  — run the full family analysis described by an INI
  config, print the report, and write ``report.json``, ``report.txt``, and
  per-index polygon files (TSV, plus SVG with ``--svg``) under ``--out``.
* ``cuts [CONFIG]``   — print the built-in labeled cut catalog (and, given a
  config, that family's weight and limit cuts) with their classifications.
* ``polygon CONFIG``  — emit the digit-value polygon at one family index.
* ``selftest``        — run a fast self-contained check suite; the
  ``corrupted-gamma`` fixture deliberately tampers with a family and must
  make the suite fail.

Exit codes: 0 success, 1 configuration or validation error, 2 the horizon
was too short to reach a conclusive answer.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path
from typing import Optional

from . import report as report_mod
from .cuts import standard_cut_catalog
from .family import (
    Family,
    FamilyValidationError,
    HorizonInconclusive,
    analyze,
    build_family,
    polygon_rows,
)
from .parse import ParseError, parse_poly
from .polyring import Poly

_ANALYSIS_KEYS = {"f", "horizon", "pipelines"}
_OUTPUT_KEYS = {"svg", "format"}
_SECTIONS = {"family", "analysis", "output"}


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict:
    """Read an INI config into {family: {...}, analysis: {...}, output: {...}}.

    Unknown sections or keys are rejected by name so typos surface
    immediately instead of silently changing the run.
    """
    cfg = configparser.ConfigParser(interpolation=None)
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with p.open(encoding="utf-8") as fh:
            cfg.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    unknown_sections = sorted(set(cfg.sections()) - _SECTIONS)
    if unknown_sections:
        raise ConfigError(
            f"unknown config section(s) {', '.join(unknown_sections)}; "
            f"expected only {sorted(_SECTIONS)}"
        )
    if "family" not in cfg:
        raise ConfigError("config must contain a [family] section")

    out = {"family": dict(cfg["family"]), "analysis": {}, "output": {}}
    if "analysis" in cfg:
        section = dict(cfg["analysis"])
        bad = sorted(set(section) - _ANALYSIS_KEYS)
        if bad:
            raise ConfigError(
                f"unknown key(s) in [analysis]: {', '.join(bad)}; "
                f"expected only {sorted(_ANALYSIS_KEYS)}"
            )
        out["analysis"] = section
    if "output" in cfg:
        section = dict(cfg["output"])
        bad = sorted(set(section) - _OUTPUT_KEYS)
        if bad:
            raise ConfigError(
                f"unknown key(s) in [output]: {', '.join(bad)}; "
                f"expected only {sorted(_OUTPUT_KEYS)}"
            )
        out["output"] = section
    return out


def _family_from_config(conf: dict) -> Family:
    return build_family(conf["family"])


def _target_from_config(conf: dict, fam: Family) -> Optional[Poly]:
    literal = conf["analysis"].get("f")
    if literal is None:
        return None
    return parse_poly(fam.field, literal)


def _horizon_from_config(conf: dict, override: Optional[int]) -> int:
    if override is not None:
        if override < 1:
            raise ConfigError(f"horizon must be >= 1, got {override}")
        return override
    raw = conf["analysis"].get("horizon")
    if raw is None:
        from .family import DEFAULT_HORIZON

        return DEFAULT_HORIZON
    try:
        h = int(raw)
    except ValueError:
        raise ConfigError(f"[analysis] horizon must be an integer, got {raw!r}")
    if h < 1:
        raise ConfigError(f"[analysis] horizon must be >= 1, got {h}")
    return h


def _pipelines_from_config(conf: dict) -> str:
    mode = conf["analysis"].get("pipelines", "auto")
    if mode not in {"auto", "vb", "vu", "none"}:
        raise ConfigError(
            f"[analysis] pipelines must be auto, vb, vu, or none; got {mode!r}"
        )
    return mode


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _svg_from_config(conf: dict, override: bool) -> bool:
    if override:
        return True
    raw = conf["output"].get("svg")
    if raw is None:
        return False
    try:
        return _BOOL[raw.strip().lower()]
    except KeyError:
        raise ConfigError(f"[output] svg must be a boolean, got {raw!r}")


def _format_from_config(conf: dict, override: Optional[str]) -> str:
    fmt = override or conf["output"].get("format", "text")
    if fmt not in {"text", "tree"}:
        raise ConfigError(f"[output] format must be text or tree, got {fmt!r}")
    return fmt


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_analyze(args: argparse.Namespace) -> int:
    conf = _load_config(args.config)
    fam = _family_from_config(conf)
    target = _target_from_config(conf, fam)
    horizon = _horizon_from_config(conf, args.horizon)
    pipelines = _pipelines_from_config(conf)
    svg = _svg_from_config(conf, args.svg)
    fmt = _format_from_config(conf, args.format)

    analysis = analyze(fam, target, horizon=horizon, pipelines=pipelines)

    out_dir = Path(args.out) if args.out else Path("limitkey-report")
    written = report_mod.write_analysis(
        analysis, out_dir, fam, svg=svg, text_format=fmt
    )
    renderer = report_mod.render_tree if fmt == "tree" else report_mod.render_text
    sys.stdout.write(renderer(analysis))
    print(f"wrote {len(written)} file(s) under {out_dir}", file=sys.stderr)
    return 0


def _print_cut_line(label: str, cut, stream) -> None:
    c = cut.classify()
    vb, certificate = cut.is_vertically_bounded()
    print(
        f"  {label:<28} {c.describe():<18} "
        f"invariance {cut.invariance_group()!s:<5} "
        f"vertical supremum: {'yes' if vb else 'no':<3} ({certificate})",
        file=stream,
    )


def _cmd_cuts(args: argparse.Namespace) -> int:
    print("built-in cut catalog")
    for entry in standard_cut_catalog():
        _print_cut_line(entry.label, entry.cut, sys.stdout)
    if args.config is not None:
        conf = _load_config(args.config)
        fam = _family_from_config(conf)
        target = _target_from_config(conf, fam)
        horizon = _horizon_from_config(conf, args.horizon)
        from .family import delta_cut, gamma_cut

        print(f"\nfamily cuts for {fam.name}")
        _print_cut_line("weight cut", gamma_cut(fam), sys.stdout)
        if target is None:
            target = fam.default_target
        if target is not None:
            _print_cut_line("limit cut", delta_cut(fam, target, horizon), sys.stdout)
    return 0


def _cmd_polygon(args: argparse.Namespace) -> int:
    conf = _load_config(args.config)
    fam = _family_from_config(conf)
    target = _target_from_config(conf, fam)
    if target is None:
        target = fam.default_target
    if target is None:
        raise ConfigError("no target: give [analysis] f or use a family with a default")
    if args.index < fam.first_index:
        raise ConfigError(
            f"index {args.index} precedes the family's first index {fam.first_index}"
        )
    rows = polygon_rows(fam, target, args.index)
    tsv = report_mod.polygon_tsv(rows)
    if args.out is None:
        sys.stdout.write(tsv)
        return 0
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv_path = out_dir / f"polygon_i{args.index:03d}.tsv"
    tsv_path.write_text(tsv, encoding="utf-8")
    written = [tsv_path]
    if args.svg:
        from .ordgroup import is_finite
        from .plotting import save_polygon_svg

        finite_rows = [(ell, v, on) for ell, v, on in rows if is_finite(v)]
        svg_path = out_dir / f"polygon_i{args.index:03d}.svg"
        save_polygon_svg(
            svg_path,
            finite_rows,
            title=f"digit values at index {args.index}",
            rank=fam.rank(),
        )
        written.append(svg_path)
    for path in written:
        print(path)
    return 0


def _selftest_families() -> list[tuple[str, dict, int, dict]]:
    """(name, build config, horizon, expected invariants) triples."""
    return [
        (
            "padic_sqrt p=2 target=17",
            {"variant": "padic_sqrt", "p": "2", "target": "17"},
            8,
            {"vb": False, "d": 1, "B": [0, 1, 2], "Bct": [1, 2],
             "Bunb": [0], "J": [], "s_inf": 1, "mode": "exact"},
        ),
        (
            "monomial_telescope p=2",
            {"variant": "monomial_telescope", "p": "2"},
            8,
            {"vb": True, "d": 2, "B": [0, 1, 2], "Bct": [1, 2],
             "Bunb": [0], "J": [], "s_inf": 1, "mode": "exact"},
        ),
        (
            "rank2_drift mode=vInH p=3",
            {"variant": "rank2_drift", "p": "3", "mode": "vInH"},
            6,
            {"vb": False, "d": 1, "B": [0, 1, 2], "Bct": [1, 2],
             "Bunb": [0], "J": [], "s_inf": 1, "mode": "exact"},
        ),
    ]


def _run_selftest(tampered_telescope: Optional[Family]) -> int:
    failures: list[str] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        line = f"  [{'ok' if ok else 'FAIL'}] {name}"
        if detail and not ok:
            line += f" — {detail}"
        print(line)
        if not ok:
            failures.append(name)

    for name, conf, horizon, want in _selftest_families():
        try:
            if tampered_telescope is not None and conf["variant"] == "monomial_telescope":
                fam = tampered_telescope
                fam.validate(horizon)
            else:
                fam = build_family(conf)
            a = analyze(fam, horizon=horizon)
        except (FamilyValidationError, HorizonInconclusive, ValueError) as exc:
            check(f"{name}: analysis runs", False, str(exc))
            continue
        got = {
            "vb": a.vb, "d": a.d, "B": sorted(a.B), "Bct": sorted(a.Bct),
            "Bunb": sorted(a.Bunb), "J": sorted(a.J), "s_inf": a.s_inf,
            "mode": a.classification.mode,
        }
        check(f"{name}: invariants", got == want, f"got {got}, want {want}")
        check(f"{name}: internal checks", a.ok)
        first = report_mod.render_json(a)
        second = report_mod.render_json(analyze(fam, horizon=horizon))
        check(f"{name}: deterministic report", first == second)

    catalog = standard_cut_catalog()
    check("cut catalog has at least ten entries", len(catalog) >= 10,
          f"got {len(catalog)}")
    agree = all(
        e.cut.classify().kind == e.expected_kind
        and e.cut.invariance_group() == e.expected_subgroup
        and e.cut.is_vertically_bounded()[0] == e.expected_vb
        for e in catalog
    )
    check("cut catalog classifications match their labels", agree)

    if failures:
        print(f"selftest: FAIL ({len(failures)} failing check(s))")
        return 1
    print("selftest: PASS")
    return 0


def _tampered_telescope() -> Family:
    """The corrupted-gamma fixture: one family weight silently doubled.

    Validation must notice the declared weight disagreeing with the measured
    step value, so the selftest run over this fixture has to fail.
    """
    base = build_family({"variant": "monomial_telescope", "p": "2"})
    orig = base._gamma_fn

    def corrupted(i: int):
        g = orig(i)
        from fractions import Fraction

        return g.scale(Fraction(2)) if i == 3 else g

    return Family(
        name=base.name + " (corrupted fixture)",
        field=base.field,
        first_index=base.first_index,
        center_fn=base._center_fn,
        gamma_fn=corrupted,
        gamma_declared=base.gamma_declared,
        gamma_exists_ge=base.gamma_exists_ge,
        default_target=base.default_target,
        row_laws=base.row_laws,
        notes=base.notes,
    )


def _cmd_selftest(args: argparse.Namespace) -> int:
    if args.fixture is None:
        return _run_selftest(None)
    if args.fixture == "corrupted-gamma":
        print("running against the corrupted-gamma fixture "
              "(failure is the expected outcome)")
        return _run_selftest(_tampered_telescope())
    raise ConfigError(f"unknown fixture {args.fixture!r}; known: corrupted-gamma")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="limitkey",
        description="Analyze increasing valuation families and their limit keys.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="run a full family analysis")
    p_an.add_argument("config", help="INI config describing the family")
    p_an.add_argument("--horizon", type=int, default=None,
                      help="number of family indices to sample")
    p_an.add_argument("--out", default=None,
                      help="output directory (default: limitkey-report)")
    p_an.add_argument("--svg", action="store_true",
                      help="also render each polygon to SVG")
    p_an.add_argument("--format", choices=["text", "tree"], default=None,
                      help="stdout/report.txt rendering style")
    p_an.set_defaults(func=_cmd_analyze)

    p_cuts = sub.add_parser("cuts", help="print the labeled cut catalog")
    p_cuts.add_argument("config", nargs="?", default=None,
                        help="optional family config; adds its cuts")
    p_cuts.add_argument("--horizon", type=int, default=None)
    p_cuts.set_defaults(func=_cmd_cuts)

    p_poly = sub.add_parser("polygon", help="emit one index's digit polygon")
    p_poly.add_argument("config", help="INI config describing the family")
    p_poly.add_argument("--index", type=int, required=True,
                        help="family index to expand at")
    p_poly.add_argument("--out", default=None,
                        help="directory for the TSV (default: stdout)")
    p_poly.add_argument("--svg", action="store_true",
                        help="also render the polygon to SVG (requires --out)")
    p_poly.set_defaults(func=_cmd_polygon)

    p_self = sub.add_parser("selftest", help="run the built-in check suite")
    p_self.add_argument("--fixture", default=None,
                        help="run against a deliberately broken fixture")
    p_self.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HorizonInconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, FamilyValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
