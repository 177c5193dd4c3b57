"""Batch front end: parse job specs, run analyses, print reports.

One job per invocation.  JSON is the machine format and the single
source of truth; the text rendering is derived from the JSON object.
Reports contain no timestamps or environment data, so identical inputs
produce byte-identical output.

Exit codes: 0 success, 2 invalid spec, 3 family not pre-Jaffard,
4 step budget exceeded, 5 semistar verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib

from .domain import Model, Overring, SemilocalPrufer, SequenceDomain
from .family import (
    Family,
    NotPreJaffard,
    StepBudgetExceeded,
    Verdict,
    check_family,
    degree_translation,
    derived_sequence,
    merge_compact_subsets,
)
from .ordinal import OrdinalDepthError, parse_ordinal
from .semistar import (
    NEG_INF,
    _raw_apply,
    enumerate_stable,
    factorization_iso,
    is_stable_preserving,
    verify_action,
)
from .space import (
    ALL,
    All,
    Cantor,
    Discrete,
    Empty,
    FinitePoints,
    Level,
    LevelMinusFinite,
    OrdinalInterval,
    PresentedSpace,
    SetDescriptor,
    cb_rank,
    is_scattered,
    sorted_points,
)

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_NOT_PRE_JAFFARD = 3
EXIT_BUDGET = 4
EXIT_SEMISTAR_FAIL = 5


class SpecError(Exception):
    """Invalid job specification; message carries the key path."""


# ---------------------------------------------------------------------------
# Spec parsing
# ---------------------------------------------------------------------------


def _require_keys(table: dict, allowed: set[str], path: str) -> None:
    for key in table:
        if key not in allowed:
            raise SpecError(f"{path}: unknown key {key!r}")


def _atom_from_spec(entry: Any, path: str):
    if not isinstance(entry, dict):
        raise SpecError(f"{path}: expected a table")
    kind = entry.get("kind")
    if kind == "discrete":
        _require_keys(entry, {"kind", "size"}, path)
        size = entry.get("size")
        if not isinstance(size, int) or size < 1:
            raise SpecError(f"{path}.size: expected a positive integer")
        return Discrete(size)
    if kind == "interval":
        _require_keys(entry, {"kind", "rank", "copies"}, path)
        rank = entry.get("rank")
        if not isinstance(rank, str):
            raise SpecError(f"{path}.rank: expected an ordinal string")
        try:
            rank_ord = parse_ordinal(rank)
        except (ValueError, OrdinalDepthError) as e:
            raise SpecError(f"{path}.rank: {e}") from None
        copies = entry.get("copies", 1)
        if not isinstance(copies, int) or copies < 1:
            raise SpecError(f"{path}.copies: expected a positive integer")
        try:
            return OrdinalInterval(rank_ord, copies)
        except ValueError as e:
            raise SpecError(f"{path}: {e}") from None
    if kind == "cantor":
        _require_keys(entry, {"kind"}, path)
        return Cantor()
    raise SpecError(f"{path}.kind: expected discrete, interval, or cantor")


def _space_from_spec(section: Any, path: str) -> PresentedSpace:
    if not isinstance(section, dict):
        raise SpecError(f"{path}: expected a table")
    _require_keys(section, {"atoms"}, path)
    atoms = section.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise SpecError(f"{path}.atoms: expected a non-empty list")
    parsed = [
        _atom_from_spec(a, f"{path}.atoms[{i}]") for i, a in enumerate(atoms)
    ]
    space, _ = PresentedSpace.build(parsed)
    return space


def _model_from_spec(spec: dict) -> Model:
    domain = spec.get("domain")
    if not isinstance(domain, dict):
        raise SpecError("domain: section required")
    kind = domain.get("kind")
    if kind == "semilocal":
        _require_keys(domain, {"kind", "n"}, "domain")
        n = domain.get("n")
        if not isinstance(n, int) or n < 1:
            raise SpecError("domain.n: expected a positive integer")
        if "space" in spec:
            raise SpecError("space: not allowed with a semilocal domain")
        return SemilocalPrufer(n)
    if kind == "sequence":
        _require_keys(domain, {"kind"}, "domain")
        if "space" not in spec:
            raise SpecError("space: section required for a sequence domain")
        return SequenceDomain(_space_from_spec(spec["space"], "space"))
    raise SpecError("domain.kind: expected semilocal or sequence")


def _family_from_spec(spec: dict, model: Model) -> Family:
    section = spec.get("family", {"kind": "all-localizations"})
    if not isinstance(section, dict):
        raise SpecError("family: expected a table")
    kind = section.get("kind", "all-localizations")
    if kind == "all-localizations":
        _require_keys(section, {"kind"}, "family")
        return Family.all_localizations(model)
    if kind == "members":
        _require_keys(section, {"kind", "members"}, "family")
        if not isinstance(model, SemilocalPrufer):
            raise SpecError("family.members: only supported on semilocal domains")
        raw = section.get("members")
        if not isinstance(raw, list) or not raw:
            raise SpecError("family.members: expected a non-empty list")
        members = []
        for i, entry in enumerate(raw):
            if not isinstance(entry, list) or not all(
                isinstance(x, int) for x in entry
            ):
                raise SpecError(f"family.members[{i}]: expected a list of indices")
            support = frozenset(entry)
            if not support <= model.indices:
                raise SpecError(f"family.members[{i}]: indices outside 1..{model.n}")
            members.append(Overring(model, support))
        return Family.of_members(model, members)
    raise SpecError("family.kind: expected all-localizations or members")


_RUN_KEYS = {"max_steps", "bound", "format"}


def load_spec(path: str) -> dict:
    """Read and parse a TOML or JSON job file."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e.strerror}") from None
    if path.endswith(".json"):
        try:
            spec = json.loads(data)
        except json.JSONDecodeError as e:
            raise SpecError(f"{path}: invalid JSON: {e}") from None
    elif path.endswith(".toml"):
        try:
            spec = tomllib.loads(data.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as e:
            raise SpecError(f"{path}: invalid TOML: {e}") from None
    else:
        raise SpecError(f"{path}: expected a .toml or .json file")
    if not isinstance(spec, dict):
        raise SpecError(f"{path}: top level must be a table")
    _require_keys(spec, {"space", "domain", "family", "run"}, "spec")
    run = spec.get("run", {})
    if not isinstance(run, dict):
        raise SpecError("run: expected a table")
    _require_keys(run, _RUN_KEYS, "run")
    return spec


# ---------------------------------------------------------------------------
# JSON rendering helpers
# ---------------------------------------------------------------------------


def _piece_json(piece) -> Any:
    if isinstance(piece, Empty):
        return "empty"
    if isinstance(piece, All):
        return "all"
    if isinstance(piece, FinitePoints):
        return {"points": [str(p) for p in sorted_points(piece.points)]}
    if isinstance(piece, Level):
        return {"level": str(piece.index)}
    assert isinstance(piece, LevelMinusFinite)
    return {
        "level": str(piece.index),
        "removed": [str(p) for p in sorted_points(piece.removed)],
    }


def _descriptor_json(d: SetDescriptor) -> list:
    return [_piece_json(p) for p in d.pieces]


def _support_json(t: Overring) -> Any:
    if isinstance(t.support, frozenset):
        return sorted(t.support)
    return _descriptor_json(t.support)


def _atom_json(atom) -> dict:
    if isinstance(atom, Discrete):
        return {"kind": "discrete", "size": atom.size}
    if isinstance(atom, OrdinalInterval):
        return {"kind": "interval", "rank": str(atom.rank), "copies": atom.copies}
    return {"kind": "cantor"}


def _model_json(model: Model) -> dict:
    if isinstance(model, SemilocalPrufer):
        return {"kind": "semilocal", "n": model.n}
    return {
        "kind": "sequence",
        "atoms": [_atom_json(a) for a in model.max_space.atoms],
    }


def _family_json(f: Family) -> dict:
    out: dict[str, Any] = {}
    if f.point_part is not None:
        out["points"] = _descriptor_json(f.point_part)
    out["listed"] = [_support_json(t) for t in f.listed]
    out["base"] = _support_json(f.base)
    out["member_count"] = f.member_count()
    return out


def _report_json(f: Family) -> dict:
    rep = check_family(f)
    return {
        "classification": rep.classification.value,
        "complete": rep.complete,
        "independent": rep.independent,
        "strongly_independent": rep.strongly_independent,
        "locally_finite": rep.locally_finite,
        "compact": rep.compact,
        "pointed_at": None if rep.pointed_at is None else _support_json(rep.pointed_at),
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_check(model: Model, family: Family) -> tuple[dict, int]:
    report = {
        "command": "check",
        "model": _model_json(model),
        "family": _family_json(family),
        "valid": True,
    }
    return report, EXIT_OK


def cmd_analyze(model: Model, family: Family) -> tuple[dict, int]:
    report: dict[str, Any] = {
        "command": "analyze",
        "model": _model_json(model),
        "family": _report_json(family),
    }
    if isinstance(model, SequenceDomain):
        space = model.max_space
        report["topology"] = {
            "cb_rank": str(cb_rank(space)),
            "scattered": is_scattered(space),
        }
    return report, EXIT_OK


def cmd_derive(model: Model, family: Family, max_steps: int) -> tuple[dict, int]:
    report: dict[str, Any] = {
        "command": "derive",
        "model": _model_json(model),
    }
    try:
        ds = derived_sequence(family, max_steps=max_steps)
    except NotPreJaffard as e:
        failed = [name for name, ok in e.report.pre_jaffard_flags() if not ok]
        report["pre_jaffard"] = False
        report["failed_flags"] = failed
        return report, EXIT_NOT_PRE_JAFFARD
    except StepBudgetExceeded as e:
        report["pre_jaffard"] = True
        report["budget_exceeded"] = True
        report["stages"] = _stages_json(e.partial.stages)
        return report, EXIT_BUDGET

    translation = degree_translation(ds)
    report["pre_jaffard"] = True
    report["budget_exceeded"] = False
    report["stages"] = _stages_json(ds.stages)
    report["degree"] = str(ds.degree)
    report["verdict"] = ds.verdict.value
    report["sharp_degree"] = (
        None if translation.sharp_degree is None else str(translation.sharp_degree)
    )
    report["dull_degree"] = (
        None if translation.dull_degree is None else str(translation.dull_degree)
    )
    report["stable_ring"] = _support_json(ds.dull_limit)
    return report, EXIT_OK


def _stages_json(stages) -> list:
    out = []
    for st in stages:
        out.append(
            {
                "alpha": str(st.alpha),
                "members": _family_json(st.family),
                "ring": _support_json(st.ring),
            }
        )
    return out


def cmd_semistar(model: Model, family: Family, bound: int) -> tuple[dict, int]:
    if not isinstance(model, SemilocalPrufer):
        raise SpecError("semistar: requires a semilocal domain")
    lattice = enumerate_stable(model, bound)
    ops_json = []
    any_fail = False
    for op, rep in zip(lattice.ops, lattice.reports):
        any_fail = any_fail or not rep.ok
        ops_json.append(
            {
                "support": sorted(op.support),
                "verification": {
                    "ok": rep.ok,
                    "passed": rep.passed,
                    "failed": rep.failed,
                    "skipped": rep.skipped,
                },
            }
        )
    preserving = is_stable_preserving(family, bound)
    factor = None
    if preserving.ok and isinstance(model, SemilocalPrufer) and family.listed:
        fr = factorization_iso(family, bound)
        factor = {
            "ok": fr.ok,
            "base_count": fr.base_count,
            "member_counts": list(fr.member_counts),
            "product_count": fr.product_count,
        }
        any_fail = any_fail or not fr.ok
    any_fail = any_fail or not preserving.ok
    report = {
        "command": "semistar",
        "model": _model_json(model),
        "ops": ops_json,
        "hasse": [list(e) for e in lattice.hasse_edges()],
        "completeness": lattice.completeness,
        "raw_search_count": lattice.raw_search_count,
        "stable_preserving": {"ok": preserving.ok, "method": preserving.method},
        "factorization": factor,
        "status": "FAIL" if any_fail else "OK",
    }
    return report, EXIT_SEMISTAR_FAIL if any_fail else EXIT_OK


# ---------------------------------------------------------------------------
# Demos
# ---------------------------------------------------------------------------


def _demo_jaffard(args) -> tuple[dict, int]:
    model = SemilocalPrufer(3)
    return cmd_derive(model, Family.all_localizations(model), args.max_steps)


def _demo_weak_jaffard(args) -> tuple[dict, int]:
    space = PresentedSpace.of(OrdinalInterval(parse_ordinal("1"), 1))
    model = SequenceDomain(space)
    return cmd_derive(model, Family.all_localizations(model), args.max_steps)


def _demo_almded(args) -> tuple[dict, int]:
    space = PresentedSpace.of(OrdinalInterval(parse_ordinal("1"), args.n))
    model = SequenceDomain(space)
    return cmd_derive(model, Family.all_localizations(model), args.max_steps)


def _demo_algint(args) -> tuple[dict, int]:
    model = SequenceDomain(PresentedSpace.of(Cantor()))
    return cmd_derive(model, Family.all_localizations(model), args.max_steps)


def _demo_algint_merged(args) -> tuple[dict, int]:
    space, _ = PresentedSpace.build([Cantor(), Cantor()])
    family = Family.all_localizations(SequenceDomain(space))
    part = SetDescriptor.on_atoms(space, {0: ALL})
    merged = merge_compact_subsets(family, [part])
    return cmd_derive(merged.model, merged, args.max_steps)


def _demo_rank_and_scatter(args) -> tuple[dict, int]:
    """Degree equals rank; sharp equals scattered; shown on one space."""
    space, _ = PresentedSpace.build(
        [Discrete(3), OrdinalInterval(parse_ordinal("2"), 2)]
    )
    model = SequenceDomain(space)
    analyze, _ = cmd_analyze(model, Family.all_localizations(model))
    derive, code = cmd_derive(model, Family.all_localizations(model), args.max_steps)
    report = {
        "command": "demo",
        "analyze": analyze,
        "derive": derive,
        "degree_equals_rank": derive.get("degree") == analyze["topology"]["cb_rank"],
        "sharp_equals_scattered": (
            (derive.get("verdict") == Verdict.SHARP.value)
            == analyze["topology"]["scattered"]
        ),
    }
    return report, code


def _demo_powerset(args) -> tuple[dict, int]:
    model = SemilocalPrufer(3)
    return cmd_semistar(model, Family.all_localizations(model), args.bound)


def _demo_corrupted_op(args) -> tuple[dict, int]:
    """A seeded mutant: the support action with one component clamped."""
    model = SemilocalPrufer(2)
    support = frozenset({1, 2})

    def clamped(m):
        out = _raw_apply(support, m)
        first = out[0]
        if first != NEG_INF and first > args.bound - 1:
            return (args.bound - 1,) + out[1:]
        return out

    rep = verify_action(model, model.indices, clamped, args.bound)
    report = {
        "command": "semistar",
        "model": _model_json(model),
        "ops": [
            {
                "support": sorted(support),
                "verification": {
                    "ok": rep.ok,
                    "passed": rep.passed,
                    "failed": rep.failed,
                    "skipped": rep.skipped,
                },
            }
        ],
        "counterexample": _jsonable(rep.counterexample),
        "status": "FAIL" if not rep.ok else "OK",
    }
    return report, EXIT_SEMISTAR_FAIL if not rep.ok else EXIT_OK


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(value)
    if value == NEG_INF:
        return "bot"
    return value


DEMOS = {
    "jaffard": _demo_jaffard,
    "weak-jaffard": _demo_weak_jaffard,
    "ex-almded": _demo_almded,
    "ex-algint": _demo_algint,
    "ex-algint-merged": _demo_algint_merged,
    "rank-and-scatter": _demo_rank_and_scatter,
    "powerset": _demo_powerset,
    "corrupted-op": _demo_corrupted_op,
}


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _text_lines(value, indent: int, out: list[str], label: str = "") -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if label:
            out.append(f"{pad}{label}:")
            indent += 1
        for key in sorted(value):
            _text_lines(value[key], indent, out, key)
    elif isinstance(value, list):
        if label:
            out.append(f"{pad}{label}:")
            indent += 1
        for i, item in enumerate(value):
            _text_lines(item, indent, out, f"[{i}]")
    else:
        out.append(f"{pad}{label}: {value}")


def render_text(report: dict) -> str:
    lines: list[str] = []
    _text_lines(report, 0, lines)
    return "\n".join(lines)


def render_dot(report: dict) -> str:
    """Stage chain for derive reports, Hasse diagram for semistar ones."""
    if report.get("command") == "derive" and "stages" in report:
        lines = ["digraph stages {"]
        stages = report["stages"]
        for i, st in enumerate(stages):
            lines.append(f'  s{i} [label="alpha = {st["alpha"]}"];')
        for i in range(len(stages) - 1):
            lines.append(f"  s{i} -> s{i + 1};")
        lines.append("}")
        return "\n".join(lines)
    if report.get("command") == "semistar" and "hasse" in report:
        lines = ["digraph ops {"]
        for i, op in enumerate(report["ops"]):
            label = "{" + ",".join(str(x) for x in op["support"]) + "}"
            lines.append(f'  o{i} [label="{label}"];')
        for i, j in report["hasse"]:
            lines.append(f"  o{i} -> o{j};")
        lines.append("}")
        return "\n".join(lines)
    raise SpecError("dot output is only available for derive and semistar reports")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jaffard",
        description="Analyze families of overrings on executable domain models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("--input", required=True, help="job file (.toml or .json)")
        p.add_argument("--format", choices=["json", "text", "dot"], default=None)
        p.add_argument("--max-steps", type=int, default=None, dest="max_steps")
        p.add_argument("--bound", type=int, default=None)

    for name in ("analyze", "derive", "semistar", "check"):
        add_common(sub.add_parser(name))
    demo = sub.add_parser("demo")
    demo.add_argument("id", choices=sorted(DEMOS))
    demo.add_argument("--n", type=int, default=2)
    add_common(demo, with_input=False)
    return parser


def _run(args) -> tuple[dict, int]:
    if args.command == "demo":
        if args.n < 1:
            raise SpecError("--n: expected a positive integer")
        _fill_run_params(args, {})
        return DEMOS[args.id](args)

    spec = load_spec(args.input)
    _fill_run_params(args, spec.get("run", {}))

    model = _model_from_spec(spec)
    family = _family_from_spec(spec, model)
    if args.command == "check":
        return cmd_check(model, family)
    if args.command == "analyze":
        return cmd_analyze(model, family)
    if args.command == "derive":
        return cmd_derive(model, family, args.max_steps)
    assert args.command == "semistar"
    return cmd_semistar(model, family, args.bound)


def _fill_run_params(args, run: dict) -> None:
    """Resolve flags against the run section; flags win."""
    if args.max_steps is None:
        args.max_steps = run.get("max_steps", 64)
    if args.bound is None:
        args.bound = run.get("bound", 2)
    if args.format is None:
        args.format = run.get("format", "json")
    if not isinstance(args.max_steps, int) or args.max_steps < 1:
        raise SpecError("max_steps: expected a positive integer")
    if not isinstance(args.bound, int) or args.bound < 1:
        raise SpecError("bound: expected a positive integer")
    if args.format not in ("json", "text", "dot"):
        raise SpecError("format: expected json, text, or dot")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = _run(args)
        if args.format == "json":
            print(render_json(report))
        elif args.format == "text":
            print(render_text(report))
        else:
            print(render_dot(report))
        return code
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
