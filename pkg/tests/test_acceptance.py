"""Acceptance gate: one test per shipped guarantee, at its stated budget.

Each test here restates a headline behavior end to end; the unit suites
carry the fine-grained variants.  Budgets are wall-clock upper bounds,
asserted only when the body succeeded, so a failure always surfaces as
the real mismatch rather than as a timeout artifact.
"""

from __future__ import annotations

import itertools
import json
import random
import time

import pytest

from jaffard.cli import (
    DEMOS,
    EXIT_BUDGET,
    EXIT_NOT_PRE_JAFFARD,
    EXIT_OK,
    EXIT_SEMISTAR_FAIL,
    EXIT_SPEC,
    main,
)
from jaffard.domain import Overring, SemilocalPrufer, SequenceDomain
from jaffard.family import (
    AlreadyJaffard,
    Family,
    Verdict,
    derived_sequence,
    derived_step,
    is_jaffard_overring,
)
from jaffard.ordinal import ONE, ZERO, Ordinal, omega_quotient, omega_times, parse_ordinal
from jaffard.semistar import (
    StableOp,
    apply,
    enumerate_stable,
    factorization_iso,
    is_stable_preserving,
    roundtrip_check,
    support_ops,
    truncated_modules,
    verify_axioms,
)
from jaffard.space import (
    Cantor,
    Discrete,
    OrdinalInterval,
    PresentedSpace,
    SetDescriptor,
    cb_derivative,
    cb_iterate,
    cb_rank,
    is_scattered,
)

from conftest import CORPUS_SEED, corpus_spaces, sample_finite_points
from test_cli import run_cli
from test_semistar import as_vector, oracle_apply
from test_space import interval_points, oracle_in_derivative


class within:
    """Assert on exit that the block stayed under a wall-clock budget."""

    def __init__(self, seconds: float):
        self.budget = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            elapsed = time.perf_counter() - self.start
            assert elapsed < self.budget, (
                f"took {elapsed:.2f}s, budget {self.budget:.0f}s"
            )
        return False


def canonical_family(*atoms) -> Family:
    space, _ = PresentedSpace.build(list(atoms))
    return Family.all_localizations(SequenceDomain(space))


def fixture_families() -> list[Family]:
    return [
        Family.all_localizations(SemilocalPrufer(3)),
        canonical_family(OrdinalInterval(ONE, 1)),
        canonical_family(OrdinalInterval(ONE, 2)),
        canonical_family(OrdinalInterval(ONE, 5)),
        canonical_family(Cantor()),
        canonical_family(Discrete(1), Cantor()),
    ]


_corpus_runs: list | None = None


def corpus_runs():
    """Derived sequences over the shared corpus, computed once per session."""
    global _corpus_runs
    if _corpus_runs is None:
        _corpus_runs = [
            (space, derived_sequence(
                Family.all_localizations(SequenceDomain(space))
            ))
            for space in corpus_spaces()
        ]
    return _corpus_runs


def test_criterion_1_degree_table():
    with within(1.0):
        seq = derived_sequence(Family.all_localizations(SemilocalPrufer(3)))
        assert (seq.degree, seq.verdict) == (ONE, Verdict.SHARP)

        seq = derived_sequence(canonical_family(OrdinalInterval(ONE, 1)))
        assert (seq.degree, seq.verdict) == (Ordinal.from_int(2), Verdict.SHARP)

        for n in (1, 2, 5):
            seq = derived_sequence(canonical_family(OrdinalInterval(ONE, n)))
            assert (seq.degree, seq.verdict) == (
                Ordinal.from_int(2), Verdict.SHARP
            )
            assert seq.stages[1].family.member_count() == n

        space, _ = PresentedSpace.build([Cantor()])
        model = SequenceDomain(space)
        seq = derived_sequence(Family.all_localizations(model))
        assert (seq.degree, seq.verdict) == (ZERO, Verdict.DULL)
        assert seq.dull_limit == model.ring()

        seq = derived_sequence(canonical_family(Discrete(1), Cantor()))
        assert (seq.degree, seq.verdict) == (ONE, Verdict.DULL)


def test_criterion_2_stage_descriptors_match_derivative_iterates():
    with within(5.0):
        runs = corpus_runs()
        assert len(runs) >= 20
        for space, seq in runs:
            for stage in seq.stages:
                assert stage.family.point_part == cb_iterate(space, stage.alpha)


def test_criterion_3_degree_is_rank_and_sharp_is_scattered():
    for space, seq in corpus_runs():
        assert seq.degree == cb_rank(space)
        assert (seq.verdict is Verdict.SHARP) == is_scattered(space)


def test_criterion_4_semistar_suite():
    with within(60.0):
        for n in (1, 2, 3):
            ops = support_ops(SemilocalPrufer(n))
            assert len(ops) == 2 ** n
            for op in ops:
                report = verify_axioms(op, bound=3)
                assert report.ok and report.failed == 0

        rng = random.Random(CORPUS_SEED)
        for _ in range(100):
            model = SemilocalPrufer(rng.choice((1, 2, 3)))
            f = Family.all_localizations(model)
            ops = [
                StableOp(model, rng.choice((frozenset(), t.support)), t)
                for t in f.listed
            ]
            assert roundtrip_check(f, ops, bound=3)

        for n in (1, 2, 3):
            report = is_stable_preserving(
                Family.all_localizations(SemilocalPrufer(n)), bound=3
            )
            assert report.ok
        for fixture in fixture_families():
            assert is_stable_preserving(fixture, bound=3).ok
            current = fixture
            while True:
                try:
                    step = derived_step(current)
                except AlreadyJaffard:
                    break
                assert is_stable_preserving(step.weak, bound=3).ok
                if step.rest == current:
                    break
                current = step.rest

        reports = [
            factorization_iso(
                Family.all_localizations(SemilocalPrufer(n)), bound=3
            )
            for n in (1, 2, 3)
        ]
        assert [r.base_count for r in reports] == [2, 4, 8]
        assert all(r.ok and r.product_count == r.base_count for r in reports)

        lattice = enumerate_stable(SemilocalPrufer(1), bound=3)
        assert lattice.completeness == "SEARCH-VERIFIED"
        assert lattice.raw_search_count == 2
        assert len(lattice.ops) == 2


def test_criterion_5_equivalent_conditions_agree():
    for n in range(1, 5):
        model = SemilocalPrufer(n)
        supports = model.all_supports()
        for s in supports:
            t = Overring(model, s)
            ev = is_jaffard_overring(t)
            assert {v for v in ev.conditions.values() if v is not None} \
                == {ev.verdict}
            for b in supports:
                if not s <= b:
                    continue
                rel = is_jaffard_overring(t, Overring(model, b))
                assert {v for v in rel.conditions.values() if v is not None} \
                    == {rel.verdict}
    for space in corpus_spaces():
        model = SequenceDomain(space)
        for idx, p in sample_finite_points(space):
            ev = is_jaffard_overring(model.localization(idx, p))
            assert {v for v in ev.conditions.values() if v is not None} \
                == {ev.verdict}


def test_criterion_6_oracle_cross_checks():
    for rank in range(6):
        for copies in (1, 3):
            atom = OrdinalInterval(Ordinal.from_int(rank), copies)
            space = PresentedSpace.of(atom)
            derived = cb_derivative(SetDescriptor.full(space))
            for p in interval_points(atom):
                assert derived.contains(0, p) == oracle_in_derivative(atom, p, 1)

    for n in (1, 2, 3):
        model = SemilocalPrufer(n)
        vectors = [as_vector(model, m) for m in truncated_modules(model, 2)]
        for op in support_ops(model):
            for vec in vectors:
                assert apply(op, vec) == oracle_apply(op, vec)

    for a, b, c in itertools.product(range(4), repeat=3):
        if not (a or b or c):
            continue
        lam = ZERO
        for exp, coeff in ((3, a), (2, b), (1, c)):
            if coeff:
                lam = lam + Ordinal.omega_power(Ordinal.from_int(exp), coeff)
        assert omega_times(omega_quotient(lam)) == lam
    for text in ("w^(w)", "w^(w*2)*3 + w^2", "w^(w + 1)*2"):
        lam = parse_ordinal(text)
        assert omega_times(omega_quotient(lam)) == lam


def test_criterion_7_cli_determinism_and_exit_codes(tmp_path, capsys):
    seen = set()
    for demo in sorted(DEMOS):
        code1, out1, _ = run_cli(capsys, ["demo", demo])
        code2, out2, _ = run_cli(capsys, ["demo", demo])
        assert code1 == code2
        assert out1 == out2
        json.loads(out1)
        seen.add(code1)
    assert seen == {EXIT_OK, EXIT_SEMISTAR_FAIL}

    bad = tmp_path / "bad.toml"
    bad.write_text('[domain]\nkind = "semilocal"\nn = 2\nbogus = 1\n')
    code, _, err = run_cli(capsys, ["check", "--input", str(bad)])
    assert code == EXIT_SPEC and "bogus" in err
    seen.add(code)

    incomplete = tmp_path / "incomplete.toml"
    incomplete.write_text(
        '[domain]\nkind = "semilocal"\nn = 3\n\n'
        '[family]\nkind = "members"\nmembers = [[1], [2]]\n'
    )
    code, out, _ = run_cli(capsys, ["derive", "--input", str(incomplete)])
    assert code == EXIT_NOT_PRE_JAFFARD
    assert json.loads(out)["failed_flags"] == ["complete"]
    seen.add(code)

    deep = tmp_path / "deep.toml"
    deep.write_text(
        '[domain]\nkind = "sequence"\n\n'
        '[space]\natoms = [{kind = "interval", rank = "5", copies = 1}]\n\n'
        '[run]\nmax_steps = 3\n'
    )
    code, out, _ = run_cli(capsys, ["derive", "--input", str(deep)])
    assert code == EXIT_BUDGET
    assert json.loads(out)["budget_exceeded"] is True
    seen.add(code)

    with pytest.raises(SystemExit) as err:
        main(["derive"])
    assert err.value.code == EXIT_SPEC

    code, _, _ = run_cli(capsys, ["derive", "--input", str(tmp_path / "job.toml")])
    seen.add(code)
    assert seen == {EXIT_OK, EXIT_SPEC, EXIT_NOT_PRE_JAFFARD,
                    EXIT_BUDGET, EXIT_SEMISTAR_FAIL}
