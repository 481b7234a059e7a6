"""Acceptance criteria: one test per criterion, at the stated tolerances.

Each test asserts on records from the shared check registry (or runs the
relevant scenario directly) and reports a single pass/fail line under
pytest -v.
"""

import json

from mpmath import mp, mpf

from e6lax import cli


def _assert_records(records, spec):
    """spec: iterable of (check id, tolerance)."""
    for check_id, tol in spec:
        rec = records[check_id]
        assert rec.residual < mpf(tol), (
            "%s: residual %s exceeds %s"
            % (check_id, mp.nstr(rec.residual, 8), tol))


def test_criterion_01_weight_structure(records):
    _assert_records(records, [
        ("weight.semiclassical-ratio", "1e-30"),
        ("weight.deformation-ratio", "1e-30"),
        ("weight.spectral-deformation-consistency", "1e-30"),
    ])


def test_criterion_02_orthogonal_polynomials(records):
    _assert_records(records, [
        ("ops.orthogonality", "1e-25"),
        ("ops.casoratian", "1e-25"),
        ("ops.expansion-coefficients", "1e-25"),
    ])


def test_criterion_03_spectral_matrix(records):
    _assert_records(records, [
        ("spectral.determinant", "1e-25"),
        ("spectral.leading-diagonal", "1e-30"),
        ("spectral.quadratic-identity", "1e-25"),
        ("spectral.closed-form", "1e-25"),
    ])


def test_criterion_04_index_recurrences(records):
    _assert_records(records, [
        ("recurrence.spectral-coefficients", "1e-25"),
    ])


def test_criterion_05_deformation_matrix(records):
    _assert_records(records, [
        ("deformation.determinant", "1e-25"),
        ("deformation.offdiagonal-relations", "1e-25"),
        ("deformation.closed-form", "1e-25"),
        ("deformation.residue-relations", "1e-25"),
    ])


def test_criterion_06_compatibility(records):
    _assert_records(records, [
        ("compatibility.schlesinger", "1e-25"),
    ])


def test_criterion_07_dynamics(records):
    _assert_records(records, [
        ("dynamics.coupled-evolution", "1e-20"),
        ("dynamics.step-forward", "1e-20"),
        ("dynamics.third-evolution", "1e-20"),
        ("dynamics.roundtrip", "1e-25"),
    ])


def test_criterion_08_first_correspondence(records):
    _assert_records(records, [
        ("sakai.build-vs-spectral", "1e-25"),
        ("sakai.matrix-properties", "1e-25"),
        ("sakai.deformation-compatibility", "1e-20"),
        ("sakai.parameter-dictionary", "1e-20"),
    ])


def test_criterion_09_second_correspondence(records):
    _assert_records(records, [
        ("yamada.scalar-coefficients", "1e-20"),
        ("yamada.mixed-relation", "1e-20"),
        ("yamada.mixed-coefficient-displays", "1e-20"),
        ("yamada.gauge-ratio-displays", "1e-25"),
        ("yamada.system-pullback", "1e-25"),
        ("yamada.scalar-pullback", "1e-25"),
    ])


def test_criterion_10_deterministic_reports(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = cli.main(["--json", "--out", str(out), "--seed", "3",
                         "selftest"])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    report = json.loads(outs[0])
    assert report["passed"] is True
