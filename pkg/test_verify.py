import pytest

import verify
from config import PROPERTY_PAIRS
from database import VerificationRun
from verify import HOMOGENEITY_FAILURES, TeslerVerifier, binary_vectors

SMALL_CRITERIA = {
    'counting': [{'check': 'tesler_count', 'passed': True, 'n': 3, 'value': 7, 'expected': 7}],
    'quotient_pipeline': [{'check': 'homogeneity', 'passed': False, 'finding': True, 'alpha': [1, 0, 1], 'r': 2}],
}


@pytest.fixture
def verifier():
    return TeslerVerifier()


def all_passed(checks):
    return [c for c in checks if not c['passed'] and not c.get('finding')] == []


def test_binary_vectors():
    vectors = list(binary_vectors(3))
    assert len(vectors) == 2 + 4 + 8
    assert vectors[0] == (0,)
    assert vectors[-1] == (1, 1, 1)


def test_boolean_lattice_criterion(verifier):
    checks = verifier.verify_boolean_lattice()
    assert len(checks) == 18
    assert all_passed(checks)


def test_non_factoring_criterion(verifier):
    assert all_passed(verifier.verify_non_factoring())


def test_mobius_bound_criterion(verifier):
    checks = verifier.verify_mobius_bound()
    assert len(checks) == 6
    assert all_passed(checks)
    assert checks[2]['kind'] == 'mobius_bound'
    assert checks[2]['max_abs_mobius'] == 2


def test_main_theorem_criterion(verifier):
    checks = verifier.verify_main_theorem()
    assert len(checks) == 62
    assert all_passed(checks)


def test_multiplicativity_sweep_is_seeded(verifier):
    checks = verifier._multiplicativity_checks()
    assert len(checks) == 3 + PROPERTY_PAIRS
    assert all(c['passed'] for c in checks)
    assert checks == verifier._multiplicativity_checks()


def test_quotient_pipeline_reports_homogeneity_as_finding(verifier):
    checks = verifier.verify_quotient_pipeline()
    assert all_passed(checks)
    homogeneity = [c for c in checks if c['check'] == 'homogeneity']
    assert len(homogeneity) == 49
    failing = [c for c in homogeneity if not c['passed']]
    assert len(failing) == len(HOMOGENEITY_FAILURES) == 22
    assert all(c['finding'] for c in failing)
    assert not any(c.get('finding') for c in homogeneity if c['passed'])
    assert {(tuple(c['alpha']), c['r']) for c in failing} == HOMOGENEITY_FAILURES
    assert all(c['passed'] for c in checks if c['check'] == 'summation')


def test_unlisted_homogeneity_failure_is_a_failure(verifier, monkeypatch):
    monkeypatch.setattr(verify, 'binary_vectors', lambda max_length: iter([(1, 0, 1)]))
    monkeypatch.setattr(verify, 'HOMOGENEITY_FAILURES', frozenset())
    failures = TeslerVerifier.failures({'quotient_pipeline': verifier.verify_quotient_pipeline()})
    assert [(c['check'], c['alpha'], c['r']) for _, c in failures] == [('homogeneity', [1, 0, 1], 2)]


def test_listed_homogeneity_pass_is_a_failure(verifier, monkeypatch):
    monkeypatch.setattr(verify, 'binary_vectors', lambda max_length: iter([(0, 0, 1)]))
    monkeypatch.setattr(verify, 'HOMOGENEITY_FAILURES', frozenset({((0, 0, 1), 2)}))
    failures = TeslerVerifier.failures({'quotient_pipeline': verifier.verify_quotient_pipeline()})
    assert [(c['check'], c['r']) for _, c in failures] == [('homogeneity', 2)]


def test_flatten_marks_informational_checks(verifier):
    flattened = verifier._flatten([
        {'check': 'a', 'passed': True},
        {'check': 'b', 'passed': None},
        {'check': 'c', 'passed': False, 'informational': True},
    ], n=4)
    assert [c['check'] for c in flattened] == ['a', 'c']
    assert flattened[1]['finding'] and flattened[1]['n'] == 4


def test_failures_skip_findings():
    assert TeslerVerifier.failures(SMALL_CRITERIA) == []
    assert len(TeslerVerifier.findings(SMALL_CRITERIA)) == 1


def test_report_is_byte_identical(monkeypatch, tmp_path):
    monkeypatch.setattr(TeslerVerifier, 'run_all', lambda self: SMALL_CRITERIA)
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    report = TeslerVerifier().generate_report(str(first))
    TeslerVerifier().generate_report(str(second))
    assert first.read_bytes() == second.read_bytes()
    assert report['passed']
    assert report['summary'] == {'total_checks': 2, 'failed_checks': 0, 'findings': 1}


def test_report_recorded_in_census(monkeypatch, tmp_path, census, db_session):
    monkeypatch.setattr(TeslerVerifier, 'run_all', lambda self: SMALL_CRITERIA)
    TeslerVerifier(census=census).generate_report(str(tmp_path / 'report.json'))
    run = db_session.query(VerificationRun).one()
    assert run.total_checks == 2
    assert run.failed_checks == 0


def test_print_summary(monkeypatch, capsys):
    monkeypatch.setattr(TeslerVerifier, 'run_all', lambda self: SMALL_CRITERIA)
    TeslerVerifier().print_summary()
    out = capsys.readouterr().out
    assert 'Tesler Verification Summary' in out
    assert 'counting: 1/1 checks passed' in out
    assert 'quotient_pipeline/homogeneity: does not hold' in out


@pytest.mark.slow
def test_full_suite_passes(tmp_path):
    report = TeslerVerifier().generate_report(str(tmp_path / 'report.json'))
    assert report['passed'], TeslerVerifier.failures(report['criteria'])
