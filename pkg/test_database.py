import json

from database import CensusStore, CheckResult, FamilyCount, VerificationRun


def test_put_and_get(census):
    assert census.get((1, 1, 1)) is None
    census.put((1, 1, 1), 7)
    assert census.get((1, 1, 1)) == 7
    assert census.get("1,1,1") == 7


def test_put_overwrites(census, db_session):
    census.put((1, 1), 3)
    census.put((1, 1), 2)
    assert census.get((1, 1)) == 2
    assert db_session.query(FamilyCount).count() == 1


def test_large_counts_survive(census):
    census.put((1,) * 11, 515_564_231_770)
    assert census.get((1,) * 11) == 515_564_231_770


def test_all_counts_sorted_by_size(census):
    census.put((1, 1, 1), 7)
    census.put((1, 1), 2)
    census.put((0, 1), 1)
    assert census.all_counts() == [("0,1", 1), ("1,1", 2), ("1,1,1", 7)]


def test_record_run(census, db_session):
    report = {'criteria': {
        'counting': [{'check': 'tesler_count', 'passed': True, 'n': 3}],
        'quotient_pipeline': [
            {'check': 'homogeneity', 'passed': False, 'finding': True},
            {'check': 'summation', 'passed': False},
        ],
    }}
    run = census.record_run(report, full=False, report_file='report.json')
    assert run.total_checks == 3
    assert run.failed_checks == 1
    stored = db_session.query(VerificationRun).one()
    assert stored.report_file == 'report.json'
    finding = db_session.query(CheckResult).filter_by(name='homogeneity').one()
    assert finding.finding and finding.passed is False
    assert json.loads(finding.detail)['check'] == 'homogeneity'


def test_store_opens_its_own_database(tmp_path):
    path = tmp_path / 'census.db'
    CensusStore(db_path=str(path)).put((1, 0), 2)
    assert CensusStore(db_path=str(path)).get((1, 0)) == 2
