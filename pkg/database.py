from sqlalchemy import create_engine, Column, String, Text, Integer, ForeignKey, Boolean
from sqlalchemy.orm import declarative_base, sessionmaker, relationship
import json
import logging

from config import DEFAULT_DB_PATH
from tesler_matrix import HookSumVector

logger = logging.getLogger(__name__)

Base = declarative_base()

class FamilyCount(Base):
    __tablename__ = 'family_counts'

    alpha = Column(String, primary_key=True)
    n = Column(Integer, nullable=False)
    # decimal string: counts outgrow 64-bit integers
    count = Column(Text, nullable=False)

class VerificationRun(Base):
    __tablename__ = 'verification_runs'

    id = Column(Integer, primary_key=True)
    full = Column(Boolean, default=False)
    total_checks = Column(Integer)
    failed_checks = Column(Integer)
    report_file = Column(String)

    checks = relationship('CheckResult', back_populates='run', cascade='all, delete-orphan')

class CheckResult(Base):
    __tablename__ = 'check_results'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('verification_runs.id'))
    criterion = Column(String)
    name = Column(String)
    passed = Column(Boolean)
    finding = Column(Boolean, default=False)
    detail = Column(Text)

    run = relationship('VerificationRun', back_populates='checks')

def init_database(db_path=DEFAULT_DB_PATH):
    url = 'sqlite://' if db_path == ':memory:' else f'sqlite:///{db_path}'
    engine = create_engine(url)
    Base.metadata.create_all(engine)
    Session = sessionmaker(bind=engine)
    return Session(), engine

class CensusStore:
    """Cache of family counts keyed by hook-sum vector text."""

    def __init__(self, db_session=None, db_path=DEFAULT_DB_PATH):
        self.session, _ = init_database(db_path) if not db_session else (db_session, None)

    def get(self, alpha):
        row = self.session.get(FamilyCount, str(HookSumVector(alpha)))
        return int(row.count) if row else None

    def put(self, alpha, value):
        alpha = HookSumVector(alpha)
        row = self.session.get(FamilyCount, str(alpha))
        if row is None:
            self.session.add(FamilyCount(alpha=str(alpha), n=len(alpha), count=str(value)))
        else:
            row.count = str(value)
        self.session.commit()
        logger.debug(f"Stored T({alpha}) = {value}")

    def all_counts(self):
        return [(row.alpha, int(row.count)) for row in
                self.session.query(FamilyCount).order_by(FamilyCount.n, FamilyCount.alpha)]

    def record_run(self, report, full=False, report_file=None):
        run = VerificationRun(full=full, report_file=report_file)
        for criterion, checks in report['criteria'].items():
            for check in checks:
                run.checks.append(CheckResult(
                    criterion=criterion,
                    name=check['check'],
                    passed=check['passed'],
                    finding=bool(check.get('finding')),
                    detail=json.dumps(check, sort_keys=True, default=str),
                ))
        run.total_checks = len(run.checks)
        run.failed_checks = sum(1 for c in run.checks if c.passed is False and not c.finding)
        self.session.add(run)
        self.session.commit()
        logger.info(f"Recorded verification run {run.id}: {run.failed_checks} of {run.total_checks} checks failed")
        return run
