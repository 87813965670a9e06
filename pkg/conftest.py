import pytest

from database import CensusStore, init_database


@pytest.fixture
def db_session():
    session, engine = init_database(':memory:')
    yield session
    session.close()
    engine.dispose()


@pytest.fixture
def census(db_session):
    return CensusStore(db_session=db_session)
