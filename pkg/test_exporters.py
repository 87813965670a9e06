import io

import pytest

from errors import InvalidMatrixError
from exporters import (SEQUENCE_FIELDS, export_dot, node_label, read_jsonl, write_census_csv, write_jsonl,
                       write_sequence_csv)
from growth import family_sequence
from poset import boolean_lattice, build_poset, mobius
from tesler_generator import enumerate_family
from tesler_matrix import GTMatrix


def edge_lines(dot):
    return [line for line in dot.splitlines() if '->' in line]


def node_lines(dot):
    return [line for line in dot.splitlines() if '[label=' in line]


def test_dot_for_p111():
    p = build_poset((1, 1, 1))
    dot = export_dot(p)
    assert dot.startswith('digraph "P(1,1,1)" {')
    assert 'rankdir=BT;' in dot
    assert len(node_lines(dot)) == 7
    assert len(edge_lines(dot)) == 10
    assert dot.count('rank=same') == 4
    assert '[label="0 1 0 / 1 1 / 2"]' in dot


def test_dot_mobius_annotation():
    p = build_poset((1, 1, 1))
    dot = export_dot(p, mobius(p))
    assert dot.count('\\nmu=-1"') == 4
    assert dot.count('\\nmu=2"') == 1


def test_dot_for_boolean_lattice():
    dot = export_dot(boolean_lattice(2), name='B2')
    assert dot.startswith('digraph "B2" {')
    assert len(node_lines(dot)) == 4
    assert len(edge_lines(dot)) == 4
    assert '[label="{1,2}"]' in dot
    assert '[label="{}"]' in dot


def test_dot_is_deterministic():
    assert export_dot(build_poset((1, 0, 1))) == export_dot(build_poset((1, 0, 1)))


def test_node_labels():
    assert node_label(GTMatrix.bottom((1, 1))) == "1 0 / 1"
    assert node_label(frozenset({2, 1})) == "{1,2}"
    assert node_label((frozenset(), 3)) == "{} | 3"


def test_jsonl():
    family = enumerate_family((1, 1, 1))
    stream = io.StringIO()
    assert write_jsonl(family, stream) == 7
    lines = stream.getvalue().splitlines()
    assert lines[0] == '{"n":3,"alpha":[1,1,1],"rows":[[0,0,1],[0,1],[3]]}'
    stream.seek(0)
    assert tuple(read_jsonl(stream)) == family.matrices


def test_jsonl_reports_the_bad_line():
    stream = io.StringIO('{"n":1,"alpha":[1],"rows":[[1]]}\n\nnot json\n')
    with pytest.raises(InvalidMatrixError, match="line 3"):
        list(read_jsonl(stream))


def test_census_csv():
    stream = io.StringIO()
    write_census_csv([((1, 1, 1), 7), ((1, 0), 2)], stream)
    assert stream.getvalue() == 'alpha,count\n"1,1,1",7\n"1,0",2\n'


def test_sequence_csv():
    report = family_sequence('ones-then-zeros', 4, k=2)
    stream = io.StringIO()
    write_sequence_csv(report, stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ','.join(SEQUENCE_FIELDS)
    assert lines[4] == 'ones-then-zeros(k=2),4,25,27,,below'
