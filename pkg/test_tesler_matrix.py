import json

import pytest

from errors import InvalidHookVectorError, InvalidMatrixError, UnsupportedInputError
from tesler_matrix import (GTMatrix, HookSumVector, IntegralFlow, cell_index, diagonal_product, from_flow,
                           hook_sums, single_one_vector, subset_map, to_flow)

ROWS = [[0, 1, 0], [1, 1], [2]]
JSON_TEXT = '{"n":3,"alpha":[1,1,1],"rows":[[0,1,0],[1,1],[2]]}'


def test_hook_sum_vector_parses_text():
    alpha = HookSumVector("1, 0,2")
    assert alpha == (1, 0, 2)
    assert alpha.n == 3
    assert str(alpha) == "1,0,2"
    assert not alpha.is_binary
    assert HookSumVector([1, 0, 1]).is_binary


@pytest.mark.parametrize("bad", ["", "1,-1", "a,b", []])
def test_hook_sum_vector_rejects(bad):
    with pytest.raises(InvalidHookVectorError):
        HookSumVector(bad)


def test_from_rows_infers_alpha():
    m = GTMatrix.from_rows(ROWS)
    assert m.alpha == (1, 1, 1)
    assert m.entry(1, 2) == 1
    assert m.entry(3, 1) == 0
    assert m.diagonal == (0, 1, 2)
    assert m.rank == 2
    assert diagonal_product(m) == 6
    assert m.positive_entries() == (1, 1, 1, 2)


def test_from_rows_checks_declared_alpha():
    with pytest.raises(InvalidMatrixError):
        GTMatrix.from_rows(ROWS, alpha=(1, 1, 2))


@pytest.mark.parametrize("rows", [
    [[0, 1], [1, 1], [2]],
    [[1, -1, 0], [1, 1], [2]],
    [[0, 2**32, 0], [1, 1], [2]],
])
def test_from_rows_rejects_malformed(rows):
    with pytest.raises(InvalidMatrixError):
        GTMatrix.from_rows(rows)


def test_json_format():
    m = GTMatrix.from_rows(ROWS)
    assert m.dumps() == JSON_TEXT
    assert GTMatrix.from_json(JSON_TEXT) == m
    assert GTMatrix.from_json(json.loads(JSON_TEXT)) == m


def test_from_json_rejects_wrong_size():
    data = json.loads(JSON_TEXT)
    data['n'] = 4
    with pytest.raises(InvalidMatrixError):
        GTMatrix.from_json(data)


def test_text_forms():
    m = GTMatrix.from_rows(ROWS)
    assert str(m) == "[[0,1,0],[1,1],[2]]"
    assert m.label() == "0 1 0 / 1 1 / 2"
    assert m.to_square() == [[0, 1, 0], [0, 1, 1], [0, 0, 2]]
    assert GTMatrix.from_square(m.to_square()) == m


def test_hook_sums_of_square_matrix():
    assert hook_sums([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (1, 1, 1)
    assert hook_sums([[0, 1, 0], [0, 1, 1], [0, 0, 2]]) == (1, 1, 1)
    with pytest.raises(InvalidMatrixError):
        hook_sums([[1, 0], [1, 1]])


def test_bottom_has_alpha_on_diagonal():
    m = GTMatrix.bottom((1, 0, 2))
    assert m.diagonal == (1, 0, 2)
    assert m.rank == 0
    assert m.validate() is m


def test_cell_index_is_row_major():
    assert [cell_index(3, i, j) for i in range(1, 4) for j in range(i, 4)] == list(range(6))


def test_addition_sums_alpha():
    total = GTMatrix.bottom((1, 0, 0)) + GTMatrix.bottom((0, 0, 1))
    assert total.alpha == (1, 0, 1)
    assert total.diagonal == (1, 0, 1)


def test_flow_round_trip():
    m = GTMatrix.from_rows(ROWS)
    flow = to_flow(m)
    assert flow.vertices == 4
    assert flow.netflow == (1, 1, 1, -3)
    assert flow.value(3, 4) == 2
    assert flow.value(1, 3) == 0
    assert from_flow(flow) == m


def test_flow_conservation_is_checked():
    with pytest.raises(InvalidMatrixError):
        from_flow(IntegralFlow(3, {(1, 2): 1}, (1, 0, -1)))
    with pytest.raises(InvalidMatrixError):
        from_flow(IntegralFlow(3, {(1, 3): 1}, (1, 0, 0)))


def test_flow_rejects_backward_edge():
    with pytest.raises(InvalidMatrixError):
        IntegralFlow(3, {(2, 1): 1}, (0, 1, -1))


def test_subset_map():
    assert subset_map(GTMatrix.bottom(single_one_vector(3))) == frozenset()
    assert subset_map(GTMatrix.from_rows([[0, 1, 0], [1, 0], [0]])) == {2}
    assert subset_map(GTMatrix.from_rows([[0, 0, 1], [0, 0], [1]])) == {1}


def test_subset_map_needs_single_one():
    with pytest.raises(UnsupportedInputError):
        subset_map(GTMatrix.from_rows(ROWS))
