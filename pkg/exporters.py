"""JSON-lines, CSV and DOT output."""
import csv
import json
import logging

from errors import InvalidMatrixError
from tesler_matrix import GTMatrix, HookSumVector

logger = logging.getLogger(__name__)

SEQUENCE_FIELDS = ['family', 'n', 'value', 'bound_low', 'bound_high', 'verdict']


def node_label(label):
    if isinstance(label, GTMatrix):
        return label.label()
    if isinstance(label, frozenset):
        return '{' + ','.join(str(i) for i in sorted(label)) + '}' if label else '{}'
    if isinstance(label, tuple):
        return ' | '.join(node_label(part) for part in label)
    return str(label)


def export_dot(poset, mobius=None, name=None):
    """Hasse diagram of ``poset`` in DOT, drawn bottom-up with one rank per row."""
    title = name or poset.name or 'poset'
    lines = [f'digraph "{title}" {{', '  rankdir=BT;', '  node [shape=box, fontname="monospace"];']
    levels = {}
    for x in poset.order:
        levels.setdefault(poset.ranks[x], []).append(x)
    for rank in sorted(levels):
        members = ' '.join(f'n{x};' for x in levels[rank])
        lines.append(f'  {{ rank=same; {members} }}')
    for x, label in enumerate(poset.labels):
        text = node_label(label)
        if mobius is not None:
            text += f'\\nmu={mobius[x]}'
        lines.append(f'  n{x} [label="{text}"];')
    for lower, upper in sorted(poset.edges()):
        lines.append(f'  n{lower} -> n{upper};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def write_jsonl(matrices, stream):
    written = 0
    for matrix in matrices:
        stream.write(matrix.dumps() + '\n')
        written += 1
    logger.debug(f"Wrote {written} matrices as JSON lines")
    return written


def read_jsonl(stream):
    for number, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise InvalidMatrixError(f"line {number} is not JSON: {e}")
        yield GTMatrix.from_json(data)


def write_census_csv(rows, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['alpha', 'count'])
    for alpha, value in rows:
        writer.writerow([str(HookSumVector(alpha)), value])


def write_sequence_csv(report, stream, header=True):
    writer = csv.DictWriter(stream, fieldnames=SEQUENCE_FIELDS, lineterminator='\n')
    if header:
        writer.writeheader()
    for row in report.bounds:
        writer.writerow({'family': report.family, **{k: row[k] for k in SEQUENCE_FIELDS if k != 'family'}})
