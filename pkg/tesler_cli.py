#!/usr/bin/env python3
import json
import logging

import click

from config import (DEFAULT_DB_PATH, DEFAULT_HILBERT_CEILING, DEFAULT_JOBS, DEFAULT_MATRIX_CEILING,
                    DEFAULT_MOBIUS_PROBE_CEILING, DEFAULT_REPORT_FILE, DEFAULT_TRANSITION_CEILING,
                    JOIN_CHECK_LIMIT, LOG_FORMAT)
from database import CensusStore
from errors import (InvalidHookVectorError, InvalidMatrixError, ResourceLimitError, UnsupportedInputError,
                    VerificationError)
from exporters import export_dot, node_label, read_jsonl, write_census_csv, write_jsonl, write_sequence_csv
from growth import (FAMILY_KINDS, armstrong_polynomial, family_sequence, mobius_bound_probe, parking_bound_probe,
                    verify_bounds)
from harmonics import hilbert_series
from polynomials import CONVENTIONS, coefficients, format_poly, specialize
from poset import build_poset, characteristic_polynomial, find_join_failure, mobius, poset_from_matrices
from quotient import check_hs_conditions, format_factored, quotient_by_sum, verify_factorization
from tesler_generator import count, enumerate_family
from tesler_matrix import HookSumVector
from verify import TeslerVerifier

logger = logging.getLogger(__name__)

EXIT_VERIFICATION_FAILED = 1
EXIT_RESOURCE_LIMIT = 3


class TeslerGroup(click.Group):
    """Maps library errors onto exit codes: 3 for a ceiling, 2 for bad input, 1 for a broken identity."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ResourceLimitError as e:
            logger.error(str(e))
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_RESOURCE_LIMIT)
        except (InvalidHookVectorError, InvalidMatrixError, UnsupportedInputError) as e:
            raise click.UsageError(str(e), ctx)
        except VerificationError as e:
            logger.error(str(e))
            click.echo(f"Verification failed: {e}", err=True)
            ctx.exit(EXIT_VERIFICATION_FAILED)


def parse_alpha(ctx, param, value):
    if value is None:
        return None
    try:
        return HookSumVector(value)
    except InvalidHookVectorError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)


def alpha_option(required=True):
    return click.option('--alpha', callback=parse_alpha, required=required,
                        help='Hook-sum vector, comma separated, e.g. 1,1,1')


def out_option():
    return click.option('--out', type=click.File('w'), default='-', help='Output file (default: stdout)')


def jobs_option():
    return click.option('--jobs', default=DEFAULT_JOBS, show_default=True, help='Worker processes')


def ceiling_option(default, what):
    return click.option('--ceiling', type=int, default=default, show_default=True,
                        help=f'Refuse work beyond this many {what}')


def open_census(db_path):
    return CensusStore(db_path=db_path) if db_path else None


def from_jsonl_option():
    return click.option('--from-jsonl', 'source', type=click.File('r'), default=None,
                        help='Build the poset from matrices written by enumerate')


def load_poset(alpha, source, ceiling, jobs):
    if source is not None:
        return poset_from_matrices(read_jsonl(source), alpha)
    if alpha is None:
        raise click.UsageError('give --alpha or --from-jsonl')
    return build_poset(alpha, ceiling=ceiling, jobs=jobs)


def emit_json(data, out):
    json.dump(data, out, indent=2, sort_keys=True, default=str)
    out.write('\n')


@click.group(cls=TeslerGroup)
@click.option('--verbose', is_flag=True, help='Debug logging')
def cli(verbose):
    """Tesler matrix census toolkit - enumerate, count and verify generalized Tesler matrices"""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT)


@cli.command('enumerate')
@alpha_option()
@click.option('--format', 'fmt', type=click.Choice(['json', 'text']), default='json', show_default=True)
@out_option()
@ceiling_option(DEFAULT_MATRIX_CEILING, 'matrices')
@jobs_option()
@click.option('--progress', is_flag=True, help='Show a progress bar')
def enumerate_command(alpha, fmt, out, ceiling, jobs, progress):
    """List every matrix of T(alpha), one JSON object per line"""
    family = enumerate_family(alpha, ceiling=ceiling, jobs=jobs, progress=progress)
    if fmt == 'json':
        write_jsonl(family, out)
    else:
        for matrix in family:
            out.write(f"{matrix}\n")
    logger.info(f"T({alpha}) has {family.count} matrices")


@cli.command('count')
@alpha_option()
@click.option('--format', 'fmt', type=click.Choice(['text', 'csv', 'json']), default='text', show_default=True)
@out_option()
@ceiling_option(DEFAULT_TRANSITION_CEILING, 'diagonal transitions per level')
@jobs_option()
@click.option('--db', 'db_path', default=None, help=f'Census cache, e.g. {DEFAULT_DB_PATH}')
@click.option('--progress', is_flag=True, help='Show a progress bar')
def count_command(alpha, fmt, out, ceiling, jobs, db_path, progress):
    """Count T(alpha) without building the matrices"""
    census = open_census(db_path)
    value = census.get(alpha) if census else None
    if value is None:
        value = count(alpha, jobs=jobs, ceiling=ceiling, progress=progress)
        if census:
            census.put(alpha, value)
    else:
        logger.info(f"T({alpha}) found in census")
    if fmt == 'csv':
        write_census_csv([(alpha, value)], out)
    elif fmt == 'json':
        emit_json({'alpha': list(alpha), 'count': value}, out)
    else:
        out.write(f"{value}\n")


@cli.command()
@alpha_option(required=False)
@from_jsonl_option()
@click.option('--format', 'fmt', type=click.Choice(['text', 'json', 'dot']), default='text', show_default=True)
@click.option('--dot', is_flag=True, help='Same as --format dot')
@click.option('--annotate-mobius', is_flag=True, help='Label DOT nodes with mu(0, x)')
@out_option()
@ceiling_option(DEFAULT_MATRIX_CEILING, 'matrices')
@jobs_option()
def poset(alpha, source, fmt, dot, annotate_mobius, out, ceiling, jobs):
    """Statistics or the Hasse diagram of P(alpha)"""
    p = load_poset(alpha, source, ceiling, jobs)
    if dot or fmt == 'dot':
        out.write(export_dot(p, mobius(p).values if annotate_mobius else None))
        return

    stats = {
        'alpha': list(p.labels[0].alpha),
        'elements': len(p),
        'covers': len(p.edges()),
        'rank': p.rank,
        'level_sizes': list(p.level_sizes()),
    }
    if len(p) <= JOIN_CHECK_LIMIT:
        failure = find_join_failure(p)
        stats['lattice'] = failure is None
        if failure:
            a, b, minimal = failure
            stats['join_failure'] = {'pair': [node_label(p.labels[a]), node_label(p.labels[b])],
                                     'minimal_upper_bounds': [node_label(p.labels[u]) for u in minimal]}
    if fmt == 'json':
        emit_json(stats, out)
        return

    out.write(f"{p.name}\n")
    out.write(f"  elements: {stats['elements']}\n")
    out.write(f"  covers: {stats['covers']}\n")
    out.write(f"  rank: {stats['rank']}\n")
    out.write(f"  level sizes: {' '.join(str(s) for s in stats['level_sizes'])}\n")
    if 'lattice' not in stats:
        out.write(f"  lattice: not checked (more than {JOIN_CHECK_LIMIT} elements)\n")
    elif stats['lattice']:
        out.write("  lattice: yes\n")
    else:
        failure = stats['join_failure']
        out.write(f"  lattice: no, [{failure['pair'][0]}] and [{failure['pair'][1]}] have "
                  f"{len(failure['minimal_upper_bounds'])} minimal upper bounds\n")


@cli.command()
@alpha_option(required=False)
@from_jsonl_option()
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text', show_default=True)
@out_option()
@ceiling_option(DEFAULT_MATRIX_CEILING, 'matrices')
@jobs_option()
def charpoly(alpha, source, fmt, out, ceiling, jobs):
    """Characteristic polynomial of P(alpha), with its (q-1) power pulled out"""
    p = load_poset(alpha, source, ceiling, jobs)
    chi = characteristic_polynomial(p)
    raw = coefficients(chi)
    # descending from q^rank down to q^0
    vector = [raw.get((k,), 0) for k in range(p.rank, -1, -1)]
    if fmt == 'json':
        emit_json({'alpha': list(p.labels[0].alpha), 'factored': format_factored(chi),
                   'chi': format_poly(chi, descending=True), 'coefficients': vector}, out)
        return
    out.write(f"{format_factored(chi)}\n")
    out.write(f"coefficients: {' '.join(str(c) for c in vector)}\n")


@cli.command('quotient-check')
@alpha_option()
@click.option('--r', 'r', type=int, default=None,
              help='Size of the shift-map poset; without it, trace the whole factorization of a binary alpha')
@out_option()
@ceiling_option(DEFAULT_MATRIX_CEILING, 'matrices')
def quotient_check(alpha, r, out, ceiling):
    """Run the quotient construction and report its conditions as JSON"""
    if r is None:
        trace = verify_factorization(alpha, ceiling=ceiling)
        emit_json(trace.to_dict(), out)
        if not trace.verified:
            raise VerificationError(f"factorization of P({alpha}) not established")
        return
    qp = quotient_by_sum(alpha, r, ceiling=ceiling)
    report = check_hs_conditions(qp)
    data = report.to_dict()
    data.update({'target': list(qp.target_alpha), 'product_size': len(qp.product), 'classes': len(qp.classes)})
    emit_json(data, out)


@cli.command()
@click.option('--n', 'n', type=int, required=True)
@click.option('--specialize', 'rule', default=None, help='t=0 or t=1/q')
@click.option('--at', 'point', default=None, help='Evaluate at a point, e.g. q=1,t=1')
@click.option('--convention', type=click.Choice(CONVENTIONS), default='haglund', show_default=True)
@click.option('--allow-large', is_flag=True, help='Permit n up to the large ceiling')
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text', show_default=True)
@out_option()
@ceiling_option(DEFAULT_HILBERT_CEILING, 'rows')
@jobs_option()
def hilbert(n, rule, point, convention, allow_large, fmt, out, ceiling, jobs):
    """Hilbert series of the diagonal harmonics as a weighted sum over T(1^n)"""
    result = hilbert_series(n, ceiling=ceiling, allow_large=allow_large, jobs=jobs, convention=convention)
    if point or rule:
        value = specialize(result.series, point or rule)
        out.write(f"{value if isinstance(value, int) else format_poly(value)}\n")
        return
    if fmt == 'json':
        emit_json(result.to_dict(), out)
    else:
        out.write(f"{format_poly(result.series)}\n")


@cli.command()
@alpha_option(required=False)
@click.option('--n', 'n', type=int, default=None, help='Shorthand for alpha = 1^n')
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text', show_default=True)
@out_option()
@ceiling_option(DEFAULT_TRANSITION_CEILING, 'diagonal transitions per level')
@jobs_option()
def armstrong(alpha, n, fmt, out, ceiling, jobs):
    """Distribution of diagonal products over T(alpha) as a polynomial in q"""
    if alpha is None:
        if n is None:
            raise click.UsageError('give --alpha or --n')
        alpha = HookSumVector((1,) * n)
    poly = armstrong_polynomial(alpha, jobs=jobs, ceiling=ceiling)
    if fmt == 'json':
        emit_json({'alpha': list(alpha), 'polynomial': str(poly),
                   'coefficients': {str(d): c for d, c in poly.dist.items()},
                   'value_at_one': poly.value_at_one(), 'derivative_at_one': poly.derivative_at_one()}, out)
    else:
        out.write(f"{poly}\n")


@cli.command()
@click.option('--kind', type=click.Choice(FAMILY_KINDS), default='ones-then-zeros', show_default=True)
@click.option('--n-max', type=int, required=True)
@click.option('--k', 'k', type=int, default=2, show_default=True, help='Number of leading ones')
@click.option('--format', 'fmt', type=click.Choice(['text', 'csv', 'json']), default='text', show_default=True)
@out_option()
@ceiling_option(DEFAULT_TRANSITION_CEILING, 'diagonal transitions per level')
@jobs_option()
@click.option('--db', 'db_path', default=None, help='Census cache')
def family(kind, n_max, k, fmt, out, ceiling, jobs, db_path):
    """T-values of a hook-sum family, checked against closed forms and recurrences"""
    census = open_census(db_path)
    report = family_sequence(kind, n_max, k=k, census=census, jobs=jobs, ceiling=ceiling)
    if fmt == 'csv':
        write_sequence_csv(report, out)
    elif fmt == 'json':
        emit_json(report.to_dict(), out)
    else:
        out.write(f"{report.family}\n")
        for row in report.bounds:
            out.write(f"  n={row['n']}: {row['value']} ({row['verdict']})\n")
        if report.recurrence_valid_from is not None:
            out.write(f"  recurrence holds from n={report.recurrence_valid_from}\n")
        failed = [c for c in report.checks if c['passed'] is False]
        out.write(f"  checks: {len(report.checks) - len(failed)}/{len(report.checks)} passed\n")
        if kind == 'ones-then-zeros':
            probe = parking_bound_probe(k, n_max, census=census, jobs=jobs, ceiling=ceiling)
            out.write(f"  parking bound from n={probe.detail['empirical_threshold']}\n")
    if not report.passed:
        raise VerificationError(f"{report.family} failed {sum(1 for c in report.checks if c['passed'] is False)} checks")


@cli.command()
@click.option('--n', 'n', type=int, required=True)
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text', show_default=True)
@out_option()
@ceiling_option(DEFAULT_TRANSITION_CEILING, 'diagonal transitions per level')
@jobs_option()
@click.option('--db', 'db_path', default=None, help='Census cache')
def bounds(n, fmt, out, ceiling, jobs, db_path):
    """Each link of the bound chain around T(1^n), judged on its own"""
    report = verify_bounds(n, census=open_census(db_path), jobs=jobs, ceiling=ceiling)
    if fmt == 'json':
        emit_json(report.to_dict(), out)
    else:
        for check in report.checks:
            if check['passed'] is None:
                verdict = 'n/a'
            else:
                verdict = 'holds' if check['passed'] else 'fails'
            note = ' (informational)' if check.get('informational') else ''
            out.write(f"{check['check']}: {verdict}{note}\n")
    if not report.passed:
        raise VerificationError(f"bounds at n={n} do not hold")


@cli.command('mobius-probe')
@click.option('--n', 'n', type=int, required=True)
@out_option()
@ceiling_option(DEFAULT_MOBIUS_PROBE_CEILING, 'rows')
def mobius_probe(n, out, ceiling):
    """Largest |mu(0, A)| over P(1^n) against n!"""
    probe = mobius_bound_probe(n, ceiling=ceiling)
    emit_json(probe.to_dict(), out)


@cli.command('verify-all')
@click.option('--full', is_flag=True, help='Include the minutes-scale T(1^11) count')
@click.option('--out', 'output_file', default=DEFAULT_REPORT_FILE, show_default=True, help='JSON report path')
@click.option('--db', 'db_path', default=None, help='Record the run in this database')
@click.option('--ceiling', type=int, default=None, help='Transition ceiling for the full count')
@jobs_option()
@click.pass_context
def verify_all(ctx, full, output_file, db_path, ceiling, jobs):
    """Run every acceptance check and write the report"""
    logger.info("Starting verification...")
    verifier = TeslerVerifier(census=open_census(db_path), full=full, jobs=jobs, ceiling=ceiling)
    verifier.print_summary()
    report = verifier.generate_report(output_file)
    if not report['passed']:
        logger.error(f"{report['summary']['failed_checks']} checks failed")
        ctx.exit(EXIT_VERIFICATION_FAILED)
    logger.info("✅ Verification complete!")


if __name__ == '__main__':
    cli()
