"""
summlab: run summability experiments from a JSON config.

    summlab run --config CONFIG --out DIR [--seed N] [--threads N]
                [--tuple-budget N] [-v]
    summlab bounds --m M --p P --q Q [--r R]

Exit status of `run`: 0 when every declared assertion passes, 1 when
one fails, 2 when the config does not parse against the schema.

"""
import argparse
import csv
import dataclasses
import inspect
import itertools
import json
import logging
import math
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np
import scipy
from django.test.utils import override_settings

from . import logger, __version__
from .ascent import SearchBudget
from .conf import settings, worker_count
from .exceptions import ConfigError, SummabilityError, ValidityError
from .index_lab import (
    STRATEGIES, bound_table, estimate_index, exact_case_report,
    maximize_quotient, seam_report, upper_bound_mult, upper_bound_pol)
from .index_lab.bounds import POL_UPPER
from .maps import HomogeneousPolynomial
from . import oracles
from .witnesses import witness_from_spec

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_SCHEMA = 2

SLOPE = 'slope'
ORACLE = 'oracle'
BOUNDS = 'bounds'
KINDS = (SLOPE, ORACLE, BOUNDS)

DEFAULT_SLOPE_TOL = 1e-6
CAP_SLACK = 1e-6

SZAREK_STATEMENT = (
    "every infinite-dimensional Banach space has (p, q)-summing constants "
    "of its identity on n-dimensional subspaces bounded below by a "
    "universal constant times a power of n (statement only, no exponent "
    "is checked)")

BOUND_HEADER = ['kind', 'm', 'p', 'q', 'r', 'branch', 'value']
SLOPE_HEADER = ['name', 'map', 'p', 'q', 'slope', 'intercept', 'residual',
                'grid', 'conservative']


def _number(value, what):
    if value == 'inf':
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("%s must be a number, got %r" % (what, value))
    return float(value)


def _as_list(value):
    return value if isinstance(value, list) else [value]


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (IOError, ValueError) as e:
        raise ConfigError("cannot read config %s: %s" % (path, e))
    validate_config(data)
    return data


def validate_config(data):
    """Raise ConfigError naming the first schema violation"""

    if not isinstance(data, dict):
        raise ConfigError("the config must be a JSON object")
    if 'seed' in data and not isinstance(data['seed'], int):
        raise ConfigError('"seed" must be an integer')
    experiments = data.get('experiments', [])
    if not isinstance(experiments, list):
        raise ConfigError('"experiments" must be a list')
    names = set()
    for index, experiment in enumerate(experiments):
        where = 'experiments[%d]' % index
        if not isinstance(experiment, dict):
            raise ConfigError("%s must be an object" % where)
        kind = experiment.get('kind')
        if kind not in KINDS:
            raise ConfigError('%s: "kind" must be one of %s, got %r'
                              % (where, ', '.join(KINDS), kind))
        _validate_budget(experiment, where)
        name = experiment_name(experiment, index)
        if name in names:
            raise ConfigError("%s: duplicate experiment name %r" % (where, name))
        names.add(name)
        if kind == SLOPE:
            for key in ('map', 'p', 'q', 'n_grid'):
                if key not in experiment:
                    raise ConfigError('%s: slope experiments need "%s"'
                                      % (where, key))
            if not isinstance(experiment['map'], dict):
                raise ConfigError('%s: "map" must be an object' % where)
            grid = experiment['n_grid']
            if (not isinstance(grid, list) or
                    not all(isinstance(n, int) and n >= 1 for n in grid)):
                raise ConfigError('%s: "n_grid" must be a list of positive '
                                  'integers' % where)
            for strategy in experiment.get('strategies', []):
                if strategy not in STRATEGIES:
                    raise ConfigError("%s: unknown strategy %r" % (where, strategy))
        elif kind == ORACLE:
            if experiment.get('check') not in ORACLE_CHECKS:
                raise ConfigError('%s: "check" must be one of %s'
                                  % (where, ', '.join(sorted(ORACLE_CHECKS))))
            _validate_params(experiment, where)
        elif kind == BOUNDS:
            for key in ('m', 'p', 'q'):
                if key not in experiment:
                    raise ConfigError('%s: bounds experiments need "%s"'
                                      % (where, key))


def _validate_budget(experiment, where):
    budget = experiment.get('budget', {})
    if not isinstance(budget, dict):
        raise ConfigError('%s: "budget" must be an object' % where)
    known = set(f.name for f in dataclasses.fields(SearchBudget))
    unknown = sorted(set(budget) - known)
    if unknown:
        raise ConfigError('%s: unknown budget keys %s' % (where, ', '.join(unknown)))


def _validate_params(experiment, where):
    function = ORACLE_CHECKS[experiment['check']]
    for params in _params(experiment):
        if not isinstance(params, dict):
            raise ConfigError('%s: "params" must be an object or a list of '
                              'objects' % where)
        if function is None:
            continue
        try:
            inspect.signature(function).bind(**params)
        except TypeError as e:
            raise ConfigError('%s: bad parameters for %s: %s'
                              % (where, experiment['check'], e))


def experiment_name(experiment, index):
    return experiment.get('name') or '%s-%d' % (experiment['kind'], index)


def _budget(experiment):
    try:
        return SearchBudget(**experiment.get('budget', {}))
    except TypeError as e:
        raise ConfigError('bad "budget": %s' % e)


def _upper_exponent(mapping, p, q):
    if isinstance(mapping, HomogeneousPolynomial):
        return upper_bound_pol(mapping.degree, p, q)
    return upper_bound_mult(mapping.arity, p, q)


def _cap_violations(samples, norm, exponent):
    "Exact-path samples above norm * n^exponent"
    for sample in samples:
        if sample.conservative:
            continue
        cap = norm * sample.n ** exponent * (1 + CAP_SLACK)
        if sample.quotient > cap:
            yield ('quotient %.12g at n=%d exceeds %.12g'
                   % (sample.quotient, sample.n, cap))


def run_slope(experiment, base_dir):
    p = _number(experiment['p'], 'p')
    q = _number(experiment['q'], 'q')
    strategies = tuple(experiment.get('strategies', STRATEGIES))
    budget = _budget(experiment)
    checks = experiment.get('assert', {})

    samples, mapping = [], None
    for n in experiment['n_grid']:
        mapping, anchors = witness_from_spec(experiment['map'], n=n,
                                             base_dir=base_dir)
        samples.append(maximize_quotient(
            mapping, n, p, q, strategies=strategies, budget=budget,
            anchors=anchors, exact_only=experiment.get('exact_only', False)))
    estimate = estimate_index(samples)

    failures = []
    if 'slope' in checks:
        expected = _number(checks['slope'], 'assert.slope')
        tol = _number(checks.get('slope_tol', DEFAULT_SLOPE_TOL), 'assert.slope_tol')
        if abs(estimate.slope - expected) > tol:
            failures.append('slope %.12g differs from %.12g by more than %g'
                            % (estimate.slope, expected, tol))
    if 'residual_max' in checks:
        limit = _number(checks['residual_max'], 'assert.residual_max')
        if estimate.residual > limit:
            failures.append('residual %.3g exceeds %g' % (estimate.residual, limit))
    if checks.get('upper_bound'):
        norm = _number(checks.get('norm', 1.0), 'assert.norm')
        try:
            exponent = _upper_exponent(mapping, p, q)
        except ValidityError as e:
            failures.append(str(e))
        else:
            failures.extend(_cap_violations(samples, norm, exponent))

    return {
        'p': p, 'q': q, 'map': experiment['map'],
        'samples': [s.to_json() for s in samples],
        'estimate': estimate.to_json(),
        'conservative': any(s.conservative for s in samples),
        'failures': failures,
        'passed': not failures,
    }


def _params(experiment):
    params = experiment.get('params', {})
    return params if isinstance(params, list) else [params]


def _oracle_records(check, params):
    if check == 'seams':
        return seam_report(params.get('m', [2, 4]), params.get('q', [1, 1.5, 2, 3]),
                           params.get('r', [2, 2.5, 3]))
    if check == 'exact_cases':
        return exact_case_report(params.get('draws', 100), params.get('seed'))
    if check == 'oracle_equivalence':
        return oracles.oracle_equivalence(
            [tuple(i) for i in params.get('instances', [])])
    function = ORACLE_CHECKS[check]
    # list valued parameters sweep their cartesian product
    keys = sorted(k for k in params if k != 'n_grid')
    grids = [_as_list(params[k]) for k in keys]
    records = []
    for values in itertools.product(*grids):
        kwargs = dict(zip(keys, values))
        if 'n_grid' in params:
            kwargs['n_grid'] = params['n_grid']
        records.append(function(**kwargs))
    return records


ORACLE_CHECKS = {
    'pietsch': oracles.pietsch_check,
    'konig': oracles.konig_growth_check,
    'corollary22': oracles.corollary22_check,
    'inclusion': oracles.inclusion_check,
    'lemar': oracles.lemar_growth_check,
    'witness_growth': oracles.witness_growth_check,
    'seams': None,
    'exact_cases': None,
    'oracle_equivalence': None,
}


def run_oracle(experiment, base_dir):
    check = experiment['check']
    records = []
    for params in _params(experiment):
        try:
            records.extend(_oracle_records(check, params))
        except TypeError as e:
            raise ConfigError("bad parameters for %s: %s" % (check, e))
    failures = [r for r in records if not r.get('passed')]
    return {'check': check, 'records': records,
            'failures': failures, 'passed': not failures}


def run_bounds(experiment, base_dir):
    rows, failures = [], []
    r_values = _as_list(experiment.get('r', [None]))
    for m, p, q, r in itertools.product(
            _as_list(experiment['m']), _as_list(experiment['p']),
            _as_list(experiment['q']), r_values):
        entries = bound_table(m, p, q, r)
        rows.extend(e.to_json() for e in entries)
        upper = [e.value for e in entries if e.kind == POL_UPPER]
        lowers = [e for e in entries
                  if e.kind.startswith('pol_lower') and e.value is not None]
        if upper[0] is not None:
            for entry in lowers:
                if entry.value > upper[0] + 1e-12:
                    failures.append(entry.to_json())
    return {'entries': rows, 'failures': failures, 'passed': not failures}


RUNNERS = {SLOPE: run_slope, ORACLE: run_oracle, BOUNDS: run_bounds}


def run_experiment(experiment, index, base_dir):
    name = experiment_name(experiment, index)
    logger.info("experiment %s (%s): begin" % (name, experiment['kind']))
    try:
        result = RUNNERS[experiment['kind']](experiment, base_dir)
    except ConfigError:
        raise
    except SummabilityError as e:
        # the experiment fails on its own; the rest of the suite still runs
        error = '%s: %s' % (type(e).__name__, e)
        logger.warning("experiment %s raised %s" % (name, error))
        result = {'error': error, 'failures': [error], 'passed': False}
    result.update(name=name, kind=experiment['kind'])
    logger.info("experiment %s: end, passed=%s" % (name, result['passed']))
    return result


def _write_csv(path, header, rows):
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def write_outputs(results, output_dir, header):
    os.makedirs(os.path.join(output_dir, 'plots'), exist_ok=True)

    with open(os.path.join(output_dir, 'results.json'), 'w') as fh:
        json.dump(dict(header, experiments=results), fh, sort_keys=True,
                  indent=2)
        fh.write('\n')

    bound_rows, slope_rows = [], []
    for result in results:
        for entry in result.get('entries', []):
            bound_rows.append([
                entry['kind'], entry['m'], entry['p'], entry['q'],
                '' if entry['r'] is None else entry['r'], entry['branch'],
                '' if entry['value'] is None else repr(entry['value'])])
        if result['kind'] == SLOPE and 'estimate' in result:
            estimate = result['estimate']
            slope_rows.append([
                result['name'], result['map'].get('kind'), result['p'],
                result['q'], repr(estimate['slope']),
                repr(estimate['intercept']), repr(estimate['residual']),
                ' '.join(str(n) for n in estimate['grid']),
                result['conservative']])
            plot = os.path.join(output_dir, 'plots', '%s.dat' % result['name'])
            with open(plot, 'w') as fh:
                for sample in result['samples']:
                    fh.write('%.17g %.17g\n' % (math.log(sample['n']),
                                                math.log(sample['quotient'])))
    _write_csv(os.path.join(output_dir, 'bounds.csv'), BOUND_HEADER, bound_rows)
    _write_csv(os.path.join(output_dir, 'slopes.csv'), SLOPE_HEADER, slope_rows)


def write_metadata(output_dir, started, seed, threads):
    metadata = {
        'started': started,
        'finished': datetime.now(timezone.utc).isoformat(),
        'seed': seed,
        'threads': threads,
        'versions': {
            'summlab': __version__,
            'python': platform.python_version(),
            'numpy': np.__version__,
            'scipy': scipy.__version__,
        },
        'host': platform.node(),
    }
    with open(os.path.join(output_dir, 'metadata.json'), 'w') as fh:
        json.dump(metadata, fh, sort_keys=True, indent=2)
        fh.write('\n')


def run(config_path, output_dir, seed=None, threads=None, tuple_budget=None):
    """Run every experiment in the config; returns the exit status"""

    started = datetime.now(timezone.utc).isoformat()
    try:
        config = load_config(config_path)
    except ConfigError as e:
        logger.error("config error: %s" % e)
        return EXIT_SCHEMA

    overrides = {}
    if seed is not None:
        overrides['SEED'] = int(seed)
    elif 'seed' in config:
        overrides['SEED'] = config['seed']
    if threads is not None:
        overrides['THREADS'] = int(threads)
    if tuple_budget is not None:
        overrides['TUPLE_BUDGET'] = int(tuple_budget)

    base_dir = os.path.dirname(os.path.abspath(config_path))
    experiments = config.get('experiments', [])
    with override_settings(**overrides):
        workers = worker_count()
        header = {'seed': settings.SEED, 'threads': workers,
                  'tuple_budget': settings.TUPLE_BUDGET}
        try:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(
                    run_experiment, experiments, range(len(experiments)),
                    [base_dir] * len(experiments)))
        except ConfigError as e:
            logger.error("config error: %s" % e)
            return EXIT_SCHEMA

        passed = all(r['passed'] for r in results)
        header['passed'] = passed
        write_outputs(results, output_dir, header)
        write_metadata(output_dir, started, settings.SEED, workers)

    if not passed:
        for result in results:
            if not result['passed']:
                logger.error("%s failed: %s" % (
                    result['name'], json.dumps(result['failures'],
                                               sort_keys=True, default=str)))
        return EXIT_FAILED
    return EXIT_OK


def _format_value(entry):
    if entry.value is None:
        return 'n/a (out of range)'
    return '%.6g' % entry.value


def print_bounds(m, p, q, r=None, out=None):
    out = out or sys.stdout
    out.write("bounds at m=%s, p=%g, q=%g%s\n"
              % (m, p, q, '' if r is None else ', r=%g' % r))
    out.write("%-20s %-7s %-20s %s\n" % ('kind', 'branch', 'value', 'validity'))
    for entry in bound_table(m, p, q, r):
        out.write("%-20s %-7s %-20s %s\n" % (
            entry.kind, entry.branch, _format_value(entry), entry.validity))
    out.write("szarek: %s\n" % SZAREK_STATEMENT)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='summlab',
        description='Numerical experiments on indices of summability')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    run_parser = commands.add_parser('run', help='run the experiments of a config')
    run_parser.add_argument('--config', required=True, metavar='PATH')
    run_parser.add_argument('--out', required=True, metavar='DIR')
    run_parser.add_argument('--seed', type=int, default=None)
    run_parser.add_argument('--threads', type=int, default=None)
    run_parser.add_argument('--tuple-budget', type=int, default=None)
    run_parser.add_argument('-v', '--verbose', action='store_true')

    bounds_parser = commands.add_parser('bounds', help='print the bound table')
    bounds_parser.add_argument('--m', type=int, required=True)
    bounds_parser.add_argument('--p', type=float, required=True)
    bounds_parser.add_argument('--q', type=float, required=True)
    bounds_parser.add_argument('--r', type=float, default=None)
    return parser


def configure_logging(verbose=False):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == 'bounds':
        try:
            print_bounds(args.m, args.p, args.q, args.r)
        except SummabilityError as e:
            sys.stderr.write("error: %s\n" % e)
            return EXIT_SCHEMA
        return EXIT_OK

    configure_logging(args.verbose)
    return run(args.config, args.out, seed=args.seed, threads=args.threads,
               tuple_budget=args.tuple_budget)


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
