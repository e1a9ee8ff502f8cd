#!/usr/bin/env python
# -*- coding: utf-8 -*-

#-----------------------------------------------------------------------------
# Copyright (c) 2021, ICRevenue Development Team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING, distributed with this software.
#-----------------------------------------------------------------------------

"""
The `icrevenue` command.

Every subcommand except `gen` prints a single JSON report on standard
output (or CSV rows with `--csv`). The exit status is 0 on success, 1 when
a verification suite fails and 2 on an input or I/O error.
"""
import argparse
import csv
import io
import json
import logging
import sys
import time
from collections import OrderedDict

from . import __version__
from .api.adaptive import (compute_params, evaluate_policy,
                           exact_policy_value)
from .api.estimator import (build_pool, estimate_f_exp, estimate_g_exp,
                            estimate_l)
from .api.network import (generate_random_instance, read_instance,
                          serialize_instance, write_instance)
from .api.nonadaptive import select, select_deterministic
from .api.oracle import (enumerate_realizations, optimal_adaptive,
                         optimal_nonadaptive)
from .api.suites import SUITES, run_suites
from .errors import CapExceededError, ICRevenueError
from .utils import format_float, init_log, init_settings, timestamp

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _instance_summary(instance):
    return OrderedDict([('n', instance.n), ('m', instance.m),
                        ('B', instance.budget), ('cpe', instance.cpe)])


def _report(command, args, instance, mode, seeds, result, tic):
    return OrderedDict([('command', command),
                        ('started', args.started),
                        ('instance', None if instance is None
                         else _instance_summary(instance)),
                        ('mode', mode),
                        ('seeds', seeds),
                        ('wall_time', round(time.time() - tic, 3)),
                        ('result', result)])


def _realizations(instance, args, settings):
    """Return (realization set, mode) for the non-adaptive commands.

    Exact enumeration is used with `--exact`, or automatically when
    2^m does not exceed the enumeration cap.
    """
    cap = settings.default('exact_cap')
    if args.exact or 2 ** instance.m <= cap:
        return enumerate_realizations(instance, cap), 'exact'
    return build_pool(instance, args.samples, args.seed,
                      settings.default('closure_cells')), 'monte-carlo'


def _selection(result, instance):
    if result is None:
        return None
    return OrderedDict([('seeds', sorted(result.seeds)),
                        ('value', instance.revenue(result.objective_estimate)),
                        ('objective', result.objective_estimate),
                        ('cost', result.total_cost),
                        ('provenance', result.provenance)])


def cmd_gen(args, settings):
    cost_range = args.cost if args.cost else (1.0, args.budget)
    instance = generate_random_instance(args.nodes, args.edges, args.prob,
                                        cost_range, args.budget, args.seed,
                                        cpe=args.cpe)
    if args.output:
        write_instance(instance, args.output)
        logger.info("Instance written to '%s'" % args.output)
    else:
        sys.stdout.write(serialize_instance(instance))
    return None, EXIT_OK


def cmd_select(args, settings):
    tic = time.time()
    instance = read_instance(args.instance)
    if args.deterministic:
        result, mode = select_deterministic(instance), 'exact'
    else:
        realizations, mode = _realizations(instance, args, settings)
        result = select(realizations)
    payload = _selection(result, instance)
    if not args.deterministic:
        payload['phase1'] = _selection(result.phase1, instance)
        payload['phase2'] = _selection(result.phase2, instance)
    if args.optimal:
        if mode != 'exact':
            raise CapExceededError("The optimal set needs exact evaluation")
        optimum_set, optimum = optimal_nonadaptive(
            instance, None if args.deterministic else realizations,
            max_nodes=settings.default('subset_nodes'))
        payload['optimal'] = OrderedDict([('seeds', sorted(optimum_set)),
                                          ('value', instance.revenue(optimum))])
    seeds = None if mode == 'exact' else {'pool': args.seed}
    return _report('select', args, instance, mode, seeds, payload,
                   tic), EXIT_OK


def cmd_adaptive(args, settings):
    tic = time.time()
    instance = read_instance(args.instance)
    params = compute_params(instance, args.samples)
    cap = settings.default('exact_cap')
    exact = args.exact or 2 ** instance.m <= cap
    if exact:
        distribution = enumerate_realizations(instance, cap)
        value = exact_policy_value(instance, args.policy, params,
                                   distribution=distribution)
    else:
        distribution = None
        value = evaluate_policy(instance, args.policy, args.episodes,
                                args.seed, params)
    payload = OrderedDict([('policy', args.policy),
                           ('f_avg', instance.revenue(value)),
                           ('objective', value),
                           ('C', params.C), ('alpha', params.alpha),
                           ('vacuous', params.vacuous),
                           ('bound_constant', params.bound),
                           ('optimal', None), ('lower_bound', None)])
    if exact and instance.n <= settings.default('adaptive_nodes') and \
            instance.m <= settings.default('adaptive_edges'):
        optimum = optimal_adaptive(
            instance, distribution=distribution,
            max_nodes=settings.default('adaptive_nodes'),
            max_edges=settings.default('adaptive_edges'))
        payload['optimal'] = instance.revenue(optimum)
        payload['lower_bound'] = instance.revenue(params.bound * optimum)
    seeds = None if exact else OrderedDict([('base', args.seed),
                                            ('episodes', args.episodes)])
    return _report('adaptive', args, instance,
                   'exact' if exact else 'monte-carlo', seeds, payload,
                   tic), EXIT_OK


def cmd_verify(args, settings):
    tic = time.time()
    results = run_suites(args.suite, args.seed, args.trials,
                         args.ratio_scale)
    payload = [r.as_dict() for r in results]
    status = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    return _report('verify', args, None, 'exact', {'battery': args.seed},
                   payload, tic), status


def cmd_eval(args, settings):
    tic = time.time()
    instance = read_instance(args.instance)
    seeds = sorted(set(v.strip() for v in args.seeds.split(',')
                       if v.strip()))
    realizations, mode = _realizations(instance, args, settings)
    cost = instance.cost(seeds)
    f_exp = estimate_f_exp(realizations, seeds)
    payload = OrderedDict([('seeds', seeds),
                           ('value', instance.revenue(f_exp)),
                           ('f_exp', f_exp),
                           ('g_exp', estimate_g_exp(realizations, seeds)),
                           ('l0', estimate_l(realizations, seeds, 0.0)),
                           ('cost', cost),
                           ('feasible', cost <= instance.budget)])
    return _report('eval', args, instance, mode,
                   None if mode == 'exact' else {'pool': args.seed},
                   payload, tic), EXIT_OK


def _rows(report):
    """Flatten a report's payload into CSV rows."""
    result = report['result']
    if report['command'] == 'verify':
        return [OrderedDict((k, v) for k, v in r.items() if k != 'failures')
                for r in result]
    row = OrderedDict()
    for key, value in result.items():
        if isinstance(value, dict):
            continue
        if isinstance(value, list):
            value = ' '.join(value)
        elif isinstance(value, float):
            value = format_float(value)
        row[key] = value
    return [row]


def write_report(report, args):
    if args.csv:
        rows = _rows(report)
        stream = io.StringIO()
        writer = csv.DictWriter(stream, fieldnames=list(rows[0]),
                                lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
        text = stream.getvalue()
    else:
        text = json.dumps(report, indent=2) + '\n'
    if args.output:
        with open(args.output, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def build_parser(settings):
    parser = argparse.ArgumentParser(
        prog='icrevenue',
        description="Budgeted revenue-maximizing seed selection under "
                    "Independent Cascade")
    parser.add_argument('-v', '--version', action='version',
                        version='%(prog)s v' + __version__)
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0,
                        help='seed of every random draw (default 0)')
    common.add_argument('-o', '--output', help='write the output to a file')
    common.add_argument('--csv', action='store_true',
                        help='write tabular output as CSV')

    sampled = argparse.ArgumentParser(add_help=False)
    sampled.add_argument('-i', '--instance', required=True,
                         help='instance file')
    sampled.add_argument('--samples', type=int,
                         default=settings.default('samples'),
                         help='Monte-Carlo sample count')
    sampled.add_argument('--exact', action='store_true',
                         help='force exact enumeration of realizations')

    gen = subparsers.add_parser('gen', parents=[common],
                                help='generate a random instance')
    gen.add_argument('-n', '--nodes', type=int, required=True)
    gen.add_argument('-m', '--edges', type=int, required=True)
    gen.add_argument('--prob', type=float, nargs=2, default=(0.0, 1.0),
                     metavar=('LO', 'HI'), help='edge probability range')
    gen.add_argument('--cost', type=float, nargs=2, metavar=('LO', 'HI'),
                     help='node cost range (default 1 to the budget)')
    gen.add_argument('--budget', type=float, required=True)
    gen.add_argument('--cpe', type=float, default=1.0,
                     help='cost per engagement')
    gen.set_defaults(func=cmd_gen)

    sel = subparsers.add_parser('select', parents=[common, sampled],
                                help='non-adaptive seed selection')
    sel.add_argument('--deterministic', action='store_true',
                     help='use the selector for deterministic instances')
    sel.add_argument('--optimal', action='store_true',
                     help='also report the optimal set (exact mode only)')
    sel.set_defaults(func=cmd_select)

    adp = subparsers.add_parser('adaptive', parents=[common, sampled],
                                help='evaluate an adaptive policy')
    adp.add_argument('--policy', default='pis', help='pi1, pi2 or pis')
    adp.add_argument('--episodes', type=int,
                     default=settings.default('episodes'))
    adp.set_defaults(func=cmd_adaptive)

    ver = subparsers.add_parser('verify', parents=[common],
                                help='run the verification battery')
    ver.add_argument('--suite', action='append', choices=list(SUITES),
                     help='suite to run (repeatable; default all)')
    ver.add_argument('--trials', type=int,
                     help='trials per suite (default per suite)')
    ver.add_argument('--ratio-scale', type=float, default=1.0,
                     help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)

    evl = subparsers.add_parser('eval', parents=[common, sampled],
                                help='evaluate a given seed set')
    evl.add_argument('--seeds', default='',
                     help='comma-separated seed nodes')
    evl.set_defaults(func=cmd_eval)
    return parser


def main(argv=None):
    settings = init_settings()
    args = build_parser(settings).parse_args(argv)
    args.started = timestamp()
    init_log()
    logger.info("icrevenue %s" % ' '.join(sys.argv[1:] if argv is None
                                         else argv))
    try:
        report, status = args.func(args, settings)
        if report is not None:
            write_report(report, args)
    except (ICRevenueError, OSError) as error:
        logger.error('%s: %s' % (type(error).__name__, error))
        return EXIT_ERROR
    return status


if __name__ == '__main__':
    sys.exit(main())
