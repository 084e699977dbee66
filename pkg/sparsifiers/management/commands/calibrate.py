"""
Seeded batches of one construction on one instance, optionally sweeping a
constant, reporting pass fractions and the measured constants of every
certificate. Used to pick the defaults of the SPARSIFY block.
"""
import logging
from functools import reduce
from pathlib import Path

import numpy as np

from hypergraphs.exceptions import SparsificationError
from hypergraphs.formats import load_instance
from hypergraphs.seeding import SEED_LIMIT
from sparsifiers.config import RunConfig
from sparsifiers.management.base import CONSTANT_ARGUMENTS, SparsifyBaseCommand
from sparsifiers.pipelines import BUILDERS, construct

logger = logging.getLogger(__name__)


def parse_sweep(text):
    """'c_l=1,10,100' -> ('c_l', [1.0, 10.0, 100.0])."""
    name, _, values = text.partition('=')
    name = name.strip().replace('-', '_')
    if name not in CONSTANT_ARGUMENTS or not values:
        raise ValueError(f"sweep must look like <constant>=v1,v2,...; got {text!r}")
    kind = CONSTANT_ARGUMENTS[name][0]
    try:
        return name, [kind(value) for value in values.split(',')]
    except ValueError:
        raise ValueError(f"sweep values of {name} must be numbers") from None


def _median(values):
    return float(np.median(values)) if values else None


def summarize(value, reports, errors, sizes, rounds):
    constants = {}
    for report in reports:
        for key, measured in report.slack_constants.items():
            constants.setdefault(key, []).append(measured)
        construction = report.details.get('construction', {})
        if 'size_constant' in construction:
            constants.setdefault('size_constant', []).append(construction['size_constant'])
    runs = len(reports) + len(errors)
    passed = sum(report.passed for report in reports)
    return {
        'value': value,
        'runs': runs,
        'passed': passed,
        'pass_fraction': passed / runs if runs else 0.0,
        'errors': errors,
        'median_worst_excess': _median([r.worst_excess for r in reports]),
        'median_worst_value': _median([r.worst_value for r in reports]),
        'median_output_size': _median(sizes),
        'median_resample_rounds': _median(rounds),
        'measured_constants': {key: {'median': _median(v), 'max': max(v)} for key, v in sorted(constants.items())},
    }


def recommended_value(summaries, required_fraction=1.0):
    """Largest swept value whose pass fraction reaches ``required_fraction``."""
    passing = [s['value'] for s in summaries if s['value'] is not None and s['pass_fraction'] >= required_fraction]
    return max(passing) if passing else None


class Command(SparsifyBaseCommand):
    help = "Run seeded batches of a construction and report pass fractions and measured constants."
    command_name = 'calibrate'
    fails_on_certificate = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--construction', choices=sorted(BUILDERS), default='sparsify_hyper')
        parser.add_argument('--runs', type=int, default=10, help="Seeds per sweep value.")
        parser.add_argument('--sweep', help="Constant to sweep, as name=v1,v2,...")
        parser.add_argument(
            '--required-fraction', type=float, default=1.0,
            help="Pass fraction a swept value needs to be recommended.",
        )

    def perform(self, config, options):
        construction = options['construction']
        loaded = load_instance(config.input_path)
        name, values = parse_sweep(options['sweep']) if options.get('sweep') else (None, [None])
        base_constants = {key: options.get(key) for key in self.constant_arguments}
        summaries, all_reports = [], []
        for value in values:
            constants = dict(base_constants)
            if name is not None:
                constants[name] = value
            reports, errors, sizes, rounds = [], [], [], []
            for offset in range(options['runs']):
                seed = (config.seed + offset) % SEED_LIMIT
                run_config = RunConfig.resolve(
                    construction, config.epsilon, seed=seed, input_path=config.input_path, **constants
                )
                try:
                    result, _, report = construct(construction, loaded.instance, run_config)
                except SparsificationError as exc:
                    logger.warning("Seed %d failed: %s", seed, exc)
                    errors.append({'seed': seed, 'error': type(exc).__name__, 'message': str(exc)})
                    continue
                reports.append(report)
                sizes.append(result.size)
                levels = result.metadata.get('levels', [])
                rounds.append(sum(level['resample_rounds'] for level in levels))
            summary = summarize(value, reports, errors, sizes, rounds)
            logger.info("%s=%s: %d/%d passed", name, value, summary['passed'], summary['runs'])
            summaries.append(summary)
            all_reports.extend(reports)

        merged = reduce(lambda left, right: left.merge(right), all_reports) if all_reports else None
        if merged is not None and config.report_path:
            Path(config.report_path).write_text(merged.to_json())
        payload = {
            'command': self.command_name,
            'construction': construction,
            'config': config.as_dict(),
            'sweep': name,
            'summaries': summaries,
            'recommended': recommended_value(summaries, options.get('required_fraction', 1.0)),
            'input_size': loaded.instance.m,
            'worst_report': None if merged is None else merged.as_dict(),
        }
        return payload, merged

    def summary_lines(self, payload):
        lines = []
        for summary in payload['summaries']:
            label = payload['construction'] if payload['sweep'] is None else f"{payload['sweep']}={summary['value']}"
            lines.append(
                f"{label}: {summary['passed']}/{summary['runs']} passed, "
                f"median worst excess {summary['median_worst_excess']}"
            )
        if payload['sweep'] is not None:
            lines.append(f"recommended {payload['sweep']}: {payload['recommended']}")
        return lines
