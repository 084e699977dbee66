"""sparsifiers.management.base

Shared plumbing of the sparsify, verify, stats and calibrate commands:
common options, config resolution, --record bookkeeping and the error
contract (error JSON on stderr, exit 2; failed certificate, exit 1).
"""
import json
import logging

from django.core.management.base import BaseCommand, CommandError

from hypergraphs.exceptions import SparsificationError
from verification.reports import canonical_json

from sparsifiers.config import RunConfig

logger = logging.getLogger(__name__)

# option name -> argparse type; RunConfig converts to the settings type
CONSTANT_ARGUMENTS = {
    'c_iter': (float, "Calibration constant of the halving count."),
    'c_t': (float, "Game length constant: T = ceil(c_T n / eps^2)."),
    'c_l': (float, "Sampling threshold constant of the hypergraph sampler."),
    'eta_constant': (float, "Learning rate constant of the game."),
    'threshold_constant': (float, "Constant of the halving event threshold."),
    'resample_cap_factor': (float, "Resample rounds allowed per edge and log n."),
    'resample_retries': (int, "Fresh attempts after a resample cap is hit."),
    'slack': (float, "Slack constant applied by the certificates."),
    'trials': (int, "Random directions or subsets drawn by sampled checks."),
}


class SparsifyBaseCommand(BaseCommand):
    command_name = None
    constant_arguments = tuple(CONSTANT_ARGUMENTS)
    fails_on_certificate = True

    def add_arguments(self, parser):
        parser.add_argument('input', help="Graph or hypergraph file.")
        parser.add_argument('--epsilon', type=float, required=True)
        parser.add_argument('--seed', type=int, help="64-bit seed, required by randomized commands.")
        parser.add_argument('--output', help="Where to write the sparsifier.")
        parser.add_argument('--report', help="Where to write the quality report JSON.")
        parser.add_argument('--json', action='store_true', help="Machine-readable output on stdout.")
        parser.add_argument('--record', action='store_true', help="Store the run in the database.")
        for name in self.constant_arguments:
            kind, help_text = CONSTANT_ARGUMENTS[name]
            parser.add_argument('--' + name.replace('_', '-'), dest=name, type=kind, help=help_text)

    def resolve_config(self, options, command=None):
        constants = {name: options.get(name) for name in self.constant_arguments}
        return RunConfig.resolve(
            command or self.command_name,
            options['epsilon'],
            seed=options.get('seed'),
            input_path=options.get('input'),
            output_path=options.get('output'),
            report_path=options.get('report'),
            **constants,
        )

    def handle(self, *args, **options):
        run = None
        try:
            config = self.resolve_config(options)
            if options.get('record'):
                run = self.start_record(config)
            payload, report = self.perform(config, options)
        except (SparsificationError, ValueError, OSError) as exc:
            self.fail(exc, run)
        if run is not None:
            self.finish_record(run, payload, report)
        self.emit(payload, options)
        if self.fails_on_certificate and report is not None and not report.passed:
            raise CommandError(f"{report.guarantee} certificate failed", returncode=1)

    def perform(self, config, options):
        """(payload for stdout, QualityReport or None)."""
        raise NotImplementedError

    def emit(self, payload, options):
        if options['json']:
            self.stdout.write(canonical_json(payload), ending='')
            return
        for line in self.summary_lines(payload):
            self.stdout.write(line)
        if options['verbosity'] >= 1 and 'config' in payload:
            self.stdout.write("Resolved config: " + json.dumps(payload['config'], sort_keys=True))

    def summary_lines(self, payload):
        return [json.dumps(payload, sort_keys=True, default=str)]

    def fail(self, exc, run=None):
        error = {
            'error': type(exc).__name__,
            'message': str(exc),
            'command': self.command_name,
        }
        line_number = getattr(exc, 'line_number', None)
        if line_number is not None:
            error['line'] = line_number
        logger.error("%s failed: %s", self.command_name, exc)
        if run is not None:
            run.finish(error=f"{type(exc).__name__}: {exc}")
        self.stderr.write(json.dumps(error, sort_keys=True))
        raise CommandError(str(exc), returncode=2) from exc

    def start_record(self, config):
        from sparsifiers.models import SparsifierRun

        run = SparsifierRun.objects.create(
            command=self.command_name,
            epsilon=config.epsilon,
            seed='' if config.seed is None else str(config.seed),
            input_path=config.input_path or '',
            output_path=config.output_path or '',
            report_path=config.report_path or '',
            config=json.loads(canonical_json(config.as_dict())),
        )
        run.start()
        return run

    def finish_record(self, run, payload, report):
        from verification.models import QualityReportRecord

        run.input_size = payload.get('input_size', 0)
        run.output_size = payload.get('output_size')
        run.scale = payload.get('scale')
        run.finish(passed=None if report is None else report.passed)
        if report is not None:
            QualityReportRecord.record(run, report)
        logger.info("Recorded run %d", run.pk)
