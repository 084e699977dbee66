from pathlib import Path

from hypergraphs.formats import load_instance
from sparsifiers.management.base import SparsifyBaseCommand
from verification.checks import GUARANTEES, certify


class Command(SparsifyBaseCommand):
    help = "Re-certify a sparsifier file against its input without rerunning the construction."
    command_name = 'verify'
    constant_arguments = ('slack', 'trials')

    def add_arguments(self, parser):
        parser.add_argument('input', help="The original graph or hypergraph file.")
        parser.add_argument('sparsifier', help="A sparsifier file written by a sparsify command.")
        parser.add_argument('--guarantee', choices=GUARANTEES, required=True)
        parser.add_argument('--epsilon', type=float, required=True)
        parser.add_argument('--seed', type=int, help="Seed of the sampled checks (default 0).")
        parser.add_argument('--report', help="Where to write the quality report JSON.")
        parser.add_argument('--json', action='store_true', help="Machine-readable output on stdout.")
        parser.add_argument('--record', action='store_true', help="Store the run in the database.")
        parser.add_argument('--slack', type=float, help="Slack constant applied by the certificates.")
        parser.add_argument('--trials', type=int, help="Random directions or subsets drawn by sampled checks.")

    def perform(self, config, options):
        original = load_instance(config.input_path)
        bundle = load_instance(options['sparsifier'])
        scale = 1.0 if bundle.scale is None else bundle.scale
        seed = config.seed or 0
        report = certify(
            options['guarantee'], original.instance, bundle.instance, scale, config.epsilon,
            slack=config.slack, trials=config.trials, seed=seed,
        )
        report.config = config.as_dict()
        report.seeds = [seed]
        report.details['sparsifier_path'] = str(options['sparsifier'])
        if config.report_path:
            Path(config.report_path).write_text(report.to_json())
        payload = {
            'command': self.command_name,
            'config': config.as_dict(),
            'input_size': original.instance.m,
            'output_size': bundle.instance.m,
            'scale': scale,
            'passed': report.passed,
            'report': report.as_dict(),
        }
        return payload, report

    def summary_lines(self, payload):
        report = payload['report']
        outcome = 'passed' if payload['passed'] else 'FAILED'
        line = f"{report['guarantee']} certificate {outcome}: worst excess {report['worst_excess']:.3g}"
        return [self.style.SUCCESS(line) if payload['passed'] else self.style.ERROR(line)]
