"""Base class of the four sparsify commands."""
from sparsifiers.pipelines import run

from .base import SparsifyBaseCommand


class ConstructionCommand(SparsifyBaseCommand):
    guarantee = None

    def perform(self, config, options):
        outcome = run(self.command_name, config)
        report = outcome.report
        payload = {
            'command': self.command_name,
            'config': config.as_dict(),
            'input_size': outcome.instance.m,
            'output_size': outcome.result.size,
            'scale': outcome.result.scale,
            'passed': report.passed,
            'report': report.as_dict(),
        }
        return payload, report

    def summary_lines(self, payload):
        report = payload['report']
        outcome = 'passed' if payload['passed'] else 'FAILED'
        lines = [
            f"Kept {payload['output_size']} of {payload['input_size']} edges (scale c={payload['scale']!r})",
            f"{report['guarantee']} certificate {outcome}: worst excess {report['worst_excess']:.3g}",
        ]
        return [self.style.SUCCESS(lines[0]), lines[1] if payload['passed'] else self.style.ERROR(lines[1])]
