"""verification.models

QualityReportRecord stores the canonical report of a recorded run next to
the summary fields the admin filters on.
"""
from django.db import models

from sparsifiers.models import SparsifierRun


class QualityReportRecord(models.Model):
    """
    Model to store the quality report of a sparsifier run.
    """
    GUARANTEE_CHOICES = [
        ('cut', 'Additive cut'),
        ('spectral', 'Additive spectral'),
        ('det', 'Deterministic spectral'),
        ('hyper', 'Multiplicative hypergraph'),
        ('resistance', 'Resistance identities'),
        ('halving', 'Halving events'),
        ('bilateral_halving', 'Bilateral halving events'),
    ]

    run = models.OneToOneField(SparsifierRun, on_delete=models.CASCADE, related_name='quality_report')
    guarantee = models.CharField(max_length=20, choices=GUARANTEE_CHOICES)
    epsilon = models.FloatField()
    scale = models.FloatField()
    worst_excess = models.FloatField(help_text="Largest measured amount over the stated bound.")
    worst_value = models.FloatField(default=0)
    passed = models.BooleanField()
    report_json = models.TextField(help_text="Canonical JSON of the full report.")
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = "Quality Report"
        verbose_name_plural = "Quality Reports"

    def __str__(self):
        outcome = 'pass' if self.passed else 'fail'
        return f"{self.get_guarantee_display()} report for run {self.run_id} ({outcome})"

    @classmethod
    def record(cls, run, report):
        """Create or replace the stored report of a run."""
        record, _ = cls.objects.update_or_create(
            run=run,
            defaults={
                'guarantee': report.guarantee,
                'epsilon': report.epsilon or 0.0,
                'scale': report.scale,
                'worst_excess': report.worst_excess,
                'worst_value': report.worst_value,
                'passed': report.passed,
                'report_json': report.to_json(),
            },
        )
        return record
