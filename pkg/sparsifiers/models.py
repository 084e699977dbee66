"""sparsifiers.models

SparsifierRun records one invocation of a sparsify command started with
``--record``: what was asked for, how it ended and the resolved config.
"""
from django.db import models
from django.utils import timezone


class SparsifierRun(models.Model):
    """
    Model representing one run of a sparsifier construction.
    """
    COMMAND_CHOICES = [
        ('sparsify_cut', 'Cut sparsifier'),
        ('sparsify_spectral', 'Additive spectral sparsifier'),
        ('sparsify_det', 'Deterministic sparsifier'),
        ('sparsify_hyper', 'Hypergraph spectral sparsifier'),
        ('verify', 'Verification'),
        ('calibrate', 'Calibration'),
    ]
    STATE_CHOICES = [
        ('created', 'Created'),
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    ]

    command = models.CharField(max_length=30, choices=COMMAND_CHOICES)
    state = models.CharField(max_length=20, choices=STATE_CHOICES, default='created')

    epsilon = models.FloatField()
    # 64-bit unsigned seeds do not fit a signed BigIntegerField
    seed = models.CharField(max_length=20, blank=True)
    input_path = models.CharField(max_length=500)
    output_path = models.CharField(max_length=500, blank=True)
    report_path = models.CharField(max_length=500, blank=True)

    input_size = models.IntegerField(default=0, help_text="Number of edges or hyperedges in the input.")
    output_size = models.IntegerField(null=True, blank=True)
    scale = models.FloatField(null=True, blank=True)
    passed = models.BooleanField(null=True, blank=True)
    error = models.TextField(blank=True)
    config = models.JSONField(default=dict)

    started_at = models.DateTimeField(null=True, blank=True)
    finished_at = models.DateTimeField(null=True, blank=True)
    duration = models.FloatField(
        help_text="Wall time of the run in seconds.",
        null=True, blank=True
    )
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.get_command_display()} eps={self.epsilon} ({self.state})"

    def start(self):
        self.state = 'running'
        self.started_at = timezone.now()
        self.save(update_fields=['state', 'started_at'])

    def finish(self, passed=None, error=''):
        """Close the run and compute its duration."""
        self.finished_at = timezone.now()
        self.state = 'failed' if error else 'completed'
        self.passed = passed
        self.error = error
        if self.started_at:
            self.duration = (self.finished_at - self.started_at).total_seconds()
        self.save()

    @property
    def compression(self):
        if not self.input_size or self.output_size is None:
            return None
        return self.output_size / self.input_size
