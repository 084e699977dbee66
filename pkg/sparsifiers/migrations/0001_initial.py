# Generated by Django 4.2 on 2026-10-19 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SparsifierRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        choices=[
                            ("sparsify_cut", "Cut sparsifier"),
                            ("sparsify_spectral", "Additive spectral sparsifier"),
                            ("sparsify_det", "Deterministic sparsifier"),
                            ("sparsify_hyper", "Hypergraph spectral sparsifier"),
                            ("verify", "Verification"),
                            ("calibrate", "Calibration"),
                        ],
                        max_length=30,
                    ),
                ),
                (
                    "state",
                    models.CharField(
                        choices=[
                            ("created", "Created"),
                            ("running", "Running"),
                            ("completed", "Completed"),
                            ("failed", "Failed"),
                        ],
                        default="created",
                        max_length=20,
                    ),
                ),
                ("epsilon", models.FloatField()),
                ("seed", models.CharField(blank=True, max_length=20)),
                ("input_path", models.CharField(max_length=500)),
                ("output_path", models.CharField(blank=True, max_length=500)),
                ("report_path", models.CharField(blank=True, max_length=500)),
                (
                    "input_size",
                    models.IntegerField(
                        default=0,
                        help_text="Number of edges or hyperedges in the input.",
                    ),
                ),
                ("output_size", models.IntegerField(blank=True, null=True)),
                ("scale", models.FloatField(blank=True, null=True)),
                ("passed", models.BooleanField(blank=True, null=True)),
                ("error", models.TextField(blank=True)),
                ("config", models.JSONField(default=dict)),
                ("started_at", models.DateTimeField(blank=True, null=True)),
                ("finished_at", models.DateTimeField(blank=True, null=True)),
                (
                    "duration",
                    models.FloatField(
                        blank=True,
                        help_text="Wall time of the run in seconds.",
                        null=True,
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
    ]
