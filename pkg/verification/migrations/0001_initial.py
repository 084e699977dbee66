# Generated by Django 4.2 on 2026-10-19 10:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        ("sparsifiers", "0001_initial"),
    ]

    operations = [
        migrations.CreateModel(
            name="QualityReportRecord",
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
                    "guarantee",
                    models.CharField(
                        choices=[
                            ("cut", "Additive cut"),
                            ("spectral", "Additive spectral"),
                            ("det", "Deterministic spectral"),
                            ("hyper", "Multiplicative hypergraph"),
                            ("resistance", "Resistance identities"),
                            ("halving", "Halving events"),
                            ("bilateral_halving", "Bilateral halving events"),
                        ],
                        max_length=20,
                    ),
                ),
                ("epsilon", models.FloatField()),
                ("scale", models.FloatField()),
                (
                    "worst_excess",
                    models.FloatField(
                        help_text="Largest measured amount over the stated bound."
                    ),
                ),
                ("worst_value", models.FloatField(default=0)),
                ("passed", models.BooleanField()),
                (
                    "report_json",
                    models.TextField(help_text="Canonical JSON of the full report."),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                (
                    "run",
                    models.OneToOneField(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="quality_report",
                        to="sparsifiers.sparsifierrun",
                    ),
                ),
            ],
            options={
                "verbose_name": "Quality Report",
                "verbose_name_plural": "Quality Reports",
            },
        ),
    ]
