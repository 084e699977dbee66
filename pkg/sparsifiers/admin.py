from django.contrib import admin

from .models import SparsifierRun
from verification.models import QualityReportRecord


class QualityReportRecordInline(admin.StackedInline):
    model = QualityReportRecord
    can_delete = False
    verbose_name_plural = 'Quality Report'
    readonly_fields = (
        'guarantee', 'epsilon', 'scale', 'worst_excess', 'worst_value', 'passed', 'report_json'
    )

    def has_add_permission(self, request, obj=None):
        return False


@admin.register(SparsifierRun)
class SparsifierRunAdmin(admin.ModelAdmin):
    list_display = ('command', 'epsilon', 'seed', 'state', 'size_display', 'passed', 'created_at')
    list_filter = ('command', 'state', 'passed')
    search_fields = ('input_path', 'output_path', 'seed')
    readonly_fields = ('started_at', 'finished_at', 'duration', 'config', 'error')
    date_hierarchy = 'created_at'

    fieldsets = (
        ('Run', {
            'fields': ('command', 'epsilon', 'seed', 'input_path', 'output_path', 'report_path')
        }),
        ('Outcome', {
            'fields': ('state', 'input_size', 'output_size', 'scale', 'passed', 'error')
        }),
        ('Timing', {
            'fields': ('started_at', 'finished_at', 'duration')
        }),
        ('Configuration', {
            'fields': ('config',)
        }),
    )

    inlines = [QualityReportRecordInline]

    def size_display(self, obj):
        if obj.output_size is None:
            return f"{obj.input_size} -> ?"
        return f"{obj.input_size} -> {obj.output_size}"
    size_display.short_description = 'Edges'
