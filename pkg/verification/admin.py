from django.contrib import admin

from .models import QualityReportRecord


@admin.register(QualityReportRecord)
class QualityReportRecordAdmin(admin.ModelAdmin):
    list_display = ('run', 'guarantee', 'epsilon', 'worst_excess', 'passed', 'created_at')
    list_filter = ('guarantee', 'passed')
    readonly_fields = ('run', 'report_json', 'created_at')

    def has_add_permission(self, request):
        return False
