from django.contrib import admin

from .models import AnalysisRun, StageRecord


class StageRecordInline(admin.TabularInline):
    model = StageRecord
    extra = 0
    readonly_fields = ('node_id', 'tool', 'status', 'item_count', 'omitted_count', 'elapsed')


class AnalysisRunAdmin(admin.ModelAdmin):
    list_display = ('run_id', 'status', 'exit_code', 'coordinator', 'created_at')
    list_filter = ('status', 'coordinator')
    search_fields = ('run_id', 'query')
    inlines = [StageRecordInline]


admin.site.register(AnalysisRun, AnalysisRunAdmin)
