import uuid

from django.db import models
from django.utils.translation import gettext_lazy as _


class RunRecordModel(models.Model):
    """
    History rows: UUID keyed, stamped when written and when last touched.
    """
    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    created_at = models.DateTimeField(auto_now_add=True, verbose_name=_("time created"))
    modified_at = models.DateTimeField(auto_now=True, verbose_name=_("time modified"))

    class Meta:
        abstract = True


class AnalysisRun(RunRecordModel):
    SUCCEEDED = 'succeeded'
    FAILED = 'failed'
    STATUS_CHOICES = (
        (SUCCEEDED, _("succeeded")),
        (FAILED, _("failed")),
    )

    run_id = models.CharField(max_length=64, unique=True, verbose_name=_("run identifier"))
    query = models.TextField(verbose_name=_("query"))
    coordinator = models.CharField(max_length=32, verbose_name=_("coordinator"))
    seed = models.IntegerField(verbose_name=_("seed"))
    status = models.CharField(max_length=16, choices=STATUS_CHOICES, db_index=True, verbose_name=_("status"))
    exit_code = models.IntegerField(default=0, verbose_name=_("exit code"))
    run_dir = models.CharField(max_length=1024, verbose_name=_("run directory"))
    error = models.JSONField(null=True, blank=True, verbose_name=_("error"))

    class Meta:
        verbose_name = _("analysis run")
        verbose_name_plural = _("analysis runs")
        ordering = ('-created_at',)

    def __str__(self):
        return "%s (%s)" % (self.run_id, self.status)


class StageRecord(RunRecordModel):
    run = models.ForeignKey(
        AnalysisRun, on_delete=models.CASCADE, related_name="stages", verbose_name=_("run")
    )
    node_id = models.CharField(max_length=128, verbose_name=_("node identifier"))
    tool = models.CharField(max_length=64, verbose_name=_("tool"))
    status = models.CharField(max_length=16, verbose_name=_("status"))
    item_count = models.IntegerField(null=True, blank=True, verbose_name=_("item count"))
    omitted_count = models.IntegerField(null=True, blank=True, verbose_name=_("omitted item count"))
    elapsed = models.FloatField(null=True, blank=True, verbose_name=_("elapsed seconds"))

    class Meta:
        verbose_name = _("stage record")
        verbose_name_plural = _("stage records")
        unique_together = ('run', 'node_id')
        ordering = ('run', 'node_id')

    def __str__(self):
        return "%s/%s: %s" % (self.run.run_id, self.node_id, self.status)
