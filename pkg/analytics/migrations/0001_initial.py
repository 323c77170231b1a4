# Generated by Django 4.2.11 on 2026-10-19 09:12

import uuid

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='AnalysisRun',
            fields=[
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='time created')),
                ('modified_at', models.DateTimeField(auto_now=True, verbose_name='time modified')),
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('run_id', models.CharField(max_length=64, unique=True, verbose_name='run identifier')),
                ('query', models.TextField(verbose_name='query')),
                ('coordinator', models.CharField(max_length=32, verbose_name='coordinator')),
                ('seed', models.IntegerField(verbose_name='seed')),
                ('status', models.CharField(choices=[('succeeded', 'succeeded'), ('failed', 'failed')], db_index=True, max_length=16, verbose_name='status')),
                ('exit_code', models.IntegerField(default=0, verbose_name='exit code')),
                ('run_dir', models.CharField(max_length=1024, verbose_name='run directory')),
                ('error', models.JSONField(blank=True, null=True, verbose_name='error')),
            ],
            options={
                'verbose_name': 'analysis run',
                'verbose_name_plural': 'analysis runs',
                'ordering': ('-created_at',),
            },
        ),
        migrations.CreateModel(
            name='StageRecord',
            fields=[
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='time created')),
                ('modified_at', models.DateTimeField(auto_now=True, verbose_name='time modified')),
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('node_id', models.CharField(max_length=128, verbose_name='node identifier')),
                ('tool', models.CharField(max_length=64, verbose_name='tool')),
                ('status', models.CharField(max_length=16, verbose_name='status')),
                ('item_count', models.IntegerField(blank=True, null=True, verbose_name='item count')),
                ('omitted_count', models.IntegerField(blank=True, null=True, verbose_name='omitted item count')),
                ('elapsed', models.FloatField(blank=True, null=True, verbose_name='elapsed seconds')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='stages', to='analytics.analysisrun', verbose_name='run')),
            ],
            options={
                'verbose_name': 'stage record',
                'verbose_name_plural': 'stage records',
                'ordering': ('run', 'node_id'),
                'unique_together': {('run', 'node_id')},
            },
        ),
    ]
