import django_filters
from rest_framework import permissions, serializers, viewsets

from analytics.models import AnalysisRun, StageRecord


class InternalAPIStageRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = StageRecord
        fields = ('node_id', 'tool', 'status', 'item_count', 'omitted_count', 'elapsed')


class InternalAPIRunSerializer(serializers.ModelSerializer):
    stages = InternalAPIStageRecordSerializer(many=True, read_only=True)

    class Meta:
        model = AnalysisRun
        fields = '__all__'


class InternalAPIRunFilter(django_filters.rest_framework.FilterSet):
    status = django_filters.ChoiceFilter(choices=AnalysisRun.STATUS_CHOICES)
    coordinator = django_filters.CharFilter()

    class Meta:
        model = AnalysisRun
        fields = ('status', 'coordinator')


class InternalAPIRunViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = AnalysisRun.objects.prefetch_related('stages')
    serializer_class = InternalAPIRunSerializer
    permission_classes = (permissions.IsAdminUser,)
    filterset_class = InternalAPIRunFilter
