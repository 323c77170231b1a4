from django.urls import include, path
from rest_framework.routers import DefaultRouter

from .run import InternalAPIRunViewSet
from .tool import InternalAPIToolViewSet

router = DefaultRouter()
router.register(r'run', InternalAPIRunViewSet, basename='run')
router.register(r'tool', InternalAPIToolViewSet, basename='tool')

app_name = 'internal'
urlpatterns = [
    path('', include((router.urls, 'v1'), namespace='v1')),
]
