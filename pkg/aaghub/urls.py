from django.contrib import admin
from django.urls import include, path

from analytics.api.internal import urls as internal_urls

urlpatterns = [
    path('internal/v1/', include(internal_urls, namespace='internal')),
    path('admin/', admin.site.urls),
]
