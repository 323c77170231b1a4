from django.apps import AppConfig


class AnalyticsAppConfig(AppConfig):
    name = 'analytics'
    default_auto_field = 'django.db.models.BigAutoField'
