from django.apps import AppConfig


class AaghubAppConfig(AppConfig):
    name = 'aaghub'
