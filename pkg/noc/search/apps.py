from django.apps import AppConfig


class StageSearchConfig(AppConfig):
    name = "noc.search"
    verbose_name = "Design search"
