from django.apps import AppConfig


class ExperimentsConfig(AppConfig):
    name = "noc.experiments"
    verbose_name = "Experiments"
