from django.apps import AppConfig


class TimingConfig(AppConfig):
    name = "noc.timing"
    verbose_name = "Timing and energy"
