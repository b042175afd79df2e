from django.apps import AppConfig


class CommonConfig(AppConfig):
    name = "noc.common"
    verbose_name = "Common"
