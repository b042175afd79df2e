from django.apps import AppConfig


class DesignsConfig(AppConfig):
    name = "noc.designs"
    verbose_name = "Designs"
