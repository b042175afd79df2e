from django.apps import AppConfig


class RoutingConfig(AppConfig):
    name = "noc.routing"
    verbose_name = "Routing and evaluation"
