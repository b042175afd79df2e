from django.apps import AppConfig


class TopologyConfig(AppConfig):
    name = "noc.topology"
    verbose_name = "Topology and traffic generation"
