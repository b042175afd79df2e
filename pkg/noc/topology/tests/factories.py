import factory

from noc.topology.models import SmallWorldSpec, TrafficKind, TrafficSpec


class SmallWorldSpecFactory(factory.Factory):
    class Meta:
        model = SmallWorldSpec

    link_budget = None
    decay_exponent = 2.0
    seed = factory.Sequence(lambda n: n)
    max_ports = 7


class TrafficSpecFactory(factory.Factory):
    class Meta:
        model = TrafficSpec

    kind = TrafficKind.DISTANCE_DECAY
    hotspot_fraction = 0.5
    hot_cores = 1
    decay_exponent = 4.0
    seed = 0
