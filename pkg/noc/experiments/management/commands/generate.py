from noc.designs.utils import clustering_coefficient, save_topology
from noc.experiments.commands import ExperimentCommand
from noc.experiments.utils import build_topology, build_traffic, write_traffic_report
from noc.topology.utils import save_traffic_csv


class Command(ExperimentCommand):
    help = "Generate a topology and a traffic matrix from the configuration."

    def run(self, config, out_dir, **options):
        topology = build_topology(config)
        traffic = build_traffic(config)
        save_topology(out_dir / "design", topology)
        save_traffic_csv(out_dir / "traffic.csv", traffic)
        write_traffic_report(out_dir / "traffic_by_distance.csv", traffic, topology)

        summary = f"{config.kind.label}: {topology.num_routers} routers, {topology.num_links} links"
        if topology.num_routers >= 3:
            summary += f", clustering {clustering_coefficient(topology):.4f}"
        self.stdout.write(self.style.SUCCESS(summary))
        self.stdout.write(f"Wrote {out_dir}")
