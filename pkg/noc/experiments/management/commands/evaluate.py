from noc.common.utils import write_csv
from noc.experiments.commands import ExperimentCommand
from noc.experiments.utils import build_traffic
from noc.routing.models import EVAL_HEADER
from noc.routing.utils import evaluate
from noc.topology.utils import load_traffic_csv


class Command(ExperimentCommand):
    help = "Evaluate latency, energy and EDP of a design directory."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--design",
            help="Design directory (default: <out>/design); missing tier files mean PO tiers.",
        )
        parser.add_argument("--traffic", help="Traffic CSV (default: from the configuration).")

    def run(self, config, out_dir, **options):
        design_dir = options.get("design") or out_dir / "design"
        design = self.load_design_dir(config, design_dir)
        if options.get("traffic"):
            traffic = load_traffic_csv(options["traffic"], design.topology.num_routers)
        else:
            traffic = build_traffic(config)
        result = evaluate(design, traffic, config.process)

        write_csv(out_dir / "eval.csv", EVAL_HEADER, [result.as_row("design", config.process)])
        self.stdout.write(f"latency_ps={result.latency!r}")
        self.stdout.write(f"energy_pj={result.energy!r}")
        self.stdout.write(self.style.SUCCESS(f"edp={result.edp!r}"))
