from noc.common.utils import write_csv
from noc.designs.utils import save_design
from noc.experiments.commands import ExperimentCommand
from noc.experiments.utils import build_problem
from noc.routing.models import EVAL_HEADER
from noc.search.models import HISTORY_HEADER
from noc.search.utils import stage_optimize


class Command(ExperimentCommand):
    help = "Run the process-oblivious and process-aware searches at one process point."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--design", help="Start from this design directory.")

    def run(self, config, out_dir, **options):
        design = None
        if options.get("design"):
            design = self.load_design_dir(config, options["design"])
        problem = build_problem(config, design)
        result = stage_optimize(problem, config.search)

        save_design(out_dir / "po", result.baseline)
        save_design(out_dir / "best", result.best)
        write_csv(
            out_dir / "eval.csv",
            EVAL_HEADER,
            [
                result.baseline_eval.as_row("po", config.process),
                result.best_eval.as_row("best", config.process),
            ],
        )
        write_csv(out_dir / "history.csv", HISTORY_HEADER, (e.as_row() for e in result.history))
        self.stdout.write(f"PO EDP {result.baseline_eval.edp!r}")
        self.stdout.write(self.style.SUCCESS(f"Best EDP {result.best_eval.edp!r}"))
