from noc.common.utils import write_csv
from noc.designs.utils import save_design
from noc.experiments.commands import ExperimentCommand
from noc.experiments.models import BRUTE_HEADER
from noc.experiments.utils import brute_force_tiers, build_problem


class Command(ExperimentCommand):
    help = "Exhaustively find the EDP-optimal tier assignment of a small fixed design."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--design", help="Design directory (default: generated topology).")
        parser.add_argument("--limit", type=int, help="Maximum raw assignment count.")

    def run(self, config, out_dir, **options):
        design = None
        if options.get("design"):
            design = self.load_design_dir(config, options["design"])
        problem = build_problem(config, design)
        pp = problem.process
        certificate = brute_force_tiers(problem.design, problem.traffic, pp, options.get("limit"))

        save_design(out_dir / "brute", certificate.design)
        write_csv(
            out_dir / "brute.csv",
            BRUTE_HEADER,
            [
                (
                    pp.alpha,
                    pp.beta,
                    pp.gamma,
                    certificate.result.edp,
                    certificate.result.latency,
                    certificate.result.energy,
                    certificate.valid_assignments,
                    certificate.raw_assignments,
                )
            ],
        )
        self.stdout.write(
            f"{certificate.valid_assignments} valid of {certificate.raw_assignments} assignments"
        )
        self.stdout.write(self.style.SUCCESS(f"Optimal EDP {certificate.result.edp!r}"))
