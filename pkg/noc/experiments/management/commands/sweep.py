from noc.experiments.commands import ExperimentCommand
from noc.experiments.utils import run_sweep


class Command(ExperimentCommand):
    help = "Sweep (alpha, beta, gamma) and write distribution and EDP reports."

    def run(self, config, out_dir, **options):
        results = run_sweep(config, out_dir)
        self.stdout.write(self.style.SUCCESS(f"{len(results)} cells written to {out_dir}"))
