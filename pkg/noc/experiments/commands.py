import json
import logging
from dataclasses import replace
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from noc.common.exceptions import (
    DesignValidationError,
    InfeasibleSpecError,
    ParameterError,
    TrafficFileError,
)
from noc.designs.utils import load_design

from .serializers import ExperimentConfigSerializer
from .utils import po_tiers

logger = logging.getLogger(__name__)

EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


def load_config(path):
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    serializer = ExperimentConfigSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def apply_overrides(config, seed=None, jobs=None, out=None):
    """Command-line flags win over the configuration file."""
    if seed is not None:
        config = replace(
            config,
            search=replace(config.search, seed=seed),
            smallworld=replace(config.smallworld, seed=seed),
            traffic=replace(config.traffic, seed=seed),
        )
    if jobs is not None:
        config = replace(config, jobs=jobs, search=replace(config.search, jobs=jobs))
    if out is not None:
        config = replace(config, output_dir=out)
    return config


class ExperimentCommand(BaseCommand):
    """Shared ``--config/--out/--seed/--jobs`` handling and error-to-exit-code mapping."""

    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument("--config", required=True, help="JSON experiment configuration.")
        parser.add_argument("--out", help="Output directory (overrides output_dir).")
        parser.add_argument("--seed", type=int, help="Base random seed.")
        parser.add_argument("--jobs", type=int, help="Worker processes.")

    def run(self, config, out_dir, **options):
        raise NotImplementedError

    def load_design_dir(self, config, directory):
        return load_design(
            directory,
            config.grid,
            config.kind,
            config.router,
            config.max_ports,
            default_tiers=po_tiers,
        )

    def handle(self, *args, **options):
        try:
            config = apply_overrides(
                load_config(options["config"]),
                seed=options.get("seed"),
                jobs=options.get("jobs"),
                out=options.get("out"),
            )
            run_options = {k: v for k, v in options.items() if k != "config"}
            self.run(config, Path(config.output_dir), **run_options)
        except json.JSONDecodeError as exc:
            raise CommandError(f"{options['config']}: invalid JSON: {exc}", returncode=EXIT_INVALID)
        except serializers.ValidationError as exc:
            raise CommandError(f"Invalid configuration: {exc.detail}", returncode=EXIT_INVALID)
        except DesignValidationError as exc:
            for violation in exc.report.violations:
                self.stderr.write(str(violation))
            raise CommandError(str(exc), returncode=EXIT_INVALID)
        except (TrafficFileError, ParameterError) as exc:
            raise CommandError(str(exc), returncode=EXIT_INVALID)
        except InfeasibleSpecError as exc:
            raise CommandError(str(exc), returncode=EXIT_INFEASIBLE)
        except OSError as exc:
            logger.debug("I/O failure", exc_info=True)
            raise CommandError(str(exc), returncode=EXIT_INTERNAL)
