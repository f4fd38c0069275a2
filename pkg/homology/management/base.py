"""
Shared plumbing for the homology management commands.

Malformed input ends a command with exit status 2, a computation that
cannot be carried out or a failed check with exit status 1.
"""

import json
from typing import Any, Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from ..errors import ComputationError, InputError
from ..pipeline import AlgebraChoice, choose_algebra


class HomologyCommand(BaseCommand):
    requires_system_checks = []

    uses_algebra = True
    uses_epsilon = True
    uses_tangle = False

    def add_arguments(self, parser):
        parser.add_argument("--format", choices=("text", "json"), default=settings.DEFAULT_FORMAT)
        if self.uses_algebra:
            parser.add_argument("--algebra", default=None, help="catalog name")
            parser.add_argument("--algebra-file", default=None, help="JSON algebra document")
            parser.add_argument("--char", type=int, default=None)
            parser.add_argument("--h", default=None)
            parser.add_argument("--t", default=None)
            parser.add_argument("--alpha", default=None)
            parser.add_argument("--size", type=int, default=None)
        if self.uses_epsilon:
            parser.add_argument("--epsilon", type=int, choices=(1, -1), default=None)
        if self.uses_tangle:
            parser.add_argument("tangle", help="slice-word file, bundled sample name, or -")

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except InputError as e:
            raise CommandError(f"{type(e).__name__}: {e}", returncode=2) from e
        except ComputationError as e:
            raise CommandError(f"{type(e).__name__}: {e}", returncode=1) from e

    def algebra(self, options: dict[str, Any], strict: bool = True) -> AlgebraChoice:
        return choose_algebra(
            algebra=options["algebra"],
            char=options["char"],
            h=options["h"],
            t=options["t"],
            alpha=options["alpha"],
            size=options["size"],
            algebra_file=options["algebra_file"],
            strict=strict,
        )

    def epsilon(self, options: dict[str, Any]) -> int:
        return settings.DEFAULT_EPSILON if options["epsilon"] is None else options["epsilon"]

    def respond(self, options: dict[str, Any], doc: dict, lines: list[str],
                failure: Optional[str] = None) -> None:
        """Write the result; a failure message turns into exit status 1 afterwards."""
        if options["format"] == "json":
            self.stdout.write(json.dumps(doc, indent=2))
        else:
            self.stdout.write("\n".join(lines))
        if failure:
            raise CommandError(failure, returncode=1)
