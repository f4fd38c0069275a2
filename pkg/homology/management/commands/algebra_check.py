from ...algebra import dump_algebra
from ...pipeline import algebra_report, header
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Check the Frobenius, knowledgeable and Bar-Natan axioms of an algebra."

    uses_epsilon = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--dump", action="store_true", help="include the algebra document")

    def handle(self, *args, **options):
        choice = self.algebra(options, strict=False)
        report = algebra_report(choice.obj)
        doc = {
            "field": choice.field.as_dict(),
            "algebra": choice.name,
            "ok": report.ok,
            "checks": report.checks,
            "failures": {name: list(index) for name, index in report.failures.items()},
            "flags": report.flags,
        }
        if options["dump"]:
            doc["document"] = dump_algebra(choice.obj)
        lines = [header(choice)] + report.summary_lines()
        failed = sorted(report.failures)
        self.respond(options, doc, lines, f"axioms failed: {', '.join(failed)}" if failed else None)
