from ...catalog import CATALOG
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "List the built-in algebras with the fields they accept."

    uses_algebra = False
    uses_epsilon = False

    def handle(self, *args, **options):
        entries = [{"name": e.name, "fields": e.fields, "description": e.description}
                   for e in CATALOG.values()]
        lines = [f"{e['name']:<16}{e['fields']:<8}{e['description']}" for e in entries]
        self.respond(options, {"algebras": entries}, lines)
