from ...complex import format_laurent, graded_euler_characteristic
from ...pipeline import header, read_diagram, tangle_complex
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Graded Euler characteristic of a tangle complex."

    uses_tangle = True

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        c = tangle_complex(read_diagram(options["tangle"]), epsilon, choice)
        euler = format_laurent(graded_euler_characteristic(c))
        doc = {"field": choice.field.as_dict(), "algebra": choice.name, "epsilon": epsilon,
               "euler": euler}
        self.respond(options, doc, [header(choice, epsilon), euler])
