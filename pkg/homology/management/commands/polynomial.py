from ...complex import homology_bigraded, poincare_polynomial
from ...pipeline import header, read_diagram, tangle_complex
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Poincaré polynomial of a tangle."

    uses_tangle = True

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        c = tangle_complex(read_diagram(options["tangle"]), epsilon, choice)
        polynomial = poincare_polynomial(homology_bigraded(c)).canonical()
        doc = {"field": choice.field.as_dict(), "algebra": choice.name, "epsilon": epsilon,
               "polynomial": polynomial}
        self.respond(options, doc, [header(choice, epsilon), polynomial])
