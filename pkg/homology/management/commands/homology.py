from ...complex import homology_bigraded, result_document
from ...pipeline import header, read_diagram, tangle_complex
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Bigraded homology ranks and Poincaré polynomial of a tangle."

    uses_tangle = True

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        diagram = read_diagram(options["tangle"])
        c = tangle_complex(diagram, epsilon, choice)
        dims = homology_bigraded(c)
        doc = result_document(c, dims, choice.name, epsilon, diagram.n_plus, diagram.n_minus)
        lines = [header(choice, epsilon), f"# n_plus={diagram.n_plus} n_minus={diagram.n_minus}", "r k rank"]
        lines += [f"{row['r']} {row['k']} {row['rank']}" for row in dims.rows()]
        lines.append(f"polynomial: {doc['polynomial']}")
        self.respond(options, doc, lines)
