from ...pipeline import header, read_diagram, tangle_complex
from ...spectral import spectral_page
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "A page of the spectral sequence of the filtered tangle complex."

    uses_tangle = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--page", type=int, default=1)

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        c = tangle_complex(read_diagram(options["tangle"]), epsilon, choice)
        page = spectral_page(c, options["page"])
        rows = [{"k": k, "i": i, "rank": v} for (k, i), v in sorted(page.ranks.items())]
        doc = {"field": choice.field.as_dict(), "algebra": choice.name, "epsilon": epsilon,
               "page": options["page"], "ranks": rows}
        lines = [header(choice, epsilon), f"# page E_{options['page']}", "k i rank"]
        lines += [f"{row['k']} {row['i']} {row['rank']}" for row in rows]
        self.respond(options, doc, lines)
