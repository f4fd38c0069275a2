from ...complex import homology_ranks
from ...compose import compose_tangle, composition_report
from ...pipeline import header, read_diagram
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Assemble a tangle complex from local pieces and compare it with the global one."

    uses_tangle = True

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        diagram = read_diagram(options["tangle"])
        pair = choice.for_cube()
        composed = compose_tangle(diagram, epsilon, pair)
        report = composition_report(diagram, epsilon, pair)
        doc = {
            "field": choice.field.as_dict(),
            "algebra": choice.name,
            "epsilon": epsilon,
            "boundary_actions": composed.boundary_actions(),
            "homology": {str(r): v for r, v in sorted(homology_ranks(composed.complex).items())},
            "report": report.as_dict(),
        }
        lines = [header(choice, epsilon)]
        lines += [f"point {p['point']} {p['sign']}" for p in doc["boundary_actions"]]
        lines += [f"C^{r}: {v}" for r, v in sorted(report.composed_dims.items())]
        lines += [f"H^{r}: {v}" for r, v in sorted(report.composed_ranks.items())]
        lines.append(f"isomorphic to the diagram complex: {'yes' if report.ok else 'no'}")
        self.respond(options, doc, lines,
                     None if report.ok else "composed complex differs from the diagram complex")
