from ...complex import format_laurent, graded_euler_characteristic, homology_bigraded
from ...oracles import kauffman_bracket, khovanov_link_oracle, normalized_bracket
from ...pipeline import header, read_diagram, tangle_complex
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Check a link against the state-sum homology and the Kauffman bracket."

    uses_tangle = True

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        diagram = read_diagram(options["tangle"])
        oracle = khovanov_link_oracle(diagram, choice.closed_algebra)
        c = tangle_complex(diagram, epsilon, choice)
        pipeline = homology_bigraded(c)
        euler = graded_euler_characteristic(c)
        jones = normalized_bracket(diagram)
        agree = oracle.ranks == pipeline.ranks and format_laurent(euler) == format_laurent(jones)
        doc = {
            "field": choice.field.as_dict(),
            "algebra": choice.name,
            "bracket": format_laurent(kauffman_bracket(diagram)),
            "normalized_bracket": format_laurent(jones),
            "euler": format_laurent(euler),
            "oracle": oracle.rows(),
            "agrees": agree,
        }
        lines = [
            header(choice, epsilon),
            f"bracket: {doc['bracket']}",
            f"normalized: {doc['normalized_bracket']}",
            f"euler: {doc['euler']}",
            "r k rank",
        ]
        lines += [f"{row['r']} {row['k']} {row['rank']}" for row in doc["oracle"]]
        lines.append(f"agrees with pipeline: {'yes' if agree else 'no'}")
        self.respond(options, doc, lines, None if agree else "oracle disagrees with the pipeline")
