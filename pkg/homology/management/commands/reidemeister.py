from django.conf import settings

from ...generators import MOVES
from ...pipeline import header, parse_moves, reidemeister_suite
from ...tangle import MalformedInput
from ..base import HomologyCommand


class Command(HomologyCommand):
    help = "Compare invariants across seeded random Reidemeister move pairs."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--moves", default=",".join(MOVES))
        parser.add_argument("--nmax", type=int, default=6)
        parser.add_argument("--count", type=int, default=5)

    def handle(self, *args, **options):
        choice = self.algebra(options)
        epsilon = self.epsilon(options)
        moves = parse_moves(options["moves"])
        nmax = options["nmax"]
        if nmax > settings.MAX_CROSSINGS:
            raise MalformedInput(f"--nmax {nmax} exceeds the limit of {settings.MAX_CROSSINGS}")
        seed = settings.DEFAULT_SEED if options["seed"] is None else options["seed"]
        report = reidemeister_suite(seed, moves, nmax, choice, epsilon, options["count"])
        lines = [header(choice, epsilon), f"# seed={seed} moves={','.join(moves)} nmax={nmax}"]
        lines += [f"{r['move']} {r['index']} n={r['n_before']}->{r['n_after']} "
                  f"{'pass' if r['passed'] else 'FAIL'}" for r in report["pairs"]]
        failed = sum(1 for r in report["pairs"] if not r["passed"])
        self.respond(options, report, lines,
                     f"{failed} move pairs changed the invariant" if failed else None)
