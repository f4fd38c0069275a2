import io
import json
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from homology.catalog import barnatan_pair, khovanov_pair
from homology.linalg import FieldSpec
from homology.pipeline import AlgebraChoice, choose_algebra, parse_moves, read_diagram, reidemeister_suite
from homology.tangle import MalformedInput

TANGLES = Path(__file__).resolve().parents[2] / "tangles"


def run(name, *argv):
    """Exit status, standard output and error message of one command."""
    out = io.StringIO()
    try:
        call_command(name, *argv, stdout=out)
    except CommandError as e:
        return e.returncode, out.getvalue(), str(e)
    return 0, out.getvalue(), ""


class CommandTest(SimpleTestCase):
    def test_homology(self):
        status, out, _ = run("homology", "--algebra", "barnatan_pair", "--char", "2",
                             str(TANGLES / "tprime.tangle"))
        self.assertEqual(status, 0)
        self.assertTrue(out.startswith("# field=GF(2) algebra=barnatan_pair epsilon=+1"))
        self.assertIn("polynomial: A^2 + A^4 + t^2*A^10 + t^2*A^12", out)

    def test_homology_json(self):
        status, out, _ = run("homology", "--algebra", "khovanov_pair", "--format", "json", "t.tangle")
        self.assertEqual(status, 0)
        doc = json.loads(out)
        self.assertEqual(doc["polynomial"], "A^-2 + 2 + A^2")
        self.assertEqual((doc["n_plus"], doc["n_minus"]), (1, 1))

    def test_polynomial(self):
        status, out, _ = run("polynomial", "--algebra", "khovanov_pair", "t")
        self.assertEqual(status, 0)
        self.assertEqual(out.splitlines()[-1], "A^-2 + 2 + A^2")

    def test_euler(self):
        status, out, _ = run("euler", "--algebra", "c_ht", "--h", "0", "--t", "0",
                             str(TANGLES / "unknot.tangle"))
        self.assertEqual(status, 0)
        self.assertEqual(out.splitlines()[-1], "A^-2 + A^2")

    def test_spectral(self):
        status, out, _ = run("spectral", "--page", "1", "--format", "json", "tprime")
        self.assertEqual(status, 0)
        doc = json.loads(out)
        self.assertEqual(doc["page"], 1)
        self.assertEqual(sum(row["rank"] for row in doc["ranks"]), 8)

    def test_compose(self):
        status, out, _ = run("compose", "--algebra", "barnatan_pair", "r1")
        self.assertEqual(status, 0)
        self.assertIn("point b1 -", out)
        self.assertIn("isomorphic to the diagram complex: yes", out)

    def test_compose_json_carries_the_filtered_tables(self):
        status, out, _ = run("compose", "--algebra", "barnatan_pair", "--format", "json", "tprime")
        self.assertEqual(status, 0)
        report = json.loads(out)["report"]
        self.assertEqual(report["composed_table"], report["global_table"])
        self.assertTrue(report["ok"])

    def test_compose_needs_separable_algebra(self):
        status, out, err = run("compose", "--algebra", "khovanov_pair", "tprime")
        self.assertEqual(status, 1)
        self.assertEqual(out, "")
        self.assertTrue(err.startswith("NotStronglySeparable: "))

    def test_oracle(self):
        status, out, _ = run("oracle", "--algebra", "c_ht", "trefoil")
        self.assertEqual(status, 0)
        self.assertIn("agrees with pipeline: yes", out)

    def test_oracle_rejects_tangles(self):
        status, _, err = run("oracle", "--algebra", "khovanov_pair", "tprime")
        self.assertEqual(status, 2)
        self.assertTrue(err.startswith("NotALink: "))

    def test_algebra_list(self):
        status, out, _ = run("algebra_list")
        self.assertEqual(status, 0)
        self.assertIn("barnatan_pair", out)
        self.assertIn("m2k_plus_k", out)

    def test_algebra_check(self):
        status, out, _ = run("algebra_check", "--algebra", "barnatan_pair", "--char", "2")
        self.assertEqual(status, 0)
        self.assertIn("pair.cardy: ok", out)

    def test_algebra_check_reports_cardy_failure(self):
        status, out, err = run("algebra_check", "--algebra", "khovanov_pair", "--char", "3")
        self.assertEqual(status, 1)
        self.assertIn("pair.cardy: FAILED at (1, 0)", out)
        self.assertIn("pair.cardy", err)

    def test_algebra_check_matrix_size(self):
        status, out, _ = run("algebra_check", "--algebra", "matrix", "--size", "2", "--char", "5",
                             "--format", "json")
        self.assertEqual(status, 0)
        self.assertTrue(json.loads(out)["flags"]["strongly_separable"])

    def test_algebra_file(self):
        _, dumped, _ = run("algebra_check", "--algebra", "khovanov_pair", "--dump", "--format", "json")
        workdir = tempfile.TemporaryDirectory()
        self.addCleanup(workdir.cleanup)
        path = Path(workdir.name) / "khovanov.json"
        path.write_text(json.dumps(json.loads(dumped)["document"]))
        status, out, _ = run("polynomial", "--algebra-file", str(path), "t")
        self.assertEqual(status, 0)
        self.assertIn("algebra=khovanov_pair", out)

    def test_input_errors(self):
        cases = [
            ("homology", "missing.tangle"),
            ("homology", "--algebra", "nope", "tprime"),
            ("homology", "--char", "4", "tprime"),
            ("homology", "--algebra", "khovanov_pair", "--char", "3", "tprime"),
            ("reidemeister", "--moves", "R4"),
            ("reidemeister", "--nmax", "40"),
            ("algebra_check", "--algebra", "c_ht", "--size", "3"),
        ]
        for name, *argv in cases:
            with self.subTest(name=name, argv=argv):
                status, out, err = run(name, *argv)
                self.assertEqual(status, 2)
                self.assertEqual(out, "")
                self.assertRegex(err, r"^\w+: ")

    def test_bad_epsilon_is_an_argument_error(self):
        with self.assertRaisesMessage(CommandError, "argument --epsilon"):
            call_command("homology", "--epsilon", "0", "tprime", stdout=io.StringIO())

    @override_settings(DEFAULT_ALGEBRA="khovanov_pair", DEFAULT_FORMAT="json")
    def test_settings_defaults(self):
        status, out, _ = run("polynomial", "t")
        self.assertEqual(status, 0)
        self.assertEqual(json.loads(out)["algebra"], "khovanov_pair")


class PipelineTest(SimpleTestCase):
    def test_choose_algebra_defaults(self):
        choice = choose_algebra()
        self.assertEqual(choice.name, "barnatan_pair")
        self.assertEqual(choice.field, FieldSpec(2))

    @override_settings(MAX_CROSSINGS=1)
    def test_crossing_limit(self):
        with self.assertRaises(MalformedInput):
            read_diagram("tprime")

    def test_bundled_names(self):
        self.assertEqual(read_diagram("tprime"), read_diagram(str(TANGLES / "tprime.tangle")))

    def test_parse_moves(self):
        self.assertEqual(parse_moves(" R1, R3 "), ["R1", "R3"])
        with self.assertRaises(MalformedInput):
            parse_moves(",")


class ReidemeisterTest(SimpleTestCase):
    def test_suite_passes_for_graded_pair(self):
        choice = AlgebraChoice("khovanov_pair", khovanov_pair(FieldSpec(2)))
        report = reidemeister_suite(3, ["R1", "R2", "R3"], 4, choice, count=50)
        self.assertTrue(report["passed"], [r for r in report["pairs"] if not r["passed"]])
        self.assertEqual(len(report["pairs"]), 150)

    def test_third_move_over_many_seeds(self):
        choice = AlgebraChoice("khovanov_pair", khovanov_pair(FieldSpec(2)))
        for seed in range(5):
            with self.subTest(seed=seed):
                report = reidemeister_suite(seed, ["R3"], 5, choice, count=3)
                self.assertTrue(report["passed"])

    def test_filtered_pair_compares_pages(self):
        choice = AlgebraChoice("barnatan_pair", barnatan_pair(FieldSpec(2)))
        report = reidemeister_suite(2, ["R1", "R2", "R3"], 4, choice, count=50)
        self.assertTrue(report["passed"], [r for r in report["pairs"] if not r["passed"]])

    def test_command(self):
        status, out, _ = run("reidemeister", "--algebra", "khovanov_pair", "--moves", "R2",
                             "--nmax", "4", "--count", "2", "--seed", "1")
        self.assertEqual(status, 0)
        self.assertEqual(len([line for line in out.splitlines() if line.startswith("R2")]), 2)
