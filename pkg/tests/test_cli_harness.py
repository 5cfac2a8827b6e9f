import io
import json
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path

from core.cli_harness import (
    FIXTURES_DIR,
    FixtureReport,
    fixture_paths,
    load_problem,
    main,
    parse_fixture,
    run_all,
    run_fixture,
    summary_exit_code,
)
from core.config import Settings
from core.constants import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK
from core.errors import FixtureError


def run_main(*argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(list(argv))
    return code, buffer.getvalue()


class TestFixtures(unittest.TestCase):
    def test_parse_fixture(self):
        text = "# why it holds\nkind: force\ntheory: q.thy\nlambda: sigma_zero.lam\ngoal: 0 = 0\nexpect: FORCED\n"
        fixture = parse_fixture(text, "demo", FIXTURES_DIR)
        self.assertEqual(fixture.kind, "force")
        self.assertEqual(fixture.lam, FIXTURES_DIR / "sigma_zero.lam")
        self.assertEqual(fixture.provenance, ("why it holds",))
        self.assertIsNone(fixture.max_level)

    def test_malformed_fixtures(self):
        for text in ("kind: force\nexpect: FORCED\n", "kind: guess\ntheory: q.thy\nexpect: X\n",
                     "kind: prove\ntheory: q.thy\nexpect: PROVED\nmax_level: two\n", "just words\n"):
            with self.assertRaises(FixtureError):
                parse_fixture(text, "bad", FIXTURES_DIR)

    def test_every_fixture_passes(self):
        reports = run_all(Settings(workers=2))
        self.assertEqual(len(reports), len(fixture_paths()))
        failed = [(r.name, r.actual, r.detail) for r in reports if not r.passed]
        self.assertEqual(failed, [])
        self.assertEqual(summary_exit_code(reports), EXIT_OK)

    def test_single_fixture_by_name(self):
        report = run_fixture("q-skolem-symbols")
        self.assertTrue(report.passed)
        self.assertEqual(report.actual, "2")
        with self.assertRaises(FixtureError):
            run_fixture("no-such-fixture")

    def test_budget_is_reported(self):
        report = run_fixture("squaring-forcing", Settings(budget_atoms=50))
        self.assertEqual(report.status, "budget")
        self.assertEqual(summary_exit_code([report]), EXIT_BUDGET)

    def test_exit_code_priorities(self):
        make = lambda status: FixtureReport("x", "force", "FORCED", "?", status, 0.0)
        self.assertEqual(summary_exit_code([make("pass"), make("budget"), make("fail")]), EXIT_MISMATCH)
        self.assertEqual(summary_exit_code([]), EXIT_OK)

    def test_negated_goal_joins_the_theory(self):
        problem = load_problem(FIXTURES_DIR / "prs.thy", "forall x. R(x)", negate_goal=True)
        self.assertEqual(str(problem.t_sk[-1]), "~R(sk2)")
        self.assertIn("sk2", problem.signature.function_arities)


class TestCommandLine(unittest.TestCase):
    def path(self, name):
        return str(FIXTURES_DIR / name)

    def test_skolemize_json(self):
        code, out = run_main("--json", "skolemize", "--theory", self.path("q.thy"))
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(len(payload["formulas"]), 8)
        self.assertEqual([row["arity"] for row in payload["registry"]], [1, 2])

    def test_skolemize_aliases(self):
        code, out = run_main("skolemize", "--theory", self.path("q.thy"), "--alias", "sk1=p", "--alias", "sk2=h")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("x1 = 0 | x1 = s(𝔭(x1))", out)
        self.assertIn("x1 + 𝔥(x1, x2) = x2", out)
        self.assertIn("𝔥/2 = f[", out)
        code, out = run_main("--json", "skolemize", "--theory", self.path("q.thy"), "--alias", "sk1=pred")
        payload = json.loads(out)
        self.assertEqual([row["alias"] for row in payload["registry"]], ["pred", None])
        self.assertEqual(payload["formulas"][2]["open"], "x1 = 0 | x1 = s(sk1(x1))")
        self.assertEqual(payload["formulas"][2]["shown"], "x1 = 0 | x1 = s(pred(x1))")
        self.assertEqual(run_main("skolemize", "--theory", self.path("q.thy"), "--alias", "sk9=p")[0], EXIT_MISMATCH)
        self.assertEqual(run_main("skolemize", "--theory", self.path("q.thy"), "--alias", "sk1")[0], EXIT_MISMATCH)

    def test_normalize(self):
        code, out = run_main("normalize", "--signature", "signature: c/0 ; P/1", "--formula", "~forall x. P(x)")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("rnnf: exists x1. ~P(x1)", out)

    def test_check_eval_exit_codes(self):
        args = ["check-eval", "--theory", self.path("prs.thy"), "--lambda", self.path("prs.lam"), "--eval"]
        self.assertEqual(run_main(*args, self.path("prs_q.eval"))[0], EXIT_OK)
        code, out = run_main(*args, self.path("prs_r.eval"))
        self.assertEqual(code, EXIT_MISMATCH)
        self.assertIn("violated: ~P(c, sk1(c)) | ~S(c)", out)

    def test_find_eval_brute(self):
        code, out = run_main(
            "--json", "find-eval", "--theory", self.path("prs.thy"), "--lambda", self.path("prs_refuting.lam"),
            "--goal", "forall x. R(x)", "--mode", "brute",
        )
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["verdict"], "UNSAT")

    def test_prove_and_check_certificate(self):
        with tempfile.TemporaryDirectory() as tmp:
            cert = str(Path(tmp) / "prs.cert")
            code, out = run_main(
                "prove", "--theory", self.path("prs.thy"), "--goal", "forall x. R(x)",
                "--max-level", "2", "--certificate", cert,
            )
            self.assertEqual(code, EXIT_OK)
            self.assertTrue(out.startswith("PROVED"))
            self.assertEqual(run_main("check-cert", cert)[0], EXIT_OK)

    def test_prove_runs_out_of_budget(self):
        code, out = run_main(
            "prove", "--theory", self.path("q.thy"), "--goal", "forall x. (x <= 0 -> x = 0)", "--max-level", "2",
        )
        self.assertEqual(code, EXIT_BUDGET)
        self.assertTrue(out.startswith("UNKNOWN"))

    def test_universe_sizes(self):
        code, out = run_main("--json", "universe", "--theory", self.path("prs.thy"), "--levels", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["sizes"], [1, 3, 7])

    def test_parse_errors_exit_nonzero(self):
        code, _ = run_main("force", "--theory", self.path("q.thy"), "--lambda", self.path("sigma_zero.lam"),
                           "--goal", "0 = = 0")
        self.assertEqual(code, EXIT_MISMATCH)


if __name__ == '__main__':
    unittest.main()
