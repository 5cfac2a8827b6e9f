import dataclasses
import unittest
from pathlib import Path

from core.errors import SignatureError, UnboundedQuantifierError
from core.evaluation_engine import (
    Evaluation,
    atoms_over,
    find_evaluation,
    force_check,
    is_T_evaluation,
    load_evaluation,
)
from core.goedel_coding import CodingScheme
from core.cli_harness import load_problem
from core.herbrand_engine import (
    HConVerdict,
    ProofVerdict,
    Truth,
    WitnessKind,
    build_quotient_model,
    check_certificate,
    dump_certificate,
    eval_in_model,
    grow_universe,
    hcon_check,
    hcon_star_check,
    hcon_term_set,
    initial_universe,
    load_certificate,
    order_forcing_goal,
    order_forcing_terms,
    product_forcing_terms,
    product_goal,
    q_witness_symbols,
    prove,
    sigma_terms,
    substitute_constants,
    sum_forcing_terms,
    sum_goal,
)
from core.instantiation import TermSet, available_instances, load_term_set
from core.skolemizer import SkolemRegistry, skolemize_theory
from core.syntax_core import app, const, load_theory, parse_formula, parse_signature, render_term

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


class TestProofSearch(unittest.TestCase):
    def setUp(self):
        self.prs = load_theory(FIXTURES / "prs.thy")
        self.q = load_theory(FIXTURES / "q.thy")
        self.prs_goal = parse_formula("forall x. R(x)", self.prs.signature)
        self.q_goal = parse_formula("forall x. (x <= 0 -> x = 0)", self.q.signature)

    def test_prs_proof_is_minimal(self):
        result = prove(self.prs, self.prs_goal, max_level=2)
        self.assertEqual(result.verdict, ProofVerdict.PROVED)
        self.assertEqual(result.candidate, "level 2")
        terms = sorted(render_term(t) for t in result.certificate.terms)
        self.assertEqual(terms, ["g(sk2)", "sk1(g(sk2))", "sk2"])
        self.assertTrue(check_certificate(result.certificate))

    def test_level_one_is_not_enough(self):
        result = prove(self.prs, self.prs_goal, max_level=1)
        self.assertFalse(result.proved)
        self.assertEqual(result.levels_tried, 2)

    def test_certificate_survives_a_round_trip(self):
        cert = prove(self.prs, self.prs_goal, max_level=2).certificate
        text = dump_certificate(cert)
        self.assertTrue(text.startswith("c herbrand-certificate v1\n"))
        loaded = load_certificate(text)
        self.assertEqual(loaded.terms.elements, cert.terms.elements)
        self.assertEqual(loaded.clauses, cert.clauses)
        self.assertTrue(check_certificate(loaded).ok)

    def test_tampered_certificate_fails(self):
        cert = prove(self.prs, self.prs_goal, max_level=2).certificate
        clauses = list(cert.clauses)
        clauses[0] = tuple(-l for l in clauses[0])
        check = check_certificate(dataclasses.replace(cert, clauses=tuple(clauses)))
        self.assertFalse(check.ok)
        self.assertEqual(check.failing_clause, 1)
        broken_steps = check_certificate(dataclasses.replace(cert, steps=cert.steps[:-1]))
        self.assertFalse(broken_steps)

    def test_brute_mode_gives_exhaustive_witness(self):
        seed = load_term_set(FIXTURES / "prs_refuting.lam", self._prs_signature())
        result = prove(self.prs, self.prs_goal, max_level=0, seeds=[seed], mode="brute")
        self.assertTrue(result.proved)
        self.assertEqual(result.certificate.witness, WitnessKind.EXHAUSTIVE)
        self.assertEqual(result.certificate.steps, ())
        self.assertTrue(check_certificate(result.certificate))

    def test_q_runs_out_of_atoms(self):
        result = prove(self.q, self.q_goal, max_level=2)
        self.assertEqual(result.verdict, ProofVerdict.UNKNOWN)
        self.assertEqual(result.levels_tried, 3)
        self.assertIn("budget", result.reason)

    def test_q_proves_with_sigma_seed(self):
        seeds = [TermSet.of([const("0")]), sigma_terms(const("sk3"), load_problem(FIXTURES / "q.thy").registry)]
        result = prove(self.q, self.q_goal, max_level=0, seeds=seeds, workers=2)
        self.assertTrue(result.proved)
        self.assertEqual(result.candidate, "seed 2")
        self.assertLessEqual(len(result.certificate.terms), 11)
        self.assertTrue(check_certificate(result.certificate))

    def test_open_goal_is_rejected(self):
        open_goal = parse_formula("R(x)", self.prs.signature, variables=["x"])
        with self.assertRaises(ValueError):
            prove(self.prs, open_goal)

    def _prs_signature(self):
        return load_problem(FIXTURES / "prs.thy", "forall x. R(x)", negate_goal=True).signature


class TestUniverse(unittest.TestCase):
    def setUp(self):
        self.prs = load_theory(FIXTURES / "prs.thy")
        self.registry = SkolemRegistry()
        skolemize_theory(self.prs, self.registry)
        self.base = TermSet.of([const("c")])

    def test_growth_admits_skolem_symbols(self):
        u = grow_universe(initial_universe(self.base, self.prs.signature, self.registry))
        self.assertEqual(u.level, 1)
        self.assertEqual(sorted(render_term(t) for t in u.terms), ["c", "g(c)", "sk1(c)"])

    def test_coder_holds_back_expensive_symbols(self):
        coder = CodingScheme.for_registry(self.prs.signature, self.registry)
        u = initial_universe(self.base, self.prs.signature, self.registry)
        u = grow_universe(grow_universe(u, coder), coder)
        self.assertFalse(any(render_term(t).startswith("sk1") for t in u.terms))
        self.assertIn(app("g", app("g", const("c"))), u.terms)

    def test_growth_budget(self):
        u = initial_universe(self.base, self.prs.signature, self.registry)
        with self.assertRaises(ValueError):
            grow_universe(grow_universe(u), budget_terms=5)


class TestQuotientModel(unittest.TestCase):
    def test_prs_quotient(self):
        problem = load_problem(FIXTURES / "prs.thy")
        lam = load_term_set(FIXTURES / "prs.lam", problem.signature)
        q = load_evaluation(FIXTURES / "prs_q.eval", atoms_over(lam, problem.signature))
        model = build_quotient_model(lam, q)
        self.assertEqual(len(model.elements), 3)
        sig = problem.signature
        self.assertEqual(eval_in_model(model, parse_formula("P(c, sk1(c))", sig)), Truth.TRUE)
        self.assertEqual(eval_in_model(model, parse_formula("R(g(c)) | R(c)", sig)), Truth.TRUE)
        self.assertEqual(eval_in_model(model, parse_formula("S(g(g(c)))", sig)), Truth.UNDEFINED)
        self.assertEqual(eval_in_model(model, parse_formula("S(g(g(c))) & S(c)", sig)), Truth.FALSE)
        with self.assertRaises(UnboundedQuantifierError):
            eval_in_model(model, parse_formula("forall x. R(x)", sig))

    def test_bounded_quantifiers(self):
        sig = parse_signature("signature: 0/0 s/1 ; <=/2")
        zero, one = const("0"), app("s", const("0"))
        lam = TermSet.of([zero, one])
        table = atoms_over(lam, sig)
        le = [parse_formula(text, sig) for text in ("0 <= 0", "0 <= s(0)", "s(0) <= s(0)")]
        model = build_quotient_model(lam, Evaluation.from_true_atoms(table, le))
        cases = {
            "forall x. (x <= s(0) -> x = 0 | x = s(0))": Truth.TRUE,
            "exists x. (x <= 0 & x = s(0))": Truth.FALSE,
            "forall x. (x <= s(0) -> s(x) = s(0))": Truth.UNDEFINED,
            "forall x. (~x <= 0 | x = 0)": Truth.TRUE,
        }
        for text, expected in cases.items():
            self.assertEqual(eval_in_model(model, parse_formula(text, sig)), expected, text)

    def test_merged_classes_transfer(self):
        problem = load_problem(FIXTURES / "prs.thy")
        lam = load_term_set(FIXTURES / "prs.lam", problem.signature)
        sig = problem.signature
        atoms = [parse_formula(t, sig) for t in ("c = g(c)", "g(c) = c", "R(c)", "R(g(c))")]
        model = build_quotient_model(lam, Evaluation.from_true_atoms(atoms_over(lam, sig), atoms))
        self.assertEqual(len(model.elements), 2)
        self.assertEqual(eval_in_model(model, parse_formula("g(c) = c", sig)), Truth.TRUE)
        self.assertEqual(eval_in_model(model, parse_formula("R(g(g(c)))", sig)), Truth.TRUE)
        self.assertEqual(eval_in_model(model, parse_formula("S(g(sk1(c)))", sig)), Truth.UNDEFINED)

    def quotient_cases(self):
        prs = load_problem(FIXTURES / "prs.thy")
        lam = load_term_set(FIXTURES / "prs.lam", prs.signature)
        table = atoms_over(lam, prs.signature)
        yield prs.t_sk, lam, load_evaluation(FIXTURES / "prs_q.eval", table)
        yield prs.t_sk, lam, load_evaluation(FIXTURES / "prs_r.eval", table)
        yield prs.t_sk, lam, find_evaluation(prs.t_sk, lam, prs.signature)
        negated = load_problem(FIXTURES / "prs.thy", "forall x. R(x)", negate_goal=True)
        near_miss = load_term_set(FIXTURES / "prs_not_refuting.lam", negated.signature)
        yield negated.t_sk, near_miss, find_evaluation(negated.t_sk, near_miss, negated.signature)
        q = load_problem(FIXTURES / "q.thy")
        for name in ("sigma_zero.lam", "gamma_zero.lam"):
            lam = load_term_set(FIXTURES / name, q.signature)
            yield q.t_sk, lam, find_evaluation(q.t_sk, lam, q.signature)

    def test_atoms_transfer_to_the_quotient(self):
        for _, lam, p in self.quotient_cases():
            self.assertIsNotNone(p, lam.label)
            model = build_quotient_model(lam, p)
            for atom in p.table.atoms:
                self.assertEqual(eval_in_model(model, atom), Truth.of(p.value(atom)), (lam.label, atom))

    def test_available_instances_hold_in_the_quotient(self):
        checked = 0
        for t_sk, lam, p in self.quotient_cases():
            if not is_T_evaluation(p, t_sk):
                continue
            model = build_quotient_model(lam, p)
            for inst in available_instances(t_sk, lam):
                self.assertEqual(eval_in_model(model, inst.ground), Truth.TRUE, inst.describe())
                checked += 1
        self.assertGreater(checked, 0)


class TestForcingFamilies(unittest.TestCase):
    def setUp(self):
        self.q = load_problem(FIXTURES / "q.thy")

    def test_order_forcing(self):
        a = const("a")
        sig = self.q.signature.extend(functions=[("a", 0)])
        for i in range(4):
            lam = order_forcing_terms(a, i, self.q.registry)
            result = force_check(self.q.t_sk, lam, sig, order_forcing_goal(a, i))
            self.assertTrue(result.forced, i)

    def test_sums(self):
        for i in range(4):
            for j in range(4 - i):
                result = force_check(self.q.t_sk, sum_forcing_terms(i, j), self.q.signature, sum_goal(i, j))
                self.assertTrue(result.forced, (i, j))

    def test_products(self):
        pairs = [(i, j) for i in range(4) for j in range(4) if i * j <= 3]
        self.assertIn((1, 3), pairs)
        self.assertIn((3, 1), pairs)
        for i, j in pairs:
            result = force_check(self.q.t_sk, product_forcing_terms(i, j), self.q.signature, product_goal(i, j))
            self.assertTrue(result.forced, (i, j))

    def test_witness_names_come_from_the_registry(self):
        self.assertEqual(q_witness_symbols(self.q.registry), ("sk1", "sk2"))
        prs = load_problem(FIXTURES / "prs.thy")
        with self.assertRaises(SignatureError):
            sigma_terms(const("0"), prs.registry)
        renamed = SkolemRegistry(prefix="w")
        skolemize_theory(self.q.theory, renamed)
        self.assertEqual(q_witness_symbols(renamed), ("w1", "w2"))
        self.assertIn(app("w2", const("0"), const("0")), sigma_terms(const("0"), renamed).elements)

    def test_substituted_refuting_set(self):
        moved = substitute_constants(sigma_terms(const("sk3"), self.q.registry), {"sk3": const("0")})
        self.assertEqual(moved.elements, sigma_terms(const("0"), self.q.registry).elements)


class TestHCon(unittest.TestCase):
    def setUp(self):
        self.q = load_theory(FIXTURES / "q.thy")

    def test_omega1_term_set(self):
        registry = SkolemRegistry()
        lam = hcon_term_set(1, "omega1", registry)
        self.assertEqual(len(lam), 4)
        self.assertEqual(hcon_star_check(self.q, lam, registry), HConVerdict.SAT)
        self.assertTrue(hcon_check(self.q, lam, registry))

    def test_ceiling_makes_check_inapplicable(self):
        registry = SkolemRegistry()
        lam = hcon_term_set(1, "omega1", registry)
        self.assertEqual(hcon_star_check(self.q, lam, registry, bit_ceiling=16), HConVerdict.NOT_APPLICABLE)

    def test_delta0_term_set(self):
        registry = SkolemRegistry()
        lam = hcon_term_set(1, "delta0", registry)
        self.assertEqual(len(lam), 16)

    def test_unknown_flavor(self):
        with self.assertRaises(ValueError):
            hcon_term_set(1, "pi1", SkolemRegistry())


if __name__ == '__main__':
    unittest.main()
