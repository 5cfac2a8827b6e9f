import random
import unittest
from pathlib import Path

from core.cli_harness import load_problem
from core.errors import AtomOutsideTableError, BruteForceRefusedError, BudgetExceededError
from core.evaluation_engine import (
    Evaluation,
    ForceVerdict,
    SearchMode,
    atoms_over,
    count_assignments,
    encode,
    eq_classes,
    find_evaluation,
    force_check,
    is_evaluation,
    is_T_evaluation,
    load_evaluation,
    search_evaluation,
    set_partitions,
    violated_instances,
)
from core.herbrand_engine import gamma_terms, sigma_terms, squaring_forcing_terms
from core.instantiation import TermSet, load_term_set
from core.skolemizer import SkolemRegistry, skolemize_theory
from core.syntax_core import (
    Not,
    app,
    const,
    eq,
    ground_numeral,
    parse_formula,
    parse_signature,
    parse_theory,
    render_formula,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def clauses_hold(bits, clauses):
    return all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses)


class TestEvaluationEngine(unittest.TestCase):
    def setUp(self):
        self.prs = load_problem(FIXTURES / "prs.thy")
        self.lam = load_term_set(FIXTURES / "prs.lam", self.prs.signature)
        self.table = atoms_over(self.lam, self.prs.signature)

    def test_atom_table_size(self):
        self.assertEqual(len(self.table), 24)
        self.assertEqual(self.table.atoms[0].predicate, "=")
        with self.assertRaises(AtomOutsideTableError):
            self.table.position(eq(const("c"), app("g", app("g", const("c")))))
        with self.assertRaises(BudgetExceededError):
            atoms_over(self.lam, self.prs.signature, budget=10)

    def test_q_is_a_t_evaluation(self):
        q = load_evaluation(FIXTURES / "prs_q.eval", self.table)
        self.assertTrue(is_evaluation(q))
        self.assertTrue(is_T_evaluation(q, self.prs.t_sk))
        self.assertEqual(len(eq_classes(q)), 3)

    def test_r_is_rejected_with_its_instance(self):
        r = load_evaluation(FIXTURES / "prs_r.eval", self.table)
        self.assertTrue(is_evaluation(r))
        self.assertFalse(is_T_evaluation(r, self.prs.t_sk))
        violated = [render_formula(i.ground) for i in violated_instances(r, self.prs.t_sk)]
        self.assertEqual(violated, ["~P(c, sk1(c)) | ~S(c)"])

    def test_missing_reflexivity_is_not_an_evaluation(self):
        q = load_evaluation(FIXTURES / "prs_q.eval", self.table)
        bits = list(q.bits)
        bits[self.table.equality(const("c"), const("c"))] = False
        self.assertFalse(is_evaluation(bits, self.table))

    def test_equality_must_respect_predicates(self):
        c, gc = const("c"), app("g", const("c"))
        r_c, r_gc = parse_formula("R(c)", self.prs.signature), parse_formula("R(g(c))", self.prs.signature)
        merged = Evaluation.from_true_atoms(self.table, [eq(c, gc), eq(gc, c)])
        self.assertTrue(is_evaluation(merged))
        self.assertEqual(len(eq_classes(merged)), 2)
        self.assertFalse(is_evaluation(Evaluation.from_true_atoms(self.table, [eq(c, gc), eq(gc, c), r_c])))
        self.assertTrue(is_evaluation(Evaluation.from_true_atoms(self.table, [eq(c, gc), eq(gc, c), r_c, r_gc])))

    def test_encoding_matches_definition(self):
        clause_set, _ = encode(self.prs.t_sk, self.lam, self.prs.signature)
        rng = random.Random(3)
        reflexive = {self.table.equality(t, t) for t in self.lam}
        agreed = 0
        for _ in range(200):
            bits = tuple(
                i in reflexive if atom.predicate == "=" else rng.random() < 0.5
                for i, atom in enumerate(self.table.atoms)
            )
            p = Evaluation(self.table, bits)
            expected = is_evaluation(p) and is_T_evaluation(p, self.prs.t_sk)
            self.assertEqual(clauses_hold(bits, clause_set.clauses), expected)
            agreed += expected
        self.assertGreater(agreed, 0)

    def test_refuting_set_has_no_evaluation(self):
        problem = load_problem(FIXTURES / "prs.thy", "forall x. R(x)", negate_goal=True)
        refuting = load_term_set(FIXTURES / "prs_refuting.lam", problem.signature)
        near_miss = load_term_set(FIXTURES / "prs_not_refuting.lam", problem.signature)
        for mode in (SearchMode.SAT, SearchMode.BRUTE):
            self.assertIsNone(find_evaluation(problem.t_sk, refuting, problem.signature, mode))
            found = find_evaluation(problem.t_sk, near_miss, problem.signature, mode)
            self.assertIsNotNone(found)
            self.assertTrue(is_evaluation(found))
            self.assertTrue(is_T_evaluation(found, problem.t_sk))

    def test_brute_force_refuses_large_tables(self):
        with self.assertRaises(BruteForceRefusedError):
            find_evaluation(self.prs.t_sk, self.lam, self.prs.signature, "brute", brute_cap=10)

    def test_assignment_count(self):
        sig = parse_signature("signature: 0/0 s/1 +/2 */2 ; <=/2")
        for n in (1, 2, 3):
            lam = TermSet.of(ground_numeral(j) for j in range(n))
            self.assertEqual(count_assignments(atoms_over(lam, sig)), 2 ** (2 * n * n))

    def test_set_partitions_are_bell_numbers(self):
        self.assertEqual([sum(1 for _ in set_partitions(list(range(k)))) for k in range(6)], [1, 1, 2, 5, 15, 52])

    def test_fixture_sets_match_builders(self):
        q = load_problem(FIXTURES / "q.thy")
        zero = const("0")
        self.assertEqual(load_term_set(FIXTURES / "sigma_zero.lam", q.signature).elements, sigma_terms(zero, q.registry).elements)
        self.assertEqual(
            load_term_set(FIXTURES / "gamma_zero.lam", q.signature).elements, gamma_terms(zero, zero, q.registry).elements
        )
        square = load_problem(FIXTURES / "q_square.thy")
        two = ground_numeral(2)
        self.assertEqual(
            load_term_set(FIXTURES / "squaring.lam", square.signature).elements,
            squaring_forcing_terms(two, square.registry).elements,
        )

    def test_sigma_forcing(self):
        q = load_problem(FIXTURES / "q.thy")
        lam = sigma_terms(const("0"), q.registry)
        goal = parse_formula("0 !<= 0 | 0 = 0", q.signature)
        self.assertEqual(force_check(q.t_sk, lam, q.signature, goal).verdict, ForceVerdict.FORCED)

    def test_gamma_forcing(self):
        q = load_problem(FIXTURES / "q.thy")
        zero = const("0")
        goal = parse_formula("0 !<= s(0) | 0 = s(0) | 0 <= 0", q.signature)
        self.assertTrue(force_check(q.t_sk, gamma_terms(zero, zero, q.registry), q.signature, goal).forced)

    def test_unforced_goal_has_counterexample(self):
        q = load_problem(FIXTURES / "q.thy")
        loose = parse_formula("0 <= 0", q.signature)
        result = force_check(q.t_sk, TermSet.of([const("0")]), q.signature, loose)
        self.assertEqual(result.verdict, ForceVerdict.COUNTEREXAMPLE)
        self.assertFalse(result.counterexample.value(loose))

    def test_squaring_forcing(self):
        square = load_problem(FIXTURES / "q_square.thy")
        two = ground_numeral(2)
        lam = squaring_forcing_terms(two, square.registry)
        goal = parse_formula("sk4(s(s(0))) = s(s(0)) * s(s(0))", square.signature)
        self.assertTrue(force_check(square.t_sk, lam, square.signature, goal).forced)

    def test_goal_must_be_over_the_table(self):
        q = load_problem(FIXTURES / "q.thy")
        goal = parse_formula("s(s(0)) = 0", q.signature)
        with self.assertRaises(AtomOutsideTableError):
            force_check(q.t_sk, sigma_terms(const("0"), q.registry), q.signature, goal)


RANDOM_SIGNATURE = "signature: c/0 f/1 ; P/1 Q/1"
PREFIXES = ("forall x. exists y. ", "exists x. forall y. ", "forall x. forall y. ", "exists y. forall x. ")
RANDOM_ATOMS = ("P(x)", "P(y)", "Q(x)", "Q(y)", "P(f(x))", "Q(f(y))", "x = y", "f(x) = y", "y = c", "P(c)")


def random_axiom(rng):
    while True:
        literals = [
            f"~({atom})" if rng.random() < 0.5 else atom
            for atom in (rng.choice(RANDOM_ATOMS) for _ in range(rng.randint(1, 3)))
        ]
        body = rng.choice((" | ", " & ")).join(literals)
        if "x" in body and "y" in body:
            return rng.choice(PREFIXES) + f"({body})"


def random_problem(rng):
    """A small random theory and a three-term Λ reaching its first Skolem symbol."""
    axioms = [random_axiom(rng) for _ in range(rng.randint(1, 3))]
    theory = parse_theory("\n".join([RANDOM_SIGNATURE] + axioms), name="random")
    registry = SkolemRegistry()
    t_sk = skolemize_theory(theory, registry)
    sig = registry.extend_signature(theory.signature)
    c = const("c")
    symbols = registry.snapshot()
    if symbols:
        third = app(symbols[0].name, *([c] * symbols[0].arity))
    else:
        third = app("f", app("f", c))
    return t_sk, TermSet.of([c, app("f", c), third], label="random"), sig


class TestRandomTheories(unittest.TestCase):
    def setUp(self):
        rng = random.Random(20240611)
        self.problems = [random_problem(rng) for _ in range(200)]

    def test_table_fits_the_brute_force_cap(self):
        for t_sk, lam, sig in self.problems:
            self.assertEqual(len(atoms_over(lam, sig)), 15)

    def test_sat_and_brute_force_agree(self):
        outcomes = {True: 0, False: 0}
        for t_sk, lam, sig in self.problems:
            by_sat = find_evaluation(t_sk, lam, sig, SearchMode.SAT)
            by_brute = find_evaluation(t_sk, lam, sig, SearchMode.BRUTE)
            self.assertEqual(by_sat is None, by_brute is None, [str(sf) for sf in t_sk])
            for found in (by_sat, by_brute):
                if found is not None:
                    self.assertTrue(is_evaluation(found))
                    self.assertTrue(is_T_evaluation(found, t_sk))
            outcomes[by_sat is not None] += 1
        self.assertGreater(outcomes[True], 0)
        self.assertGreater(outcomes[False], 0)

    def test_symmetry_and_transitivity_are_redundant(self):
        for t_sk, lam, sig in self.problems:
            full = search_evaluation(t_sk, lam, sig)
            lean = search_evaluation(t_sk, lam, sig, symmetry_transitivity=False)
            self.assertEqual(full.found, lean.found, [str(sf) for sf in t_sk])
            self.assertLess(len(lean.clause_set), len(full.clause_set))
            if lean.found:
                self.assertTrue(is_evaluation(lean.evaluation))
                self.assertTrue(is_T_evaluation(lean.evaluation, t_sk))

    def test_symmetry_and_transitivity_on_fixtures(self):
        prs = load_problem(FIXTURES / "prs.thy")
        negated = load_problem(FIXTURES / "prs.thy", "forall x. R(x)", negate_goal=True)
        q = load_problem(FIXTURES / "q.thy")
        sigma_goal = parse_formula("0 !<= 0 | 0 = 0", q.signature)
        cases = [
            (prs.t_sk, load_term_set(FIXTURES / "prs.lam", prs.signature), prs.signature, (), True),
            (negated.t_sk, load_term_set(FIXTURES / "prs_not_refuting.lam", negated.signature),
             negated.signature, (), True),
            (negated.t_sk, load_term_set(FIXTURES / "prs_refuting.lam", negated.signature),
             negated.signature, (), False),
            (q.t_sk, load_term_set(FIXTURES / "sigma_zero.lam", q.signature), q.signature,
             [(Not(sigma_goal), "negated goal")], False),
        ]
        for t_sk, lam, sig, extra, expected in cases:
            full = search_evaluation(t_sk, lam, sig, extra)
            lean = search_evaluation(t_sk, lam, sig, extra, symmetry_transitivity=False)
            self.assertEqual(full.found, expected, lam.label)
            self.assertEqual(lean.found, expected, lam.label)

    def test_brute_force_agrees_on_prs(self):
        prs = load_problem(FIXTURES / "prs.thy")
        lam = load_term_set(FIXTURES / "prs.lam", prs.signature)
        found = find_evaluation(prs.t_sk, lam, prs.signature, SearchMode.BRUTE)
        self.assertIsNotNone(found)
        self.assertTrue(is_T_evaluation(found, prs.t_sk))
        self.assertEqual(violated_instances(found, prs.t_sk), [])


if __name__ == '__main__':
    unittest.main()
