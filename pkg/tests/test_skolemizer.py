import random
import unittest
from pathlib import Path

from core.finite_models import satisfiable, skolem_expansion_satisfiable
from core.herbrand_engine import squaring_formula, squaring_symbols
from core.normalizer import rnnf
from core.skolemizer import (
    SkolemRegistry,
    canonical_key,
    skolem_constants,
    skolemize,
    skolemize_induction,
    skolemize_theory,
)
from core.syntax_core import Exists, Theory, Variable, load_theory, parse_formula, parse_signature, substitute

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


class TestSkolemizer(unittest.TestCase):
    def setUp(self):
        self.registry = SkolemRegistry()
        self.prs = load_theory(FIXTURES / "prs.thy")
        self.q = load_theory(FIXTURES / "q.thy")

    def test_three_axiom_theory(self):
        forms = [str(sf) for sf in skolemize_theory(self.prs, self.registry)]
        self.assertEqual(forms, ["P(x1, sk1(x1))", "R(x1) | S(g(x1))", "~P(x1, x2) | ~S(x1)"])
        self.assertEqual(self.registry.lookup("sk1").key, "exists b1. P(#1, b1)")

    def test_robinson_axioms(self):
        forms = [str(sf) for sf in skolemize_theory(self.q, self.registry)]
        self.assertEqual(forms, [
            "s(x1) != 0",
            "s(x1) != s(x2) | x1 = x2",
            "x1 = 0 | x1 = s(sk1(x1))",
            "(x1 !<= x2 | x1 + sk2(x1, x2) = x2) & (x1 + x4 != x2 | x1 <= x2)",
            "x1 + 0 = x1",
            "x1 + s(x2) = s(x1 + x2)",
            "x1 * 0 = 0",
            "x1 * s(x2) = x1 * x2 + x1",
        ])
        self.assertEqual([s.arity for s in self.registry], [1, 2])

    def test_drinker_formula(self):
        sig = parse_signature("signature: c/0 ; R/1")
        f = parse_formula("exists x. (R(x) -> forall y. R(y))", sig)
        sf = skolemize(f, self.registry)
        self.assertEqual(str(sf), "~R(sk1) | R(x2)")
        self.assertEqual(skolem_constants(sf), ["sk1"])

    def test_atomic_induction(self):
        sig = parse_signature("signature: 0/0 s/1 ; R/1")
        body = parse_formula("R(x)", sig, variables=["x"])
        sf = skolemize_induction(body, self.registry)
        self.assertEqual(str(sf), "~R(0) | R(sk1) & ~R(s(sk1)) | R(x2)")

    def test_squaring_induction_symbols(self):
        sf, c, q = squaring_symbols(self.registry)
        self.assertEqual(self.registry.lookup(c).arity, 0)
        self.assertEqual(self.registry.lookup(q).arity, 1)
        self.assertEqual(self.registry.lookup(q).key, canonical_key(rnnf(squaring_formula())))
        self.assertEqual(set(sf.variables), {"x1", "x4", "x5"})
        text = str(sf)
        self.assertIn(f"{q}({c}) <= {c} * {c}", text)
        self.assertIn(f"{q}(x5) = x5 * x5", text)

    def test_same_existential_shares_symbol(self):
        sig = parse_signature("signature: c/0 ; P/2")
        f = parse_formula("(forall x. exists y. P(x, y)) & forall z. exists w. P(z, w)", sig)
        skolemize(f, self.registry)
        self.assertEqual(len(self.registry), 1)

    def test_alpha_variants_map_to_one_key(self):
        sig = parse_signature("signature: c/0 g/1 ; P/2")
        rng = random.Random(11)
        base = parse_formula("exists y. P(x, g(y))", sig, variables=["x"])
        for _ in range(20):
            bound = rng.choice(["u", "v", "w", "y2"])
            free = rng.choice(["a", "b", "z"])
            variant = Exists(bound, substitute(base.body, {"y": Variable(bound), "x": Variable(free)}))
            self.assertEqual(canonical_key(variant), canonical_key(base))

    def test_deterministic_across_registries(self):
        first = [str(sf) for sf in skolemize_theory(self.q, SkolemRegistry())]
        second = [str(sf) for sf in skolemize_theory(self.q, SkolemRegistry())]
        self.assertEqual(first, second)

    def test_empty_theory(self):
        empty = Theory("empty", self.prs.signature)
        self.assertEqual(skolemize_theory(empty, self.registry), [])

    def test_registry_table_provenance(self):
        skolemize_theory(self.prs, self.registry)
        self.registry.set_alias("sk1", "𝔣")
        self.assertEqual(self.registry.display("sk1"), "𝔣/1 = f[exists b1. P(#1, b1)]")
        rows = self.registry.table()
        self.assertEqual(rows[0]["symbol"], "sk1")
        self.assertEqual(rows[0]["arity"], 1)

    def test_skolemization_preserves_satisfiability(self):
        t_sk = skolemize_theory(self.prs, self.registry)
        sig = self.registry.extend_signature(self.prs.signature)
        self.assertIsNotNone(satisfiable(self.prs, 2))
        self.assertIsNotNone(skolem_expansion_satisfiable(t_sk, sig, 2))

    def test_unsatisfiable_theory_has_no_expansion(self):
        sig = parse_signature("signature: c/0 ; R/1")
        theory = Theory("contradiction", sig, (
            parse_formula("exists x. R(x)", sig),
            parse_formula("forall x. ~R(x)", sig),
        ))
        t_sk = skolemize_theory(theory, self.registry)
        self.assertIsNone(satisfiable(theory, 2))
        self.assertIsNone(skolem_expansion_satisfiable(t_sk, self.registry.extend_signature(sig), 2))


if __name__ == '__main__':
    unittest.main()
