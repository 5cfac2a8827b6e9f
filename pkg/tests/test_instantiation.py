import unittest
from pathlib import Path

from core.errors import BudgetExceededError, HerbrandError, SubstitutionError
from core.instantiation import (
    TermSet,
    available_instances,
    instantiate,
    is_available,
    load_term_set,
    parse_term_set,
)
from core.skolemizer import SkolemRegistry, skolemize_theory
from core.syntax_core import Variable, app, const, load_theory, render_formula

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


class TestInstantiation(unittest.TestCase):
    def setUp(self):
        self.registry = SkolemRegistry()
        theory = load_theory(FIXTURES / "prs.thy")
        self.t_sk = skolemize_theory(theory, self.registry)
        self.sig = self.registry.extend_signature(theory.signature)
        self.lam = load_term_set(FIXTURES / "prs.lam", self.sig)
        self.c = const("c")

    def test_term_set_is_ordered_and_deduplicated(self):
        lam = TermSet.of([app("g", self.c), self.c, app("sk1", self.c), self.c])
        self.assertEqual([str(t) for t in lam], ["c", "g(c)", "sk1(c)"])
        self.assertEqual(lam.elements, self.lam.elements)
        self.assertEqual(lam.index(app("sk1", self.c)), 2)

    def test_term_set_rejects_open_terms(self):
        with self.assertRaises(HerbrandError):
            TermSet.of([Variable("x")])

    def test_subterm_closure_and_constant_transport(self):
        lam = parse_term_set("g(g(c))\n", self.sig)
        self.assertEqual(len(lam), 1)
        self.assertEqual(len(lam.closure_under_subterms()), 3)
        moved = self.lam.substitute_constants({"c": app("g", self.c)})
        self.assertIn(app("sk1", app("g", self.c)), moved)
        self.assertTrue(self.lam.without(self.c).issubset(self.lam))

    def test_available_instances_over_three_terms(self):
        instances = available_instances(self.t_sk, self.lam)
        self.assertEqual(len(instances), 11)
        self.assertEqual(render_formula(instances[0].ground), "P(c, sk1(c))")
        self.assertEqual(render_formula(instances[1].ground), "R(c) | S(g(c))")
        self.assertEqual([i.source_index for i in instances].count(2), 9)

    def test_availability_needs_every_argument(self):
        inside = instantiate(self.t_sk[2], {"x1": self.c, "x2": app("sk1", self.c)})
        outside = instantiate(self.t_sk[1], {"x1": app("g", self.c)})
        self.assertTrue(is_available(inside, self.lam))
        self.assertFalse(is_available(outside, self.lam))
        self.assertEqual(render_formula(outside.ground), "R(g(c)) | S(g(g(c)))")

    def test_substitution_must_be_total_and_ground(self):
        with self.assertRaises(SubstitutionError):
            instantiate(self.t_sk[2], {"x1": self.c})
        with self.assertRaises(SubstitutionError):
            instantiate(self.t_sk[0], {"x1": Variable("y")})

    def test_instance_budget(self):
        with self.assertRaises(BudgetExceededError) as ctx:
            available_instances(self.t_sk, self.lam, budget=2)
        self.assertEqual(ctx.exception.resource, "instances")

    def test_describe_names_the_source(self):
        inst = instantiate(self.t_sk[0], {"x1": self.c})
        self.assertIn("x1:=c", inst.describe())
        self.assertIn("prs:1", inst.describe())


if __name__ == '__main__':
    unittest.main()
