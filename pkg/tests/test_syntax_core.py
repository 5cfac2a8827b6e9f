import unittest
from pathlib import Path

from core.errors import HerbrandError, ParseError, SignatureError
from core.syntax_core import (
    Atom,
    Exists,
    Forall,
    Or,
    Variable,
    const,
    free_vars,
    ground_numeral,
    induction_axiom,
    load_theory,
    numeral_value,
    parse_formula,
    parse_signature,
    parse_term,
    parse_theory,
    render_formula,
    render_signature,
    render_term,
    substitute,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


class TestSyntaxCore(unittest.TestCase):
    def setUp(self):
        self.sig = parse_signature("signature: c/0 g/1 ; P/2 R/1 S/1")
        self.arith = parse_signature("signature: 0/0 s/1 +/2 */2 ; <=/2")

    def test_parse_nested_quantifiers(self):
        f = parse_formula("forall x. exists y. P(x, y)", self.sig)
        expected = Forall("x", Exists("y", Atom("P", (Variable("x"), Variable("y")))))
        self.assertEqual(f, expected)

    def test_quantifier_scope_extends_right(self):
        f = parse_formula("forall x. R(x) | S(x)", self.sig)
        self.assertIsInstance(f, Forall)
        self.assertIsInstance(f.body, Or)

    def test_render_round_trip(self):
        for text in (
            "forall x. (R(x) | S(g(x)))",
            "forall x. forall y. (~P(x, y) | ~S(x))",
            "(forall x. R(x)) & exists y. ~S(y)",
            "R(c) -> R(g(c)) -> S(c)",
        ):
            f = parse_formula(text, self.sig)
            self.assertEqual(parse_formula(render_formula(f), self.sig), f)

    def test_arithmetic_precedence(self):
        t = parse_term("x * s(y) + x", self.arith, variables=["x", "y"])
        self.assertEqual(t.symbol, "+")
        self.assertEqual(t.args[0].symbol, "*")
        self.assertEqual(render_term(t), "x * s(y) + x")
        self.assertEqual(render_term(parse_term("0 * (0 + 0)", self.arith)), "0 * (0 + 0)")

    def test_negated_infix_atoms(self):
        f = parse_formula("0 != s(0) | 0 !<= 0", self.arith)
        self.assertEqual(render_formula(f), "0 != s(0) | 0 !<= 0")

    def test_unknown_predicate_rejected(self):
        with self.assertRaises(SignatureError):
            parse_formula("Q(c)", self.sig)

    def test_arity_mismatch_reports_position(self):
        with self.assertRaises(SignatureError) as ctx:
            parse_formula("P(c)", self.sig)
        self.assertIn("arity", str(ctx.exception))

    def test_syntax_error_is_parse_error(self):
        with self.assertRaises(ParseError):
            parse_formula("forall . R(c)", self.sig)

    def test_signature_needs_a_constant(self):
        with self.assertRaises(SignatureError):
            parse_signature("signature: g/1 ; R/1")

    def test_render_signature(self):
        self.assertEqual(render_signature(self.sig), "signature: c/0 g/1 ; P/2 R/1 S/1")

    def test_numerals(self):
        three = ground_numeral(3)
        self.assertEqual(render_term(three), "s(s(s(0)))")
        self.assertEqual(numeral_value(three), 3)
        self.assertIsNone(numeral_value(const("c")))

    def test_free_variables_in_order(self):
        f = parse_formula("P(y, x) & exists z. P(z, y)", self.sig, variables=["x", "y"])
        self.assertEqual(free_vars(f), ["y", "x"])

    def test_substitution_avoids_capture(self):
        f = parse_formula("exists y. P(x, y)", self.sig, variables=["x"])
        g = substitute(f, {"x": Variable("y")})
        self.assertEqual(free_vars(g), ["y"])
        self.assertNotEqual(g.var, "y")

    def test_induction_needs_one_free_variable(self):
        body = parse_formula("x <= y", self.arith, variables=["x", "y"])
        with self.assertRaises(HerbrandError):
            induction_axiom("x", body)

    def test_induction_axiom_shape(self):
        body = parse_formula("0 <= x", self.arith, variables=["x"])
        ind = induction_axiom("x", body)
        self.assertEqual(
            render_formula(ind),
            "(0 <= 0 & forall x. 0 <= x -> 0 <= s(x)) -> forall x. 0 <= x",
        )

    def test_theory_file(self):
        q = load_theory(FIXTURES / "q.thy")
        self.assertEqual(q.name, "q")
        self.assertEqual(len(q.axioms), 8)
        square = load_theory(FIXTURES / "q_square.thy")
        self.assertEqual(len(square.axioms), 9)

    def test_theory_rejects_open_axiom(self):
        with self.assertRaises(HerbrandError):
            parse_theory("signature: c/0 ; R/1\nR(x)\n")


if __name__ == '__main__':
    unittest.main()
