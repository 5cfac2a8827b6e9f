# -*- coding: utf-8 -*-
"""Herbrand provability, universe growth, quotient models and HCon checks.

T proves φ exactly when some finite Λ carries no (T + ¬φ)-evaluation. prove()
looks for such a Λ among user seeds and the closure levels Λ^⟨k⟩ of the Skolem
constants of ¬φ, shrinks it greedily and returns a certificate whose clause set
and resolution refutation can be replayed independently.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from core.constants import (
    CERTIFICATE_HEADER,
    DEFAULT_BIT_CEILING,
    DEFAULT_BRUTE_CAP,
    DEFAULT_BUDGET_ATOMS,
    DEFAULT_BUDGET_INSTANCES,
    DEFAULT_BUDGET_TERMS,
    DEFAULT_MAX_LEVEL,
    DEFAULT_WORKERS,
    EQUALITY,
    LESS_EQUAL,
    OMEGA1_GRAPH,
    PLUS,
    SUCCESSOR,
    TIMES,
    ZERO,
)
from core.errors import (
    BudgetExceededError,
    CertificateError,
    CodingOverflowError,
    HerbrandError,
    SignatureError,
    UnboundedQuantifierError,
)
from core.evaluation_engine import (
    Clause,
    EqClasses,
    Evaluation,
    SearchMode,
    brute_force_evaluation,
    encode,
    eq_classes,
    search_evaluation,
)
from core.goedel_coding import CodingScheme, omega, omega_exists
from core.instantiation import TermSet, parse_term_set
from core.sat_solver import ResolutionStep, check_refutation
from core.skolemizer import (
    RegistrySnapshot,
    SkolemRegistry,
    SkolemizedFormula,
    skolem_constants,
    skolemize,
    skolemize_induction,
    skolemize_theory,
)
from core.normalizer import rnnf
from core.syntax_core import (
    And,
    Apply,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Signature,
    Term,
    Theory,
    Variable,
    const,
    disjunction,
    eq,
    free_vars,
    ground_numeral,
    le,
    parse_formula,
    parse_signature,
    render_formula,
    render_signature,
    render_term,
    term_variables,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Universe levels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniverseLevel:
    base: TermSet
    level: int
    terms: TermSet
    signature: Signature
    snapshot: RegistrySnapshot


def initial_universe(base: TermSet, sig: Signature, registry: SkolemRegistry) -> UniverseLevel:
    return UniverseLevel(base, 0, base, sig, registry.snapshot())


def grow_universe(
    u: UniverseLevel,
    coder: Optional[CodingScheme] = None,
    budget_terms: int = DEFAULT_BUDGET_TERMS,
) -> UniverseLevel:
    """Λ^⟨k+1⟩: close under signature functions and the Skolem symbols admitted at level k."""
    admitted = [
        (s.name, s.arity) for s in u.snapshot
        if coder is None or coder.code_formula(s.source).value <= u.level
    ]
    functions = list(u.signature.functions) + admitted
    elements = u.terms.elements
    requested = len(elements) + sum(len(elements) ** arity for _, arity in functions)
    if requested > budget_terms:
        raise BudgetExceededError("terms", budget_terms, requested)
    new_terms = [
        Apply(name, args)
        for name, arity in functions
        for args in itertools.product(elements, repeat=arity)
    ]
    terms = u.terms.union(new_terms)
    logger.debug("universe level %d: %d terms", u.level + 1, len(terms))
    return UniverseLevel(u.base, u.level + 1, terms, u.signature, u.snapshot)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

class WitnessKind(Enum):
    RESOLUTION = "resolution"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class ProofCertificate:
    theory: Theory
    goal: Formula
    terms: TermSet
    clauses: Tuple[Clause, ...]
    steps: Tuple[ResolutionStep, ...] = ()
    witness: WitnessKind = WitnessKind.RESOLUTION
    atoms: Tuple[Atom, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str
    failing_clause: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def _skolemize_problem(theory: Theory, goal: Formula, registry: SkolemRegistry):
    t_sk = skolemize_theory(theory, registry)
    negated = skolemize(Not(goal), registry, label="negated goal")
    return t_sk, negated, registry.extend_signature(theory.signature)


def check_certificate(cert: ProofCertificate, brute_cap: int = DEFAULT_BRUTE_CAP) -> CertificateCheck:
    """Re-derive the clause set from (theory, goal, Λ) and replay the witness."""
    registry = SkolemRegistry()
    t_sk, negated, sig = _skolemize_problem(cert.theory, cert.goal, registry)
    try:
        clause_set, _ = encode(list(t_sk) + [negated], cert.terms, sig)
    except HerbrandError as exc:
        return CertificateCheck(False, f"cannot re-derive clauses: {exc}")
    for index, (expected, claimed) in enumerate(
        itertools.zip_longest(clause_set.clauses, cert.clauses), start=1
    ):
        if expected != claimed:
            return CertificateCheck(False, f"clause {index} differs from the re-derived clause set", index)
    if cert.witness is WitnessKind.EXHAUSTIVE:
        found = brute_force_evaluation(list(t_sk) + [negated], cert.terms, sig, cap=brute_cap)
        if found is not None:
            return CertificateCheck(False, "exhaustive check found an evaluation")
        return CertificateCheck(True, "exhaustive check confirmed")
    ok, reason = check_refutation(clause_set.numbered(), cert.steps)
    return CertificateCheck(ok, reason)


def dump_certificate(cert: ProofCertificate) -> str:
    lines = [CERTIFICATE_HEADER, f"n {cert.theory.name}", f"s {render_signature(cert.theory.signature)}"]
    lines.extend(f"a {render_formula(a)}" for a in cert.theory.axioms)
    lines.append(f"g {render_formula(cert.goal)}")
    lines.extend(f"t {render_term(t)}" for t in cert.terms)
    lines.append(f"w {cert.witness.value}")
    for index, atom in enumerate(cert.atoms, start=1):
        lines.append(f"c {index} {render_formula(atom)}")
    num_vars = len(cert.atoms) if cert.atoms else max((abs(l) for c in cert.clauses for l in c), default=0)
    lines.append(f"p cnf {num_vars} {len(cert.clauses)}")
    lines.extend(" ".join(str(l) for l in clause + (0,)) for clause in cert.clauses)
    for step in cert.steps:
        literals = " ".join(str(l) for l in step.literals + (0,))
        antecedents = " ".join(str(a) for a in step.antecedents + (0,))
        lines.append(f"r {step.clause_id} {literals} {antecedents}")
    return "\n".join(lines) + "\n"


def _split_zero(numbers: List[int]) -> Tuple[Tuple[int, ...], List[int]]:
    if 0 not in numbers:
        raise CertificateError("missing 0 terminator")
    cut = numbers.index(0)
    return tuple(numbers[:cut]), numbers[cut + 1:]


def load_certificate(text: str) -> ProofCertificate:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CERTIFICATE_HEADER:
        raise CertificateError("not a herbrand certificate")
    name, sig, goal_text = "theory", None, None
    axiom_texts: List[str] = []
    term_texts: List[str] = []
    witness = WitnessKind.RESOLUTION
    clauses: List[Clause] = []
    steps: List[ResolutionStep] = []
    for number, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("c "):
            continue
        tag, _, rest = line.partition(" ")
        try:
            if tag == "n":
                name = rest
            elif tag == "s":
                sig = parse_signature(rest)
            elif tag == "a":
                axiom_texts.append(rest)
            elif tag == "g":
                goal_text = rest
            elif tag == "t":
                term_texts.append(rest)
            elif tag == "w":
                witness = WitnessKind(rest)
            elif tag == "p":
                continue
            elif tag == "r":
                numbers = [int(x) for x in rest.split()]
                literals, tail = _split_zero(numbers[1:])
                antecedents, _ = _split_zero(tail)
                steps.append(ResolutionStep(numbers[0], literals, antecedents))
            else:
                clause, _ = _split_zero([int(x) for x in line.split()])
                clauses.append(clause)
        except (ValueError, HerbrandError) as exc:
            raise CertificateError(f"line {number}: {exc}") from None
    if sig is None or goal_text is None:
        raise CertificateError("certificate lacks a signature or a goal")
    theory = Theory(name, sig, tuple(parse_formula(a, sig) for a in axiom_texts))
    goal = parse_formula(goal_text, sig)
    registry = SkolemRegistry()
    _, _, extended = _skolemize_problem(theory, goal, registry)
    terms = parse_term_set("\n".join(term_texts), extended)
    return ProofCertificate(theory, goal, terms, tuple(clauses), tuple(steps), witness)


# ---------------------------------------------------------------------------
# Proof search
# ---------------------------------------------------------------------------

class ProofVerdict(Enum):
    PROVED = "PROVED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ProofResult:
    verdict: ProofVerdict
    certificate: Optional[ProofCertificate] = None
    levels_tried: int = 0
    candidate: str = ""
    reason: str = ""
    registry: Optional[SkolemRegistry] = field(default=None, compare=False)

    @property
    def proved(self) -> bool:
        return self.verdict is ProofVerdict.PROVED


class _Problem:
    """One (T + ¬φ) instance with its budgets; every candidate check is pure."""

    def __init__(self, t_sk, sig, mode: SearchMode, budget_atoms: int, budget_instances: int, brute_cap: int):
        self.t_sk = t_sk
        self.sig = sig
        self.mode = mode
        self.budget_atoms = budget_atoms
        self.budget_instances = budget_instances
        self.brute_cap = brute_cap

    def refutes(self, lam: TermSet) -> bool:
        if self.mode is SearchMode.BRUTE:
            return brute_force_evaluation(self.t_sk, lam, self.sig, cap=self.brute_cap,
                                          budget_instances=self.budget_instances) is None
        outcome = search_evaluation(self.t_sk, lam, self.sig, budget_atoms=self.budget_atoms,
                                    budget_instances=self.budget_instances)
        return not outcome.found

    def refutes_within_budget(self, lam: TermSet) -> Optional[bool]:
        try:
            return self.refutes(lam)
        except BudgetExceededError as exc:
            logger.info("candidate of %d terms skipped: %s", len(lam), exc)
            return None

    def minimise(self, lam: TermSet) -> TermSet:
        """Drop terms, largest first, while the set stays refuting."""
        current = lam
        for t in reversed(lam.elements):
            smaller = current.without(t)
            if self.refutes(smaller):
                current = smaller
        return current


def prove(
    theory: Theory,
    goal: Formula,
    max_level: int = DEFAULT_MAX_LEVEL,
    seeds: Sequence[Union[TermSet, str]] = (),
    mode: Union[SearchMode, str] = SearchMode.SAT,
    workers: int = DEFAULT_WORKERS,
    minimise: bool = True,
    coder: Optional[CodingScheme] = None,
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_terms: int = DEFAULT_BUDGET_TERMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
    brute_cap: int = DEFAULT_BRUTE_CAP,
) -> ProofResult:
    """Herbrand proof search; UNKNOWN when the budget runs out first."""
    if free_vars(goal):
        raise HerbrandError("goal must be a sentence")
    mode = SearchMode(mode)
    registry = SkolemRegistry()
    t_sk, negated, sig = _skolemize_problem(theory, goal, registry)
    problem = _Problem(list(t_sk) + [negated], sig, mode, budget_atoms, budget_instances, brute_cap)

    candidates: List[Tuple[str, TermSet]] = []
    for index, seed in enumerate(seeds, start=1):
        lam = parse_term_set(seed, sig) if isinstance(seed, str) else seed
        candidates.append((f"seed {index}", lam))
    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(lambda c: problem.refutes_within_budget(c[1]), candidates))
    else:
        verdicts = [problem.refutes_within_budget(lam) for _, lam in candidates]

    found: Optional[Tuple[str, TermSet]] = None
    for candidate, verdict in zip(candidates, verdicts):
        if verdict:
            found = candidate
            break

    levels_tried = 0
    reason = ""
    if found is None:
        base_names = skolem_constants(negated) or theory.signature.constants
        universe = initial_universe(TermSet.of(const(n) for n in base_names), theory.signature, registry)
        for level in range(max_level + 1):
            if level > 0:
                try:
                    universe = grow_universe(universe, coder, budget_terms)
                except BudgetExceededError as exc:
                    reason = str(exc)
                    break
            levels_tried = level + 1
            verdict = problem.refutes_within_budget(universe.terms)
            if verdict is None:
                reason = f"budget exhausted at level {level}"
                break
            if verdict:
                found = (f"level {level}", universe.terms)
                break
        else:
            reason = f"no refutation up to level {max_level}"

    if found is None:
        logger.info("prove: UNKNOWN (%s)", reason)
        return ProofResult(ProofVerdict.UNKNOWN, None, levels_tried, "", reason, registry)

    label, lam = found
    if minimise:
        lam = problem.minimise(lam)
    certificate = _certify(theory, goal, lam, problem)
    logger.info("prove: refuting set of %d terms from %s", len(lam), label)
    return ProofResult(ProofVerdict.PROVED, certificate, levels_tried, label, "", registry)


def _certify(theory: Theory, goal: Formula, lam: TermSet, problem: _Problem) -> ProofCertificate:
    outcome = search_evaluation(problem.t_sk, lam, problem.sig, budget_atoms=problem.budget_atoms,
                                budget_instances=problem.budget_instances)
    if outcome.found:
        raise HerbrandError("refuting set turned out satisfiable")
    witness = WitnessKind.EXHAUSTIVE if problem.mode is SearchMode.BRUTE else WitnessKind.RESOLUTION
    steps = outcome.result.steps if witness is WitnessKind.RESOLUTION else ()
    return ProofCertificate(
        theory, goal, lam, outcome.clause_set.clauses, steps, witness, outcome.clause_set.table.atoms
    )


# ---------------------------------------------------------------------------
# Quotient models
# ---------------------------------------------------------------------------

class Truth(Enum):
    TRUE = "true"
    FALSE = "false"
    UNDEFINED = "undefined"

    @classmethod
    def of(cls, value: bool) -> "Truth":
        return cls.TRUE if value else cls.FALSE

    def negate(self) -> "Truth":
        if self is Truth.UNDEFINED:
            return self
        return Truth.FALSE if self is Truth.TRUE else Truth.TRUE


def _kleene_and(values: Iterable[Truth]) -> Truth:
    result = Truth.TRUE
    for v in values:
        if v is Truth.FALSE:
            return Truth.FALSE
        if v is Truth.UNDEFINED:
            result = Truth.UNDEFINED
    return result


def _kleene_or(values: Iterable[Truth]) -> Truth:
    return _kleene_and(v.negate() for v in values).negate()


@dataclass(frozen=True)
class HerbrandModel:
    """𝔐(Λ, p): classes of Λ under p, with partial function and relation tables."""

    terms: TermSet
    classes: EqClasses
    functions: Mapping[Tuple[str, Tuple[Term, ...]], Term]
    relations: Mapping[str, FrozenSet[Tuple[Term, ...]]]

    @property
    def elements(self) -> Tuple[Term, ...]:
        return tuple(cls[0] for cls in self.classes.classes)

    def value_of(self, t: Term, assignment: Optional[Mapping[str, Term]] = None) -> Optional[Term]:
        """Class representative denoted by t, or None where the function table is undefined."""
        if isinstance(t, Variable):
            if assignment is None or t.name not in assignment:
                raise HerbrandError(f"variable {t.name} is unassigned")
            return self.classes.rep(assignment[t.name])
        if t in self.terms:
            return self.classes.rep(t)
        args = []
        for a in t.args:
            value = self.value_of(a, assignment)
            if value is None:
                return None
            args.append(value)
        return self.functions.get((t.symbol, tuple(args)))

    def holds(self, atom: Atom, assignment: Optional[Mapping[str, Term]] = None) -> Truth:
        values = [self.value_of(a, assignment) for a in atom.args]
        if any(v is None for v in values):
            return Truth.UNDEFINED
        if atom.predicate == EQUALITY:
            return Truth.of(values[0] == values[1])
        return Truth.of(tuple(values) in self.relations.get(atom.predicate, frozenset()))


def build_quotient_model(lam: TermSet, p: Evaluation) -> HerbrandModel:
    classes = eq_classes(p)
    functions: Dict[Tuple[str, Tuple[Term, ...]], Term] = {}
    for t in lam.elements:
        if isinstance(t, Apply) and all(a in lam for a in t.args):
            functions[(t.symbol, tuple(classes.rep(a) for a in t.args))] = classes.rep(t)
    relations: Dict[str, set] = {}
    for atom in p.true_atoms():
        if atom.predicate != EQUALITY:
            relations.setdefault(atom.predicate, set()).add(tuple(classes.rep(a) for a in atom.args))
    return HerbrandModel(lam, classes, functions, {k: frozenset(v) for k, v in relations.items()})


def _bounded_parts(f: Formula) -> Optional[Tuple[Term, Formula]]:
    """(bound term, body) for ∀x(x≤t → φ), ∀x(¬x≤t ∨ φ) and ∃x(x≤t ∧ φ)."""
    guard, body = None, None
    if isinstance(f, Forall):
        if isinstance(f.body, Implies):
            guard, body = f.body.left, f.body.right
        elif isinstance(f.body, Or) and isinstance(f.body.left, Not):
            guard, body = f.body.left.body, f.body.right
    elif isinstance(f, Exists) and isinstance(f.body, And):
        guard, body = f.body.left, f.body.right
    if (
        isinstance(guard, Atom)
        and guard.predicate == LESS_EQUAL
        and guard.args[0] == Variable(f.var)
        and f.var not in set(term_variables(guard.args[1]))
    ):
        return guard.args[1], body
    return None


def eval_in_model(m: HerbrandModel, f: Formula, assignment: Optional[Mapping[str, Term]] = None) -> Truth:
    """Three-valued satisfaction for bounded formulas over the finite partial structure."""
    assignment = dict(assignment or {})
    if isinstance(f, Atom):
        return m.holds(f, assignment)
    if isinstance(f, Not):
        return eval_in_model(m, f.body, assignment).negate()
    if isinstance(f, And):
        return _kleene_and([eval_in_model(m, f.left, assignment), eval_in_model(m, f.right, assignment)])
    if isinstance(f, Or):
        return _kleene_or([eval_in_model(m, f.left, assignment), eval_in_model(m, f.right, assignment)])
    if isinstance(f, Implies):
        return _kleene_or([eval_in_model(m, f.left, assignment).negate(), eval_in_model(m, f.right, assignment)])
    parts = _bounded_parts(f)
    if parts is None:
        raise UnboundedQuantifierError(f"quantifier is not bounded: {render_formula(f)}")
    bound_term, body = parts
    bound = m.value_of(bound_term, assignment)
    if bound is None:
        return Truth.UNDEFINED
    below = [e for e in m.elements if (e, bound) in m.relations.get(LESS_EQUAL, frozenset())]
    values = (eval_in_model(m, body, {**assignment, f.var: e}) for e in below)
    return _kleene_and(values) if isinstance(f, Forall) else _kleene_or(values)


# ---------------------------------------------------------------------------
# Term families
# ---------------------------------------------------------------------------

def _s(t: Term) -> Term:
    return Apply(SUCCESSOR, (t,))


def _add(a: Term, b: Term) -> Term:
    return Apply(PLUS, (a, b))


def _mul(a: Term, b: Term) -> Term:
    return Apply(TIMES, (a, b))


def _fn(name: str, *args: Term) -> Term:
    return Apply(name, tuple(args))


_ZERO = const(ZERO)


def numeral_terms(n: int, sig: Optional[Signature] = None) -> List[Term]:
    return [ground_numeral(j, sig) for j in range(n + 1)]


def omega1_signature(sig: Signature) -> Signature:
    return sig.extend(predicates=[(OMEGA1_GRAPH, 2)])


def omega1_witness_symbol(registry: SkolemRegistry) -> str:
    """𝔴, the Skolem function of ∃y Omega1(x, y)."""
    source = Exists("y", Atom(OMEGA1_GRAPH, (Variable("x"), Variable("y"))))
    return registry.register(source)[0].name


def squaring_formula() -> Exists:
    """∃y(y ≤ x·x ∧ y = x·x)."""
    x, y = Variable("x"), Variable("y")
    return Exists("y", And(le(y, _mul(x, x)), eq(y, _mul(x, x))))


def squaring_symbols(registry: SkolemRegistry) -> Tuple[SkolemizedFormula, str, str]:
    """Skolemized ind_ψ for ψ = ∃y(y ≤ x·x ∧ y = x·x), with the names of 𝔠 and 𝔮."""
    sf = skolemize_induction(squaring_formula(), registry, "x")
    q = registry.symbol_for(rnnf(squaring_formula()))
    c = next(s.name for s in sf.symbols if s.is_constant)
    return sf, c, q.name


def w_terms(n: int, registry: SkolemRegistry) -> List[Term]:
    """w_0 = 4̲, w_{j+1} = 𝔴(w_j)."""
    w = omega1_witness_symbol(registry)
    out = [ground_numeral(4)]
    for _ in range(n):
        out.append(_fn(w, out[-1]))
    return out


def z_terms(n: int, registry: SkolemRegistry) -> List[Term]:
    """z_0 = 2̲, z_{j+1} = 𝔮(z_j)."""
    _, _, q = squaring_symbols(registry)
    out = [ground_numeral(2)]
    for _ in range(n):
        out.append(_fn(q, out[-1]))
    return out


def upsilon_terms(c: str, q: str) -> TermSet:
    c_term = const(c)
    sc = _s(c_term)
    return TermSet.of([
        _ZERO, _add(_ZERO, _ZERO), _mul(_ZERO, _ZERO), c_term, _mul(c_term, c_term),
        _add(_mul(c_term, c_term), _ZERO), sc, _fn(q, c_term), _mul(sc, sc), _add(_mul(sc, sc), _ZERO),
    ], label="upsilon")


def hcon_term_set(
    alpha: int,
    flavor: str,
    registry: SkolemRegistry,
    ceiling: int = DEFAULT_BIT_CEILING,
    budget_terms: int = DEFAULT_BUDGET_TERMS,
) -> TermSet:
    """Numerals up to ω₁(α) with w_0..w_α (omega1), or Υ, numerals and z_0..z_{4α⁴} (delta0)."""
    top = omega(1, alpha, ceiling)
    if not top.is_exact or top.exact + 1 > budget_terms:
        raise BudgetExceededError("terms", budget_terms, top.exact + 1 if top.is_exact else None)
    numerals = numeral_terms(top.exact)
    if flavor == "omega1":
        return TermSet.of(numerals + w_terms(alpha, registry), label=f"lambda-omega1-{alpha}")
    if flavor == "delta0":
        _, c, q = squaring_symbols(registry)
        count = 4 * alpha ** 4
        if count + len(numerals) + 10 > budget_terms:
            raise BudgetExceededError("terms", budget_terms, count + len(numerals) + 10)
        extra = numerals + z_terms(count, registry)
        return upsilon_terms(c, q).union(extra, label=f"lambda-delta0-{alpha}")
    raise HerbrandError(f"unknown flavor {flavor!r}")


# -- Robinson Q term sets --------------------------------------------------

def predecessor_formula() -> Exists:
    """∃y x = s(y), the existential of the predecessor axiom."""
    return Exists("y", eq(Variable("x"), _s(Variable("y"))))


def difference_formula() -> Exists:
    """∃z x + z = y, the existential of the definition of ≤."""
    return Exists("z", eq(_add(Variable("x"), Variable("z")), Variable("y")))


def q_witness_symbols(registry: SkolemRegistry) -> Tuple[str, str]:
    """Names of 𝔭 and 𝔥 in a registry that has Skolemized Q."""
    p = registry.symbol_for(rnnf(predecessor_formula()))
    h = registry.symbol_for(rnnf(difference_formula()))
    if p is None or h is None:
        raise SignatureError("registry has no predecessor or difference witness; Skolemize Q first")
    return p.name, h.name


def sigma_terms(t: Term, registry: SkolemRegistry, completed: bool = True, minimal: bool = False) -> TermSet:
    """Terms that force t ≰ 0 ∨ t = 0 in every Q-evaluation (completed form)."""
    p, h = q_witness_symbols(registry)
    ht = _fn(h, t, _ZERO)
    pht = _fn(p, ht)
    spht = _s(pht)
    terms = [_ZERO, t, _add(t, _ZERO), ht, pht, spht, _add(t, spht), _s(_add(t, spht))]
    if completed or minimal:
        terms += [_add(t, ht), _add(t, pht), _s(_add(t, pht))]
    if minimal:
        terms.remove(_s(_add(t, spht)))
    return TermSet.of(terms, label="sigma")


def gamma_terms(u: Term, v: Term, registry: SkolemRegistry, completed: bool = True) -> TermSet:
    """Terms that force u ≰ s v ∨ u = s v ∨ u ≤ v in every Q-evaluation (completed form)."""
    p, h = q_witness_symbols(registry)
    sv = _s(v)
    h_usv = _fn(h, u, sv)
    ph = _fn(p, h_usv)
    sph = _s(ph)
    terms = [_ZERO, u, v, sv, h_usv, ph, sph, _add(u, ph), _add(u, sph), _s(_add(u, ph))]
    if completed:
        terms += [_add(u, h_usv), _add(u, _ZERO), _add(u, _fn(h, u, v))]
    return TermSet.of(terms, label="gamma")


def squaring_forcing_terms(t: Term, registry: SkolemRegistry, completed: bool = True) -> TermSet:
    """Υ ∪ {t, t², 𝔮(t)}, plus the A4 witnesses needed to make the forcing go through."""
    _, c, q = squaring_symbols(registry)
    _, h = q_witness_symbols(registry)
    lam = upsilon_terms(c, q).union([t, _mul(t, t), _fn(q, t)])
    if completed:
        sc2 = _mul(_s(const(c)), _s(const(c)))
        lam = lam.union([_add(_ZERO, _fn(h, _ZERO, _mul(_ZERO, _ZERO))), _add(sc2, _fn(h, sc2, sc2))])
    return TermSet(lam.elements, "squaring-forcing")


def order_forcing_terms(t: Term, i: int, registry: SkolemRegistry) -> TermSet:
    """Minimal Σ_t together with Γ_{t,j̲} for every j < i."""
    lam = sigma_terms(t, registry, minimal=True)
    for j in range(i):
        lam = lam.union(gamma_terms(t, ground_numeral(j), registry).elements)
    return TermSet(lam.elements, f"order-{i}")


def order_forcing_goal(t: Term, i: int) -> Formula:
    """⋁_{j≤i} t = j̲ ∨ t ≰ i̲."""
    parts: List[Formula] = [eq(t, ground_numeral(j)) for j in range(i + 1)]
    parts.append(Not(le(t, ground_numeral(i))))
    return disjunction(parts)


def _sum_terms(i: int, j: int) -> List[Term]:
    a = ground_numeral(i)
    out = [_add(a, ground_numeral(k)) for k in range(j + 1)]
    out += [_s(_add(a, ground_numeral(k))) for k in range(j)]
    return out


def sum_forcing_terms(i: int, j: int) -> TermSet:
    """Numerals and the A5/A6 instance terms that force i̲ + j̲ = (i+j)̲."""
    return TermSet.of(numeral_terms(i + j) + _sum_terms(i, j), label=f"sum-{i}-{j}")


def product_forcing_terms(i: int, j: int) -> TermSet:
    """Numerals and the A5–A8 instance terms that force i̲ · j̲ = (i·j)̲."""
    a = ground_numeral(i)
    terms = numeral_terms(max(i, j, i * j))
    for k in range(j + 1):
        terms.append(_mul(a, ground_numeral(k)))
    for k in range(j):
        terms.append(_add(_mul(a, ground_numeral(k)), a))
        terms += _sum_terms(i * k, i)
    return TermSet.of(terms, label=f"product-{i}-{j}")


def sum_goal(i: int, j: int) -> Formula:
    return eq(_add(ground_numeral(i), ground_numeral(j)), ground_numeral(i + j))


def product_goal(i: int, j: int) -> Formula:
    return eq(_mul(ground_numeral(i), ground_numeral(j)), ground_numeral(i * j))


def substitute_constants(lam: TermSet, mapping: Mapping[str, Term]) -> TermSet:
    """Γ(t̄): carry a refuting set over Skolem constants to concrete terms."""
    return lam.substitute_constants(mapping)


# ---------------------------------------------------------------------------
# Herbrand consistency
# ---------------------------------------------------------------------------

class HConVerdict(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    NOT_APPLICABLE = "NOT_APPLICABLE"


def hcon_check(
    theory: Theory,
    lam: TermSet,
    registry: Optional[SkolemRegistry] = None,
    extra: Sequence[SkolemizedFormula] = (),
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
) -> bool:
    """A T-evaluation exists on Λ."""
    registry = registry or SkolemRegistry()
    t_sk = list(skolemize_theory(theory, registry)) + list(extra)
    sig = registry.extend_signature(theory.signature)
    outcome = search_evaluation(t_sk, lam, sig, budget_atoms=budget_atoms, budget_instances=budget_instances)
    return outcome.found


def hcon_star_check(
    theory: Theory,
    lam: TermSet,
    registry: Optional[SkolemRegistry] = None,
    coder: Optional[CodingScheme] = None,
    bit_ceiling: int = DEFAULT_BIT_CEILING,
    extra: Sequence[SkolemizedFormula] = (),
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
) -> HConVerdict:
    """HCon restricted to term sets whose code admits ω₁(⌜Λ⌝) under the ceiling."""
    registry = registry or SkolemRegistry()
    skolemize_theory(theory, registry)
    if coder is None:
        coder = CodingScheme.for_registry(omega1_signature(theory.signature), registry)
    try:
        code = coder.code_set(lam.elements)
    except CodingOverflowError:
        return HConVerdict.NOT_APPLICABLE
    if not omega_exists(1, code.value, bit_ceiling):
        logger.info("ω₁ of a %d-bit code exceeds the ceiling", code.bitlen)
        return HConVerdict.NOT_APPLICABLE
    found = hcon_check(theory, lam, registry, extra, budget_atoms, budget_instances)
    return HConVerdict.SAT if found else HConVerdict.UNSAT
