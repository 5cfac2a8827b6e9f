# -*- coding: utf-8 -*-
"""Evaluations: partial propositional models on the atoms over a term set Λ.

An evaluation p assigns a bit to every atom whose arguments lie in Λ such that
t = t holds for every t in Λ, and a true equality t = s makes atoms that differ
only by replacing t with s agree. True equalities also propagate through
function symbols whenever both applications are members of Λ.

T-evaluations are searched for by grounding: one propositional variable per
atom, clauses for the equality conditions instantiated over Λ, and the CNF of
every available Skolem instance. A brute-force enumerator serves as an oracle
on small tables.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from core.constants import DEFAULT_BRUTE_CAP, DEFAULT_BUDGET_ATOMS, DEFAULT_BUDGET_INSTANCES, EQUALITY
from core.errors import AtomOutsideTableError, BruteForceRefusedError, BudgetExceededError, HerbrandError
from core.instantiation import SkolemInstance, TermSet, available_instances
from core.normalizer import nnf
from core.sat_solver import SolveResult, solve
from core.skolemizer import SkolemizedFormula
from core.syntax_core import (
    And,
    Apply,
    Atom,
    Formula,
    Implies,
    Not,
    Or,
    Signature,
    Term,
    atoms_of,
    eq,
    parse_atom_lines,
    render_atom,
    render_formula,
)

logger = logging.getLogger(__name__)

Literal = int
Clause = Tuple[Literal, ...]


# ---------------------------------------------------------------------------
# Atom tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomTable:
    """Every atom over Λ, equalities first, then the declared predicates."""

    terms: TermSet
    atoms: Tuple[Atom, ...]
    signature: Signature

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in self.index

    @cached_property
    def index(self) -> Dict[Atom, int]:
        return {a: i for i, a in enumerate(self.atoms)}

    def position(self, atom: Atom) -> int:
        try:
            return self.index[atom]
        except KeyError:
            raise AtomOutsideTableError(f"atom {render_atom(atom)} is not over Λ") from None

    def equality(self, left: Term, right: Term) -> int:
        return self.position(eq(left, right))

    def variable(self, atom: Atom) -> int:
        """DIMACS variable of an atom (index + 1)."""
        return self.position(atom) + 1


def atoms_over(lam: TermSet, sig: Signature, budget: int = DEFAULT_BUDGET_ATOMS) -> AtomTable:
    """All atoms P(t̄) with t̄ in Λ, for `=` and every predicate of sig."""
    n = len(lam)
    requested = sum(n ** arity for _, arity in sig.all_predicates)
    if requested > budget:
        raise BudgetExceededError("atoms", budget, requested)
    atoms = [
        Atom(name, args)
        for name, arity in sig.all_predicates
        for args in itertools.product(lam.elements, repeat=arity)
    ]
    return AtomTable(lam, tuple(atoms), sig)


# ---------------------------------------------------------------------------
# Evaluations and equality classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Evaluation:
    table: AtomTable
    bits: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.bits) != len(self.table):
            raise HerbrandError(f"evaluation has {len(self.bits)} bits for {len(self.table)} atoms")

    @classmethod
    def from_true_atoms(cls, table: AtomTable, atoms: Iterable[Atom], add_reflexive: bool = True) -> "Evaluation":
        bits = [False] * len(table)
        for atom in atoms:
            bits[table.position(atom)] = True
        if add_reflexive:
            for t in table.terms:
                bits[table.equality(t, t)] = True
        return cls(table, tuple(bits))

    def value(self, atom: Atom) -> bool:
        return self.bits[self.table.position(atom)]

    def true_atoms(self) -> List[Atom]:
        return [a for a, bit in zip(self.table.atoms, self.bits) if bit]

    def render(self) -> str:
        """Sorted true atoms, one per line."""
        lines = sorted(render_atom(a) for a in self.true_atoms())
        return "".join(line + "\n" for line in lines)


def parse_evaluation(text: str, table: AtomTable) -> Evaluation:
    return Evaluation.from_true_atoms(table, parse_atom_lines(text, table.signature), add_reflexive=False)


def load_evaluation(path: Union[str, Path], table: AtomTable) -> Evaluation:
    return parse_evaluation(Path(path).read_text(encoding="utf-8"), table)


class UnionFind:
    def __init__(self) -> None:
        self.parent: Dict[Term, Term] = {}
        self.rank: Dict[Term, int] = {}

    def find(self, x: Term) -> Term:
        parent = self.parent
        if x not in parent:
            parent[x] = x
            self.rank[x] = 0
            return x
        # path halving
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: Term, b: Term) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


@dataclass(frozen=True)
class EqClasses:
    """Partition of Λ; each class is listed in Λ order and its first member is the representative."""

    classes: Tuple[Tuple[Term, ...], ...]

    def __len__(self) -> int:
        return len(self.classes)

    @cached_property
    def representative(self) -> Dict[Term, Term]:
        return {t: cls[0] for cls in self.classes for t in cls}

    def rep(self, t: Term) -> Term:
        """Representative of t; terms outside Λ stand for themselves."""
        return self.representative.get(t, t)

    def same(self, t: Term, s: Term) -> bool:
        return self.rep(t) == self.rep(s)

    def class_of(self, t: Term) -> Tuple[Term, ...]:
        rep = self.rep(t)
        for cls in self.classes:
            if cls[0] == rep:
                return cls
        return (t,)


def _classes_from(uf: UnionFind, lam: TermSet) -> EqClasses:
    grouped: Dict[Term, List[Term]] = {}
    for t in lam.elements:
        grouped.setdefault(uf.find(t), []).append(t)
    return EqClasses(tuple(tuple(members) for members in grouped.values()))


def _congruence_closure(uf: UnionFind, lam: TermSet) -> None:
    """Merge f(t̄), f(s̄) in Λ whose arguments are pairwise identical or merged."""
    applications = [t for t in lam.elements if isinstance(t, Apply) and t.args]
    changed = True
    while changed:
        changed = False
        signatures: Dict[Tuple, Term] = {}
        for t in applications:
            key = (t.symbol, tuple(uf.find(a) if a in lam else a for a in t.args))
            other = signatures.setdefault(key, t)
            if other is not t and uf.union(other, t):
                changed = True


def eq_classes(p: Evaluation) -> EqClasses:
    """Union-find partition of Λ from the true equality atoms."""
    uf = UnionFind()
    lam = p.table.terms
    for t in lam.elements:
        uf.find(t)
    for atom, bit in zip(p.table.atoms, p.bits):
        if bit and atom.predicate == EQUALITY:
            uf.union(atom.args[0], atom.args[1])
    return _classes_from(uf, lam)


def _as_evaluation(candidate: Union[Evaluation, Sequence[bool]], table: Optional[AtomTable]) -> Evaluation:
    if isinstance(candidate, Evaluation):
        return candidate
    if table is None:
        raise HerbrandError("raw bits need an atom table")
    return Evaluation(table, tuple(bool(b) for b in candidate))


def is_evaluation(candidate: Union[Evaluation, Sequence[bool]], table: Optional[AtomTable] = None) -> bool:
    """Reflexivity, predicate congruence and functional congruence, via congruence closure."""
    p = _as_evaluation(candidate, table)
    table = p.table
    lam = table.terms
    for t in lam.elements:
        if not p.bits[table.equality(t, t)]:
            return False
    uf = UnionFind()
    for t in lam.elements:
        uf.find(t)
    for atom, bit in zip(table.atoms, p.bits):
        if bit and atom.predicate == EQUALITY:
            uf.union(atom.args[0], atom.args[1])
    _congruence_closure(uf, lam)
    seen: Dict[Tuple, bool] = {}
    for atom, bit in zip(table.atoms, p.bits):
        key = (atom.predicate, tuple(uf.find(a) for a in atom.args))
        if atom.predicate == EQUALITY and key[1][0] == key[1][1] and not bit:
            return False
        expected = seen.setdefault(key, bit)
        if expected != bit:
            return False
    return True


# ---------------------------------------------------------------------------
# Satisfaction
# ---------------------------------------------------------------------------

def satisfies(p: Evaluation, g: Formula) -> bool:
    """Truth-functional extension of p to a ground open formula."""
    if isinstance(g, Atom):
        return p.value(g)
    if isinstance(g, Not):
        return not satisfies(p, g.body)
    if isinstance(g, And):
        return satisfies(p, g.left) and satisfies(p, g.right)
    if isinstance(g, Or):
        return satisfies(p, g.left) or satisfies(p, g.right)
    if isinstance(g, Implies):
        return (not satisfies(p, g.left)) or satisfies(p, g.right)
    raise HerbrandError(f"satisfies needs an open formula, got {render_formula(g)}")


def violated_instances(
    p: Evaluation,
    t_sk: Sequence[SkolemizedFormula],
    lam: Optional[TermSet] = None,
    budget: int = DEFAULT_BUDGET_INSTANCES,
) -> List[SkolemInstance]:
    lam = p.table.terms if lam is None else lam
    return [inst for inst in available_instances(t_sk, lam, budget) if not satisfies(p, inst.ground)]


def is_T_evaluation(
    p: Evaluation,
    t_sk: Sequence[SkolemizedFormula],
    lam: Optional[TermSet] = None,
    budget: int = DEFAULT_BUDGET_INSTANCES,
) -> bool:
    """p satisfies every Skolem instance of t_sk that is available in Λ."""
    lam = p.table.terms if lam is None else lam
    return all(satisfies(p, inst.ground) for inst in available_instances(t_sk, lam, budget))


# ---------------------------------------------------------------------------
# Propositional encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClauseSet:
    """Ground clauses over atom variables; provenance[i] explains clauses[i]."""

    table: AtomTable
    clauses: Tuple[Clause, ...]
    provenance: Tuple[str, ...]

    @property
    def num_vars(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.clauses)

    def numbered(self) -> Dict[int, Clause]:
        return {i: c for i, c in enumerate(self.clauses, start=1)}


class _ClauseCollector:
    def __init__(self):
        self.clauses: List[Clause] = []
        self.provenance: List[str] = []
        self._seen: Set[Clause] = set()

    def add(self, literals: Iterable[Literal], why: str) -> None:
        normal = tuple(sorted(set(literals), key=lambda l: (abs(l), l)))
        if any(-l in normal for l in normal if l > 0):
            return
        if normal in self._seen:
            return
        self._seen.add(normal)
        self.clauses.append(normal)
        self.provenance.append(why)


def formula_clauses(g: Formula, table: AtomTable) -> List[Clause]:
    """CNF of a ground open formula by plain distribution over atom variables."""
    f = nnf(g)

    def cnf(h: Formula) -> List[Tuple[Literal, ...]]:
        if isinstance(h, Atom):
            return [(table.variable(h),)]
        if isinstance(h, Not):
            return [(-table.variable(h.body),)]
        if isinstance(h, And):
            return cnf(h.left) + cnf(h.right)
        if isinstance(h, Or):
            return [a + b for a in cnf(h.left) for b in cnf(h.right)]
        raise HerbrandError(f"cannot clausify {render_formula(h)}")

    return cnf(f)


def _equality_clauses(out: _ClauseCollector, table: AtomTable, symmetry_transitivity: bool) -> None:
    lam = table.terms.elements
    var = table.variable
    for t in lam:
        out.add([var(eq(t, t))], f"reflexivity {render_atom(eq(t, t))}")
    if symmetry_transitivity:
        for t, s in itertools.permutations(lam, 2):
            out.add([-var(eq(t, s)), var(eq(s, t))], "symmetry")
        for a, b, c in itertools.permutations(lam, 3):
            out.add([-var(eq(a, b)), -var(eq(b, c)), var(eq(a, c))], "transitivity")
    for atom in table.atoms:
        source = var(atom)
        for i, arg in enumerate(atom.args):
            for s in lam:
                if s == arg:
                    continue
                replaced = Atom(atom.predicate, atom.args[:i] + (s,) + atom.args[i + 1:])
                out.add([-var(eq(arg, s)), -source, var(replaced)], f"congruence {atom.predicate}@{i + 1}")
    by_head: Dict[Tuple[str, int], List[Apply]] = {}
    for t in lam:
        if isinstance(t, Apply) and t.args:
            by_head.setdefault((t.symbol, len(t.args)), []).append(t)
    members = table.terms.members
    for (symbol, _), group in by_head.items():
        for left, right in itertools.permutations(group, 2):
            premises = []
            for a, b in zip(left.args, right.args):
                if a == b:
                    continue
                if a not in members or b not in members:
                    break
                premises.append(-var(eq(a, b)))
            else:
                out.add(premises + [var(eq(left, right))], f"functional congruence {symbol}")


def encode(
    t_sk: Sequence[SkolemizedFormula],
    lam: TermSet,
    sig: Signature,
    extra: Sequence[Tuple[Formula, str]] = (),
    symmetry_transitivity: bool = True,
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
) -> Tuple[ClauseSet, List[SkolemInstance]]:
    """Clause set whose models are exactly the T-evaluations on Λ satisfying the extra formulas."""
    table = atoms_over(lam, sig, budget_atoms)
    out = _ClauseCollector()
    _equality_clauses(out, table, symmetry_transitivity)
    instances = available_instances(t_sk, lam, budget_instances)
    for inst in instances:
        origin = inst.source.label or render_formula(inst.source.open)
        for clause in formula_clauses(inst.ground, table):
            out.add(clause, f"instance {origin}")
    for formula, why in extra:
        for clause in formula_clauses(formula, table):
            out.add(clause, why)
    logger.debug("encoded %d atoms, %d instances, %d clauses", len(table), len(instances), len(out.clauses))
    return ClauseSet(table, tuple(out.clauses), tuple(out.provenance)), instances


@dataclass(frozen=True)
class SearchOutcome:
    evaluation: Optional[Evaluation]
    clause_set: Optional[ClauseSet]
    result: Optional[SolveResult]
    instances: Tuple[SkolemInstance, ...] = ()

    @property
    def found(self) -> bool:
        return self.evaluation is not None


def search_evaluation(
    t_sk: Sequence[SkolemizedFormula],
    lam: TermSet,
    sig: Signature,
    extra: Sequence[Tuple[Formula, str]] = (),
    symmetry_transitivity: bool = True,
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
) -> SearchOutcome:
    """SAT-mode search keeping the clause set and solver result (refutation included)."""
    clause_set, instances = encode(t_sk, lam, sig, extra, symmetry_transitivity, budget_atoms, budget_instances)
    result = solve(clause_set.num_vars, clause_set.clauses)
    evaluation = None
    if result.satisfiable:
        evaluation = Evaluation(clause_set.table, result.model)
    return SearchOutcome(evaluation, clause_set, result, tuple(instances))


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def set_partitions(items: Sequence[Term]) -> Iterator[List[List[Term]]]:
    """All set partitions in restricted-growth order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def _closed_under_functions(partition: List[List[Term]], lam: TermSet) -> bool:
    """No two applications with blockwise-equal arguments lie in different blocks.

    Checked pairwise from the definition, independently of the union-find
    closure the SAT path and is_evaluation use.
    """
    block_of = {t: i for i, block in enumerate(partition) for t in block}
    applications = [t for t in lam.elements if isinstance(t, Apply) and t.args]
    for left, right in itertools.combinations(applications, 2):
        if left.symbol != right.symbol or len(left.args) != len(right.args):
            continue
        if block_of[left] == block_of[right]:
            continue
        if all(
            a == b or (a in block_of and b in block_of and block_of[a] == block_of[b])
            for a, b in zip(left.args, right.args)
        ):
            return False
    return True


def _candidates(table: AtomTable) -> Iterator[Tuple[bool, ...]]:
    """Every evaluation on the table, factored by the equality partition."""
    lam = table.terms
    for partition in set_partitions(list(lam.elements)):
        if not _closed_under_functions(partition, lam):
            continue
        rep = {t: block[0] for block in partition for t in block}
        keys = [(a.predicate, tuple(rep[x] for x in a.args)) for a in table.atoms]
        free_keys = list(dict.fromkeys(k for a, k in zip(table.atoms, keys) if a.predicate != EQUALITY))
        for choice in itertools.product((False, True), repeat=len(free_keys)):
            assigned = dict(zip(free_keys, choice))
            yield tuple(
                (k[1][0] == k[1][1]) if a.predicate == EQUALITY else assigned[k]
                for a, k in zip(table.atoms, keys)
            )


def brute_force_evaluation(
    t_sk: Sequence[SkolemizedFormula],
    lam: TermSet,
    sig: Signature,
    extra: Sequence[Tuple[Formula, str]] = (),
    cap: int = DEFAULT_BRUTE_CAP,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
) -> Optional[Evaluation]:
    """Enumerate evaluations and test every instance with `satisfies`; no clauses involved."""
    table = atoms_over(lam, sig)
    if len(table) > cap:
        raise BruteForceRefusedError("brute-force atoms", cap, len(table))
    required = [inst.ground for inst in available_instances(t_sk, lam, budget_instances)]
    required += [formula for formula, _ in extra]
    for bits in _candidates(table):
        p = Evaluation(table, bits)
        if not all(satisfies(p, g) for g in required):
            continue
        if not is_evaluation(p):
            raise HerbrandError("enumerated candidate fails is_evaluation: congruence checks disagree")
        return p
    return None


def count_assignments(table: AtomTable, cap: int = DEFAULT_BRUTE_CAP) -> int:
    """Number of total bit assignments on the table, by enumeration."""
    if len(table) > cap:
        raise BruteForceRefusedError("enumerated atoms", cap, len(table))
    return sum(1 for _ in itertools.product((False, True), repeat=len(table)))


def count_evaluations(table: AtomTable, cap: int = DEFAULT_BRUTE_CAP) -> int:
    if len(table) > cap:
        raise BruteForceRefusedError("enumerated atoms", cap, len(table))
    return sum(1 for _ in _candidates(table))


# ---------------------------------------------------------------------------
# Public search API
# ---------------------------------------------------------------------------

class SearchMode(Enum):
    SAT = "sat"
    BRUTE = "brute"


def find_evaluation(
    t_sk: Sequence[SkolemizedFormula],
    lam: TermSet,
    sig: Signature,
    mode: Union[SearchMode, str] = SearchMode.SAT,
    extra: Sequence[Tuple[Formula, str]] = (),
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
    brute_cap: int = DEFAULT_BRUTE_CAP,
) -> Optional[Evaluation]:
    """A T-evaluation on Λ, or None when none exists."""
    mode = SearchMode(mode)
    if mode is SearchMode.BRUTE:
        return brute_force_evaluation(t_sk, lam, sig, extra, brute_cap, budget_instances)
    return search_evaluation(t_sk, lam, sig, extra, True, budget_atoms, budget_instances).evaluation


class ForceVerdict(Enum):
    FORCED = "FORCED"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


@dataclass(frozen=True)
class ForceResult:
    verdict: ForceVerdict
    counterexample: Optional[Evaluation] = None
    outcome: Optional[SearchOutcome] = None

    @property
    def forced(self) -> bool:
        return self.verdict is ForceVerdict.FORCED


def force_check(
    t_sk: Sequence[SkolemizedFormula],
    lam: TermSet,
    sig: Signature,
    goal: Formula,
    budget_atoms: int = DEFAULT_BUDGET_ATOMS,
    budget_instances: int = DEFAULT_BUDGET_INSTANCES,
) -> ForceResult:
    """FORCED when every T-evaluation on Λ satisfies the ground goal."""
    table = atoms_over(lam, sig, budget_atoms)
    for atom in atoms_of(goal):
        table.position(atom)
    outcome = search_evaluation(
        t_sk, lam, sig, [(Not(goal), "negated goal")], True, budget_atoms, budget_instances
    )
    if outcome.found:
        logger.info("goal %s not forced on |Λ|=%d", render_formula(goal), len(lam))
        return ForceResult(ForceVerdict.COUNTEREXAMPLE, outcome.evaluation, outcome)
    return ForceResult(ForceVerdict.FORCED, None, outcome)
