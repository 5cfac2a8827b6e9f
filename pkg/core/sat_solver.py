# -*- coding: utf-8 -*-
"""Deterministic CDCL solver that logs a resolution refutation, plus its checker.

Literals are non-zero integers in DIMACS style (variable v true is v, false is
-v). Input clause i gets id i+1; learned clauses continue the numbering. Every
learned clause is recorded with the ordered chain of clause ids whose
left-to-right resolution yields it. Level-0 literals are resolved away through
their reasons, so an unsatisfiable run ends with a step that derives the empty
clause from input clauses alone.

Decisions take the lowest-numbered unassigned variable and try it false first.
There are no restarts and no randomness, so runs are reproducible.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from core.errors import BudgetExceededError

logger = logging.getLogger(__name__)


class SolverStatus(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class ResolutionStep:
    clause_id: int
    literals: Tuple[int, ...]
    antecedents: Tuple[int, ...]


@dataclass(frozen=True)
class SolveResult:
    status: SolverStatus
    model: Optional[Tuple[bool, ...]]
    steps: Tuple[ResolutionStep, ...]
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0

    @property
    def satisfiable(self) -> bool:
        return self.status is SolverStatus.SAT


class CDCLSolver:
    def __init__(self, num_vars: int, clauses: Sequence[Sequence[int]], max_conflicts: Optional[int] = None):
        self.num_vars = num_vars
        self.max_conflicts = max_conflicts
        self.clauses: List[List[int]] = [[]]
        self.assign: List[Optional[bool]] = [None] * (num_vars + 1)
        self.level: List[int] = [0] * (num_vars + 1)
        self.reason: List[Optional[int]] = [None] * (num_vars + 1)
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.cursor = 1
        self.watches: Dict[int, List[int]] = {}
        self.steps: List[ResolutionStep] = []
        self.decisions = 0
        self.conflicts = 0
        self.propagations = 0
        self._units: List[int] = []
        self._empty: Optional[int] = None
        for raw in clauses:
            self._add_input(raw)

    # -- clause database -------------------------------------------------

    def _add_input(self, raw: Sequence[int]) -> None:
        literals: List[int] = []
        for lit in raw:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range")
            if lit not in literals:
                literals.append(lit)
        cid = len(self.clauses)
        self.clauses.append(literals)
        if any(-lit in literals for lit in literals):
            return
        if not literals:
            if self._empty is None:
                self._empty = cid
        elif len(literals) == 1:
            self._units.append(cid)
        else:
            self._watch(cid)

    def _watch(self, cid: int) -> None:
        clause = self.clauses[cid]
        self.watches.setdefault(clause[0], []).append(cid)
        self.watches.setdefault(clause[1], []).append(cid)

    # -- assignment ------------------------------------------------------

    def value(self, lit: int) -> Optional[bool]:
        v = self.assign[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason: Optional[int]) -> None:
        var = abs(lit)
        self.assign[var] = lit > 0
        self.level[var] = self._decision_level()
        self.reason[var] = reason
        self.trail.append(lit)

    def _backtrack(self, target_level: int) -> None:
        if self._decision_level() <= target_level:
            return
        start = self.trail_lim[target_level]
        for lit in self.trail[start:]:
            var = abs(lit)
            self.assign[var] = None
            self.reason[var] = None
            if var < self.cursor:
                self.cursor = var
        del self.trail[start:]
        del self.trail_lim[target_level:]
        self.qhead = len(self.trail)

    def _propagate(self) -> Optional[int]:
        """Unit propagation with two watched literals; returns a conflicting clause id."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            watchers = self.watches.get(false_lit)
            if not watchers:
                continue
            kept: List[int] = []
            conflict: Optional[int] = None
            for cid in watchers:
                if conflict is not None:
                    kept.append(cid)
                    continue
                clause = self.clauses[cid]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self.value(first) is True:
                    kept.append(cid)
                    continue
                for k in range(2, len(clause)):
                    if self.value(clause[k]) is not False:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(cid)
                        break
                else:
                    kept.append(cid)
                    if self.value(first) is False:
                        conflict = cid
                    else:
                        self._enqueue(first, cid)
                        self.propagations += 1
            self.watches[false_lit] = kept
            if conflict is not None:
                return conflict
        return None

    # -- conflict analysis -------------------------------------------------

    def _resolve_into(self, current: Set[int], pivot_lit: int, cid: int, chain: List[int]) -> None:
        current.discard(-pivot_lit)
        for other in self.clauses[cid]:
            if other != pivot_lit:
                current.add(other)
        chain.append(cid)

    def _eliminate_level_zero(self, current: Set[int], chain: List[int]) -> None:
        end = self.trail_lim[0] if self.trail_lim else len(self.trail)
        for lit in reversed(self.trail[:end]):
            if -lit in current:
                self._resolve_into(current, lit, self.reason[abs(lit)], chain)

    def _analyze(self, conflict: int) -> Tuple[List[int], List[int]]:
        """First-UIP learning; returns (learned literals, resolution chain)."""
        current = set(self.clauses[conflict])
        chain = [conflict]
        dl = self._decision_level()
        if dl > 0:
            counter = sum(1 for l in current if self.level[abs(l)] == dl)
            index = len(self.trail) - 1
            while counter > 1:
                while -self.trail[index] not in current:
                    index -= 1
                lit = self.trail[index]
                index -= 1
                counter -= 1
                current.discard(-lit)
                for other in self.clauses[self.reason[abs(lit)]]:
                    if other != lit and other not in current:
                        current.add(other)
                        if self.level[abs(other)] == dl:
                            counter += 1
                chain.append(self.reason[abs(lit)])
        self._eliminate_level_zero(current, chain)
        return sorted(current, key=lambda l: (-self.level[abs(l)], abs(l))), chain

    def _record(self, literals: Sequence[int], chain: Sequence[int]) -> int:
        cid = len(self.clauses)
        self.clauses.append(list(literals))
        self.steps.append(ResolutionStep(cid, tuple(sorted(literals)), tuple(chain)))
        return cid

    def _unsat(self) -> SolveResult:
        logger.debug("UNSAT after %d conflicts, %d decisions", self.conflicts, self.decisions)
        return SolveResult(SolverStatus.UNSAT, None, tuple(self.steps), self.decisions, self.conflicts, self.propagations)

    # -- main loop ---------------------------------------------------------

    def _next_decision(self) -> Optional[int]:
        while self.cursor <= self.num_vars and self.assign[self.cursor] is not None:
            self.cursor += 1
        return self.cursor if self.cursor <= self.num_vars else None

    def solve(self) -> SolveResult:
        if self._empty is not None:
            self._record((), (self._empty,))
            return self._unsat()
        for cid in self._units:
            lit = self.clauses[cid][0]
            current = self.value(lit)
            if current is None:
                self._enqueue(lit, cid)
            elif current is False:
                literals, chain = self._analyze(cid)
                self._record(literals, chain)
                return self._unsat()
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                if self.max_conflicts is not None and self.conflicts > self.max_conflicts:
                    raise BudgetExceededError("conflicts", self.max_conflicts, self.conflicts)
                literals, chain = self._analyze(conflict)
                cid = self._record(literals, chain)
                if not literals:
                    return self._unsat()
                if len(literals) == 1:
                    self._backtrack(0)
                else:
                    self._backtrack(self.level[abs(literals[1])])
                    self._watch(cid)
                self._enqueue(literals[0], cid)
                continue
            var = self._next_decision()
            if var is None:
                model = tuple(bool(self.assign[v]) for v in range(1, self.num_vars + 1))
                return SolveResult(SolverStatus.SAT, model, tuple(self.steps), self.decisions, self.conflicts, self.propagations)
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(-var, None)


def solve(num_vars: int, clauses: Sequence[Sequence[int]], max_conflicts: Optional[int] = None) -> SolveResult:
    return CDCLSolver(num_vars, clauses, max_conflicts).solve()


# ---------------------------------------------------------------------------
# Independent replay
# ---------------------------------------------------------------------------

class ResolutionError(Exception):
    pass


def resolve_clauses(left: FrozenSet[int], right: FrozenSet[int]) -> FrozenSet[int]:
    """Resolvent of two clauses that clash on exactly one variable."""
    pivots = [lit for lit in left if -lit in right]
    if len(pivots) != 1:
        raise ResolutionError(f"clauses clash on {len(pivots)} literals")
    pivot = pivots[0]
    return (left - {pivot}) | (right - {-pivot})


def check_refutation(clauses: Mapping[int, Sequence[int]], steps: Sequence[ResolutionStep]) -> Tuple[bool, str]:
    """Replay every step; the last one must derive the empty clause."""
    known: Dict[int, FrozenSet[int]] = {cid: frozenset(lits) for cid, lits in clauses.items()}
    if not steps:
        return False, "no resolution steps"
    for step in steps:
        if step.clause_id in known:
            return False, f"step {step.clause_id}: id already in use"
        if not step.antecedents:
            return False, f"step {step.clause_id}: empty antecedent chain"
        missing = [a for a in step.antecedents if a not in known]
        if missing:
            return False, f"step {step.clause_id}: unknown antecedent clause {missing[0]}"
        current = known[step.antecedents[0]]
        for antecedent in step.antecedents[1:]:
            try:
                current = resolve_clauses(current, known[antecedent])
            except ResolutionError as exc:
                return False, f"step {step.clause_id}: resolving with clause {antecedent}: {exc}"
        if current != frozenset(step.literals):
            return False, f"step {step.clause_id}: derived {sorted(current)} but claimed {sorted(step.literals)}"
        known[step.clause_id] = current
    if steps[-1].literals:
        return False, "last step does not derive the empty clause"
    return True, "ok"
