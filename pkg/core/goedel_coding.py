# -*- coding: utf-8 -*-
"""Concrete Gödel coding, iterated exp/log towers and growth-bound fitting.

Codes are self-delimiting bit strings read as natural numbers with a leading
1 bit. Symbol ids are written in Elias-gamma code; a term is its head id
followed by its arguments; a sequence is gamma(length + 1) followed by its
elements; a set is the sequence of its distinct elements in canonical order.

Quantities too large to hold exactly under the configured bit ceiling are
tracked as Tower surrogates: exp^level(mantissa) with a float mantissa.
"""

import functools
import logging
import math
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from core.constants import (
    DEFAULT_BIT_CEILING,
    DEFAULT_MAX_EXPONENT,
    EQUALITY,
    P_BOUND_MIN_DECADES,
    P_BOUND_MIN_SAMPLES,
    TOWER_FLOAT_LIMIT,
    TOWER_RELATIVE_TOLERANCE,
)
from core.errors import CodingOverflowError, HerbrandError, InsufficientSpreadError, SignatureError
from core.skolemizer import RegistrySnapshot
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
    Variable,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Prefix codes
# ---------------------------------------------------------------------------

def gamma_bits(n: int) -> str:
    """Elias-gamma code of a positive integer."""
    if n < 1:
        raise ValueError("gamma code needs a positive integer")
    binary = bin(n)[2:]
    return "0" * (len(binary) - 1) + binary


def read_gamma(bits: str, offset: int = 0) -> Tuple[int, int]:
    """Decode one gamma codeword; returns (value, next offset)."""
    zeros = 0
    while bits[offset + zeros] == "0":
        zeros += 1
    end = offset + 2 * zeros + 1
    return int(bits[offset + zeros:end], 2), end


@dataclass(frozen=True)
class Code:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise HerbrandError("codes are positive")

    @property
    def bitlen(self) -> int:
        return self.value.bit_length()

    @property
    def bits(self) -> str:
        """Payload without the leading 1 bit."""
        return bin(self.value)[3:]

    @classmethod
    def from_bits(cls, bits: str) -> "Code":
        return cls(int("1" + bits, 2))

    def __int__(self) -> int:
        return self.value


_VAR, _NOT, _AND, _OR, _IMPLIES, _FORALL, _EXISTS = range(1, 8)
_CONNECTIVES = {Not: _NOT, And: _AND, Or: _OR, Implies: _IMPLIES, Forall: _FORALL, Exists: _EXISTS}

Codable = Union[Code, Term, Formula, int]


class CodingScheme:
    """Symbol table frozen at construction; encoders for terms, formulas and collections."""

    def __init__(self, sig: Signature, snapshot: RegistrySnapshot = (), bit_ceiling: int = DEFAULT_BIT_CEILING):
        self.bit_ceiling = bit_ceiling
        table: Dict[str, int] = {EQUALITY: _EXISTS + 1}
        names = [n for n, _ in sig.predicates] + [n for n, _ in sig.functions] + [s.name for s in snapshot]
        for name in names:
            table.setdefault(name, len(table) + _EXISTS + 1)
        self._ids = table

    @classmethod
    def for_registry(cls, sig: Signature, registry, bit_ceiling: int = DEFAULT_BIT_CEILING) -> "CodingScheme":
        return cls(sig, registry.snapshot(), bit_ceiling)

    @property
    def symbol_table(self) -> Dict[str, int]:
        return dict(self._ids)

    def symbol_id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise SignatureError(f"symbol {name!r} has no code") from None

    # -- bit strings -----------------------------------------------------

    @staticmethod
    def variable_bits(name: str) -> str:
        return gamma_bits(_VAR) + gamma_bits(int.from_bytes(b"\x01" + name.encode("utf-8"), "big"))

    def term_bits(self, t: Term) -> str:
        if isinstance(t, Variable):
            return self.variable_bits(t.name)
        return gamma_bits(self.symbol_id(t.symbol)) + "".join(self.term_bits(a) for a in t.args)

    def formula_bits(self, f: Formula) -> str:
        if isinstance(f, Atom):
            return gamma_bits(self.symbol_id(f.predicate)) + "".join(self.term_bits(a) for a in f.args)
        tag = gamma_bits(_CONNECTIVES[type(f)])
        if isinstance(f, Not):
            return tag + self.formula_bits(f.body)
        if isinstance(f, (Forall, Exists)):
            return tag + self.variable_bits(f.var) + self.formula_bits(f.body)
        return tag + self.formula_bits(f.left) + self.formula_bits(f.right)

    @staticmethod
    def natural_bits(n: int) -> str:
        return gamma_bits(n + 1)

    def _element_bits(self, item: Codable) -> str:
        if isinstance(item, Code):
            return item.bits
        if isinstance(item, bool) or isinstance(item, int):
            return self.natural_bits(int(item))
        if isinstance(item, (Variable, Apply)):
            return self.term_bits(item)
        return self.formula_bits(item)

    def _finish(self, bits: str) -> Code:
        if len(bits) + 1 > self.bit_ceiling:
            raise CodingOverflowError("code bits", self.bit_ceiling, len(bits) + 1)
        return Code.from_bits(bits)

    # -- codes -------------------------------------------------------------

    def code_term(self, t: Term) -> Code:
        return self._finish(self.term_bits(t))

    def code_formula(self, f: Formula) -> Code:
        return self._finish(self.formula_bits(f))

    def code_natural(self, n: int) -> Code:
        return self._finish(self.natural_bits(n))

    def sequence_bits(self, items: Sequence[Codable]) -> str:
        return gamma_bits(len(items) + 1) + "".join(self._element_bits(x) for x in items)

    def code_sequence(self, items: Sequence[Codable]) -> Code:
        return self._finish(self.sequence_bits(items))

    def code_set(self, items: Iterable[Codable]) -> Code:
        """Sorted duplicate-free sequence; the order is by (length, bit string)."""
        distinct = sorted({self._element_bits(x) for x in items}, key=lambda b: (len(b), b))
        return self._finish(gamma_bits(len(distinct) + 1) + "".join(distinct))

    def code_evaluation(self, p) -> Code:
        """The set of pairs ⟨atom, bit⟩ of an evaluation."""
        pairs = [Code.from_bits(self.sequence_bits([atom, int(bit)])) for atom, bit in zip(p.table.atoms, p.bits)]
        return self.code_set(pairs)


def sequence_length(code: Code) -> int:
    """Number of elements announced by a sequence or set code."""
    return read_gamma(code.bits)[0] - 1


# ---------------------------------------------------------------------------
# Towers
# ---------------------------------------------------------------------------

def ceil_log2(x: int) -> int:
    """log x = min{y | x <= 2^y}."""
    if x < 0:
        raise ValueError("log of a negative number")
    return (x - 1).bit_length() if x > 1 else 0


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class Tower:
    """Exact natural number, or exp^level(mantissa) when too large for the ceiling."""

    exact: Optional[int] = None
    level: int = 0
    mantissa: float = 0.0

    @classmethod
    def of(cls, value: int) -> "Tower":
        return cls(exact=value)

    @classmethod
    def surrogate(cls, level: int, mantissa: float) -> "Tower":
        while level > 0 and mantissa < TOWER_FLOAT_LIMIT:
            mantissa = 2.0 ** mantissa
            level -= 1
        return cls(None, level, mantissa)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def normal(self) -> Tuple[int, float]:
        """(level, mantissa) normal form; exact values are converted."""
        if self.exact is None:
            return self.level, self.mantissa
        if self.exact.bit_length() < 1000:
            return 0, float(self.exact)
        return Tower.surrogate(1, math.log2(self.exact)).normal()

    def log2(self) -> float:
        if self.exact is not None:
            return math.log2(self.exact) if self.exact > 0 else float("-inf")
        level, m = self.level, self.mantissa
        if level == 0:
            return math.log2(m)
        value = m
        for _ in range(level - 1):
            if value >= TOWER_FLOAT_LIMIT:
                return float("inf")
            value = 2.0 ** value
        return value

    def bits(self) -> float:
        if self.exact is not None:
            return float(self.exact.bit_length())
        return math.floor(self.log2()) + 1.0

    def exp(self, ceiling: int = DEFAULT_BIT_CEILING) -> "Tower":
        if self.exact is not None:
            if self.exact + 1 <= ceiling:
                return Tower.of(1 << self.exact)
            level, m = self.normal()
            return Tower.surrogate(level + 1, m)
        return Tower.surrogate(self.level + 1, self.mantissa)

    def log(self) -> "Tower":
        """Ceiling log; exact below the ceiling."""
        if self.exact is not None:
            return Tower.of(ceil_log2(self.exact))
        if self.level == 0:
            return Tower.of(math.ceil(math.log2(self.mantissa) - TOWER_RELATIVE_TOLERANCE))
        if self.level == 1:
            return Tower.of(math.ceil(self.mantissa - TOWER_RELATIVE_TOLERANCE * self.mantissa))
        return Tower.surrogate(self.level - 1, self.mantissa)

    def _add_one(self) -> "Tower":
        if self.exact is not None:
            return Tower.of(self.exact + 1)
        if self.level == 0:
            return Tower(None, 0, self.mantissa + 1.0)
        return self

    def double(self, ceiling: int = DEFAULT_BIT_CEILING) -> "Tower":
        if self.exact is not None and self.exact.bit_length() + 1 <= ceiling:
            return Tower.of(self.exact << 1)
        level, m = self.normal()
        if level == 0:
            return Tower(None, 0, 2.0 * m)
        return Tower.surrogate(level - 1, m)._add_one().exp(ceiling)

    def square(self, ceiling: int = DEFAULT_BIT_CEILING) -> "Tower":
        if self.exact is not None and 2 * self.exact.bit_length() <= ceiling:
            return Tower.of(self.exact * self.exact)
        level, m = self.normal()
        if level == 0:
            if m < 1e150:
                return Tower(None, 0, m * m)
            return Tower.surrogate(1, 2.0 * math.log2(m))
        return Tower.surrogate(level - 1, m).double(ceiling).exp(ceiling)

    def compare(self, other: "Tower") -> int:
        if self.exact is not None and other.exact is not None:
            return (self.exact > other.exact) - (self.exact < other.exact)
        a_level, a = self.normal()
        b_level, b = other.normal()
        if a_level != b_level:
            return 1 if a_level > b_level else -1
        if abs(a - b) <= TOWER_RELATIVE_TOLERANCE * max(abs(a), abs(b)):
            return 0
        return 1 if a > b else -1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Tower.of(other)
        if not isinstance(other, Tower):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other: Union["Tower", int]) -> bool:
        if isinstance(other, int):
            other = Tower.of(other)
        return self.compare(other) < 0

    def __hash__(self) -> int:
        return hash(self.normal())

    def __repr__(self) -> str:
        if self.exact is not None:
            if self.exact.bit_length() <= 64:
                return f"Tower({self.exact})"
            return f"Tower(<{self.exact.bit_length()} bits>)"
        return f"Tower(exp^{self.level}({self.mantissa:.6g}))"


def exp_iter(n: int, x: Union[int, Tower], ceiling: int = DEFAULT_BIT_CEILING) -> Tower:
    """exp^n(x) with exp(x) = 2^x."""
    t = x if isinstance(x, Tower) else Tower.of(x)
    for _ in range(n):
        t = t.exp(ceiling)
    return t


def log_iter(n: int, x: int) -> int:
    for _ in range(n):
        x = ceil_log2(x)
    return x


def omega_closed(m: int, x: int, ceiling: int = DEFAULT_BIT_CEILING) -> Tower:
    """ω_m(x) = exp^m((log^m x)²)."""
    l = log_iter(m, x)
    return exp_iter(m, Tower.of(l).square(ceiling), ceiling)


def omega_recursive(m: int, x: Union[int, Tower], ceiling: int = DEFAULT_BIT_CEILING) -> Tower:
    """ω_0(x) = x², ω_{n+1}(x) = exp(ω_n(log x))."""
    t = x if isinstance(x, Tower) else Tower.of(x)
    if m == 0:
        return t.square(ceiling)
    return omega_recursive(m - 1, t.log(), ceiling).exp(ceiling)


def omega(m: int, x: int, ceiling: int = DEFAULT_BIT_CEILING) -> Tower:
    """ω_m(x) by both definitions; they must agree."""
    closed = omega_closed(m, x, ceiling)
    recursive = omega_recursive(m, x, ceiling)
    if closed != recursive:
        raise HerbrandError(f"omega definitions disagree at m={m}, x={x}: {closed!r} vs {recursive!r}")
    return closed


def in_log_cut(n: int, x: int, ceiling: int = DEFAULT_BIT_CEILING) -> bool:
    """exp^n(x) is representable under the ceiling."""
    return exp_iter(n, x, ceiling).is_exact


def omega_exists(m: int, x: int, ceiling: int = DEFAULT_BIT_CEILING) -> bool:
    return omega_closed(m, x, ceiling).is_exact


# ---------------------------------------------------------------------------
# Growth-bound fitting
# ---------------------------------------------------------------------------

Magnitude = Union[int, Code, Tower]


def _log2(v: Magnitude) -> float:
    if isinstance(v, Code):
        v = v.value
    if isinstance(v, Tower):
        return v.log2()
    return math.log2(v) if v > 0 else float("-inf")


def _exact(v: Magnitude) -> Optional[int]:
    if isinstance(v, Code):
        return v.value
    if isinstance(v, Tower):
        return v.exact
    return v


def _bounded(x: Magnitude, y: Magnitude, n: int) -> bool:
    """x <= y^n + n."""
    ex, ey = _exact(x), _exact(y)
    if ex is not None and ey is not None and (ey <= 1 or ey.bit_length() * n <= 4096):
        return ex <= ey ** n + n
    if ey is not None and ey <= 1:
        return False
    return _log2(x) <= n * _log2(y) + TOWER_RELATIVE_TOLERANCE


@dataclass(frozen=True)
class PBoundResult:
    exponent: Optional[int]
    samples: int
    decades: float

    @property
    def ok(self) -> bool:
        return self.exponent is not None


def p_bound_check(
    samples: Sequence[Tuple[Magnitude, Magnitude]],
    max_exponent: int = DEFAULT_MAX_EXPONENT,
    min_samples: int = P_BOUND_MIN_SAMPLES,
    min_decades: float = P_BOUND_MIN_DECADES,
) -> PBoundResult:
    """Least n <= max_exponent with x <= y^n + n on every sample, or a FAIL result."""
    if len(samples) < min_samples:
        raise InsufficientSpreadError(f"need at least {min_samples} samples, got {len(samples)}")
    logs = [_log2(y) * math.log10(2) for _, y in samples]
    decades = max(logs) - min(logs)
    if decades < min_decades:
        raise InsufficientSpreadError(f"samples span {decades:.2f} decades of y, need {min_decades}")
    for n in range(max_exponent + 1):
        if all(_bounded(x, y, n) for x, y in samples):
            logger.debug("fitted exponent %d over %d samples", n, len(samples))
            return PBoundResult(n, len(samples), decades)
    return PBoundResult(None, len(samples), decades)


# ---------------------------------------------------------------------------
# Contract checks and corpora
# ---------------------------------------------------------------------------

def random_term(rng: random.Random, sig: Signature, depth: int) -> Term:
    constants = [n for n, a in sig.functions if a == 0]
    if depth <= 0:
        return Apply(rng.choice(constants), ())
    name, arity = rng.choice(list(sig.functions))
    return Apply(name, tuple(random_term(rng, sig, rng.randint(0, depth - 1)) for _ in range(arity)))


def random_terms(rng: random.Random, sig: Signature, count: int, depth: int = 3) -> List[Term]:
    return [random_term(rng, sig, rng.randint(0, depth)) for _ in range(count)]


def _ratio(numerator: int, denominator: int) -> float:
    return 2.0 ** (math.log2(numerator) - math.log2(denominator))


def contract_report(scheme: CodingScheme, corpus: Sequence[Term], rng: random.Random) -> Dict[str, Dict[str, float]]:
    """Maximum ratio (left side over bound) and violation count for each contract inequality."""
    stats = {key: {"max_ratio": 0.0, "violations": 0, "checked": 0}
             for key in ("singleton", "concatenation", "union", "cardinality")}

    def record(key: str, left: int, bound: int) -> None:
        entry = stats[key]
        entry["checked"] += 1
        entry["max_ratio"] = max(entry["max_ratio"], _ratio(left, bound) if bound > 0 else float("inf"))
        if left > bound:
            entry["violations"] += 1

    codes = [scheme.code_term(t) for t in corpus]
    for code in codes:
        single = scheme.code_sequence([code]).value
        record("singleton", single, 9 * (code.value + 1) ** 2)
    for _ in range(len(corpus)):
        left = rng.sample(codes, rng.randint(1, min(6, len(codes))))
        right = rng.sample(codes, rng.randint(1, min(6, len(codes))))
        a, b = scheme.code_sequence(left), scheme.code_sequence(right)
        record("concatenation", scheme.code_sequence(left + right).value, 64 * a.value * b.value)
        sa, sb = scheme.code_set(left), scheme.code_set(right)
        record("union", scheme.code_set(left + right).value, 64 * sa.value * sb.value)
        record("cardinality", len(set(left)), ceil_log2(sa.value))
    return stats


def evaluation_bound_samples(scheme: CodingScheme, evaluations: Iterable, ceiling: int = DEFAULT_BIT_CEILING):
    """(⌜p⌝, ω₁(⌜Λ⌝)) pairs for the evaluation-size bound."""
    samples = []
    for p in evaluations:
        code_lam = scheme.code_set(p.table.terms.elements)
        samples.append((scheme.code_evaluation(p), omega_closed(1, code_lam.value, ceiling)))
    return samples


def _example_theory():
    from core.syntax_core import parse_theory

    return parse_theory(
        "signature: c/0 g/1 ; P/2 R/1 S/1\n"
        "forall x. exists y. P(x, y)\n"
        "forall x. (R(x) | S(g(x)))\n"
        "forall x. forall y. (~P(x, y) | ~S(x))\n",
        name="example",
    )


def _chain(symbol: str, base: Term, length: int) -> List[Term]:
    out, t = [], base
    for _ in range(length):
        out.append(t)
        t = Apply(symbol, (t,))
    return out


def universe_growth_samples(sizes: Iterable[int] = range(2, 7), levels: Iterable[int] = (0, 1, 2)):
    """(|Λ^⟨n⟩|, |Λ|^{n!}) over the unary-function example theory."""
    from core.herbrand_engine import grow_universe, initial_universe
    from core.instantiation import TermSet
    from core.skolemizer import SkolemRegistry, skolemize_theory

    theory = _example_theory()
    registry = SkolemRegistry()
    skolemize_theory(theory, registry)
    levels = list(levels)
    samples = []
    for k in sizes:
        universe = initial_universe(TermSet.of(_chain("g", Apply("c", ()), k)), theory.signature, registry)
        for n in range(max(levels) + 1):
            if n in levels:
                samples.append((len(universe.terms), k ** math.factorial(n)))
            universe = grow_universe(universe)
    return samples


def coded_growth_samples(
    sizes: Iterable[int] = range(2, 7),
    levels: Iterable[int] = (0, 1),
    ceiling: int = DEFAULT_BIT_CEILING,
):
    """(⌜Λ^⟨j⟩⌝, ω₂(⌜Λ⌝)) over the same theory."""
    from core.herbrand_engine import grow_universe, initial_universe
    from core.instantiation import TermSet
    from core.skolemizer import SkolemRegistry, skolemize_theory

    theory = _example_theory()
    registry = SkolemRegistry()
    skolemize_theory(theory, registry)
    scheme = CodingScheme.for_registry(theory.signature, registry, ceiling)
    levels = list(levels)
    samples = []
    for k in sizes:
        base = TermSet.of(_chain("g", Apply("c", ()), k))
        bound = omega_closed(2, scheme.code_set(base.elements).value, ceiling)
        universe = initial_universe(base, theory.signature, registry)
        for j in range(max(levels) + 1):
            if j in levels:
                samples.append((scheme.code_set(universe.terms.elements), bound))
            universe = grow_universe(universe)
    return samples


def example_evaluations(
    sizes: Iterable[int] = range(1, 5),
    levels: Iterable[int] = (0, 1),
    ceiling: int = DEFAULT_BIT_CEILING,
):
    """A scheme and one T-evaluation per chain universe of the example theory."""
    from core.evaluation_engine import find_evaluation
    from core.herbrand_engine import grow_universe, initial_universe
    from core.instantiation import TermSet
    from core.skolemizer import SkolemRegistry, skolemize_theory

    theory = _example_theory()
    registry = SkolemRegistry()
    t_sk = skolemize_theory(theory, registry)
    sig = registry.extend_signature(theory.signature)
    scheme = CodingScheme.for_registry(theory.signature, registry, ceiling)
    levels = list(levels)
    evaluations = []
    for k in sizes:
        universe = initial_universe(TermSet.of(_chain("g", Apply("c", ()), k)), theory.signature, registry)
        for n in range(max(levels) + 1):
            if n in levels:
                p = find_evaluation(t_sk, universe.terms, sig)
                if p is None:
                    raise HerbrandError(f"example theory has no evaluation on {len(universe.terms)} terms")
                evaluations.append(p)
            universe = grow_universe(universe)
    return scheme, evaluations


def omega_identity_checks(ceiling: int = DEFAULT_BIT_CEILING) -> List[Dict[str, object]]:
    """ω₁(exp³(j)) = exp³(j+1) for j in 0..2."""
    rows = []
    for j in range(3):
        left = omega(1, exp_iter(3, j, ceiling).exact, ceiling)
        right = exp_iter(3, j + 1, ceiling)
        rows.append({"j": j, "holds": left == right, "bits": int(right.bits())})
    return rows


def coding_report(seed: int = 0, size: int = 1000, ceiling: int = DEFAULT_BIT_CEILING) -> Dict[str, object]:
    """JSON-ready document: contract ratios, fitted exponents and ω identities."""
    from core.syntax_core import parse_signature

    rng = random.Random(seed)
    sig = parse_signature("signature: 0/0 s/1 +/2 */2 ; <=/2")
    scheme = CodingScheme(sig, (), ceiling)
    corpus = random_terms(rng, sig, size)
    report: Dict[str, object] = {
        "seed": seed,
        "corpus_size": size,
        "contracts": contract_report(scheme, corpus, rng),
        "omega_identities": omega_identity_checks(ceiling),
    }
    agreements = 0
    for _ in range(size):
        m, x = rng.randint(0, 2), rng.randint(0, 1 << 20)
        agreements += omega_closed(m, x, ceiling) == omega_recursive(m, x, ceiling)
    report["omega_agreement"] = {"checked": size, "agreed": agreements}
    growth = p_bound_check(universe_growth_samples(), min_decades=1.0)
    report["universe_growth_exponent"] = growth.exponent
    coded = p_bound_check(coded_growth_samples())
    report["coded_growth_exponent"] = coded.exponent
    example_scheme, evaluations = example_evaluations(ceiling=ceiling)
    bound = p_bound_check(evaluation_bound_samples(example_scheme, evaluations, ceiling))
    report["evaluation_bound_exponent"] = bound.exponent
    return report
