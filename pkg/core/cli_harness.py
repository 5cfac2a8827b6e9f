# -*- coding: utf-8 -*-
"""Command-line front end and fixture regression runner."""

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from core.config import Settings, load_settings
from core.constants import APP_NAME, APP_VERSION, EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, FRAKTUR_ALIASES
from core.errors import BudgetExceededError, FixtureError, HerbrandError, SignatureError
from core.evaluation_engine import (
    SearchMode,
    atoms_over,
    brute_force_evaluation,
    find_evaluation,
    force_check,
    is_evaluation,
    is_T_evaluation,
    load_evaluation,
    violated_instances,
)
from core.goedel_coding import coding_report
from core.herbrand_engine import (
    check_certificate,
    dump_certificate,
    grow_universe,
    initial_universe,
    load_certificate,
    prove,
)
from core.instantiation import TermSet, available_instances, load_term_set
from core.normalizer import nnf, rnnf
from core.skolemizer import SkolemizedFormula, SkolemRegistry, skolemize, skolemize_theory
from core.syntax_core import (
    Formula,
    Not,
    Signature,
    Theory,
    const,
    load_theory,
    parse_formula,
    parse_signature,
    render_formula,
)

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_KINDS = ("skolemize", "check-eval", "find-eval", "force", "prove")


# ---------------------------------------------------------------------------
# Problems: a theory, its Skolemization and an optional goal
# ---------------------------------------------------------------------------

@dataclass
class Problem:
    theory: Theory
    registry: SkolemRegistry
    t_sk: List[SkolemizedFormula]
    signature: Signature
    goal: Optional[Formula] = None


def load_problem(theory_path: Union[str, Path], goal: Optional[str] = None, negate_goal: bool = False) -> Problem:
    """Skolemize the theory; with negate_goal the Skolemized ¬goal joins T^Sk."""
    theory = load_theory(theory_path)
    registry = SkolemRegistry()
    t_sk = skolemize_theory(theory, registry)
    sig = registry.extend_signature(theory.signature)
    parsed = parse_formula(goal, sig) if goal else None
    if parsed is not None and negate_goal:
        t_sk = t_sk + [skolemize(Not(parsed), registry, label="negated goal")]
        sig = registry.extend_signature(theory.signature)
    return Problem(theory, registry, t_sk, sig, parsed)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str
    theory: Path
    expect: str
    goal: Optional[str] = None
    lam: Optional[Path] = None
    evaluation: Optional[Path] = None
    seed: Optional[Path] = None
    minimal: Optional[Path] = None
    violated: Optional[str] = None
    max_level: Optional[int] = None
    provenance: Tuple[str, ...] = ()


@dataclass(frozen=True)
class FixtureReport:
    name: str
    kind: str
    expected: str
    actual: str
    status: str
    seconds: float
    detail: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


_PATH_KEYS = {"theory", "lambda", "evaluation", "seed", "minimal"}


def parse_fixture(text: str, name: str, base_dir: Path) -> Fixture:
    values: Dict[str, str] = {}
    provenance: List[str] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            provenance.append(line.lstrip("#").strip())
            continue
        key, colon, value = line.partition(":")
        if not colon:
            raise FixtureError(f"{name}: line {number} is not 'key: value'")
        values[key.strip()] = value.strip()
    for required in ("kind", "theory", "expect"):
        if required not in values:
            raise FixtureError(f"{name}: missing '{required}'")
    if values["kind"] not in FIXTURE_KINDS:
        raise FixtureError(f"{name}: unknown kind {values['kind']!r}")
    paths = {k: base_dir / values[k] for k in _PATH_KEYS if k in values}
    try:
        max_level = int(values["max_level"]) if "max_level" in values else None
    except ValueError:
        raise FixtureError(f"{name}: max_level must be an integer") from None
    return Fixture(
        name=name,
        kind=values["kind"],
        theory=paths["theory"],
        expect=values["expect"],
        goal=values.get("goal"),
        lam=paths.get("lambda"),
        evaluation=paths.get("evaluation"),
        seed=paths.get("seed"),
        minimal=paths.get("minimal"),
        violated=values.get("violated"),
        max_level=max_level,
        provenance=tuple(provenance),
    )


def load_fixture(path: Union[str, Path]) -> Fixture:
    path = Path(path)
    return parse_fixture(path.read_text(encoding="utf-8"), path.stem, path.parent)


def fixture_paths(fixtures_dir: Path = FIXTURES_DIR) -> List[Path]:
    return sorted(fixtures_dir.glob("*.fixture"), key=lambda p: p.stem)


def _require(value, what: str, fixture: Fixture):
    if value is None:
        raise FixtureError(f"{fixture.name}: kind {fixture.kind} needs '{what}'")
    return value


def _execute(fixture: Fixture, settings: Settings) -> Tuple[str, List[str]]:
    """(actual verdict, detail lines) for one fixture."""
    detail: List[str] = []
    if fixture.kind == "skolemize":
        problem = load_problem(fixture.theory)
        detail = [str(sf) for sf in problem.t_sk]
        return str(len(problem.registry)), detail

    if fixture.kind == "prove":
        problem = load_problem(fixture.theory)
        goal = parse_formula(_require(fixture.goal, "goal", fixture), problem.theory.signature)
        seeds = [fixture.seed.read_text(encoding="utf-8")] if fixture.seed else []
        result = prove(
            problem.theory,
            goal,
            max_level=settings.max_level if fixture.max_level is None else fixture.max_level,
            seeds=seeds,
            workers=settings.workers,
            budget_atoms=settings.budget_atoms,
            budget_terms=settings.budget_terms,
            budget_instances=settings.budget_instances,
            brute_cap=settings.brute_cap,
        )
        if not result.proved:
            return result.verdict.value, [result.reason]
        terms = result.certificate.terms
        detail = [f"refuting set from {result.candidate}: {len(terms)} terms"]
        detail += [line for line in terms.render_lines().splitlines()]
        if fixture.minimal is not None:
            sig = result.registry.extend_signature(problem.theory.signature)
            if load_term_set(fixture.minimal, sig).elements != terms.elements:
                return "PROVED (different refuting set)", detail
        check = check_certificate(result.certificate, settings.brute_cap)
        if not check.ok:
            return "PROVED (certificate rejected)", detail + [check.reason]
        return result.verdict.value, detail

    negate = fixture.kind == "find-eval"
    problem = load_problem(fixture.theory, fixture.goal, negate_goal=negate)
    lam = load_term_set(_require(fixture.lam, "lambda", fixture), problem.signature)

    if fixture.kind == "check-eval":
        table = atoms_over(lam, problem.signature, settings.budget_atoms)
        p = load_evaluation(_require(fixture.evaluation, "evaluation", fixture), table)
        violated = [render_formula(inst.ground) for inst in violated_instances(p, problem.t_sk, lam)]
        detail = [f"violated: {v}" for v in violated]
        accepted = is_evaluation(p) and is_T_evaluation(p, problem.t_sk, lam, settings.budget_instances)
        if fixture.violated is not None and fixture.violated not in violated:
            return "REJECTED (instance not reported)", detail
        return ("ACCEPTED" if accepted else "REJECTED"), detail

    if fixture.kind == "find-eval":
        found = find_evaluation(
            problem.t_sk, lam, problem.signature,
            budget_atoms=settings.budget_atoms, budget_instances=settings.budget_instances,
        )
        actual = "SAT" if found is not None else "UNSAT"
        table = atoms_over(lam, problem.signature, settings.budget_atoms)
        if len(table) <= settings.brute_cap:
            oracle = brute_force_evaluation(problem.t_sk, lam, problem.signature, cap=settings.brute_cap)
            oracle_verdict = "SAT" if oracle is not None else "UNSAT"
            detail.append(f"oracle: {oracle_verdict} over {len(table)} atoms")
            if oracle_verdict != actual:
                return f"{actual} (oracle says {oracle_verdict})", detail
        if found is not None:
            detail += found.render().splitlines()
        return actual, detail

    goal = _require(problem.goal, "goal", fixture)
    result = force_check(problem.t_sk, lam, problem.signature, goal,
                         settings.budget_atoms, settings.budget_instances)
    if result.counterexample is not None:
        detail = result.counterexample.render().splitlines()
    return result.verdict.value, detail


def run_fixture(fixture: Union[Fixture, str], settings: Optional[Settings] = None,
                fixtures_dir: Path = FIXTURES_DIR) -> FixtureReport:
    """Run one fixture and compare against its expected verdict."""
    settings = settings or Settings()
    if isinstance(fixture, str):
        path = fixtures_dir / f"{fixture}.fixture"
        if not path.exists():
            raise FixtureError(f"no fixture named {fixture!r}")
        fixture = load_fixture(path)
    started = time.perf_counter()
    try:
        actual, detail = _execute(fixture, settings)
        status = "pass" if actual == fixture.expect else "fail"
    except BudgetExceededError as exc:
        actual, detail, status = "BUDGET", [str(exc)], "budget"
    elapsed = time.perf_counter() - started
    logger.info("fixture %s: %s (%.2fs)", fixture.name, status, elapsed)
    return FixtureReport(fixture.name, fixture.kind, fixture.expect, actual, status, round(elapsed, 3), detail)


def run_all(settings: Optional[Settings] = None, fixtures_dir: Path = FIXTURES_DIR,
            names: Optional[Sequence[str]] = None) -> List[FixtureReport]:
    """Run fixtures concurrently; the report list is ordered by fixture name."""
    settings = settings or Settings()
    fixtures = [load_fixture(p) for p in fixture_paths(fixtures_dir)]
    if names:
        known = {f.name for f in fixtures}
        missing = [n for n in names if n not in known]
        if missing:
            raise FixtureError(f"no fixture named {missing[0]!r}")
        fixtures = [f for f in fixtures if f.name in names]
    with ThreadPoolExecutor(max_workers=max(1, settings.workers)) as pool:
        reports = list(pool.map(lambda f: run_fixture(f, settings, fixtures_dir), fixtures))
    return sorted(reports, key=lambda r: r.name)


def summary_exit_code(reports: Sequence[FixtureReport]) -> int:
    if any(r.status == "fail" for r in reports):
        return EXIT_MISMATCH
    if any(r.status == "budget" for r in reports):
        return EXIT_BUDGET
    return EXIT_OK


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(text)


def cmd_normalize(args, settings: Settings) -> int:
    if args.theory:
        sig = load_theory(args.theory).signature
    else:
        sig = parse_signature(args.signature)
    f = parse_formula(args.formula, sig, variables=args.free or ())
    payload = {"input": render_formula(f), "nnf": render_formula(nnf(f)), "rnnf": render_formula(rnnf(f))}
    _emit(args, payload, "\n".join(f"{k}: {v}" for k, v in payload.items()))
    return EXIT_OK


def _parse_aliases(pairs: Optional[Sequence[str]]) -> Dict[str, str]:
    """`sk1=p` pairs; short names listed in FRAKTUR_ALIASES become their display letter."""
    aliases: Dict[str, str] = {}
    for pair in pairs or ():
        name, sep, shown = (part.strip() for part in pair.partition("="))
        if not sep or not name or not shown:
            raise HerbrandError(f"alias must look like sk1=p, got {pair!r}")
        aliases[name] = FRAKTUR_ALIASES.get(shown, shown)
    return aliases


def cmd_skolemize(args, settings: Settings) -> int:
    problem = load_problem(args.theory, args.goal, negate_goal=bool(args.goal))
    registry = problem.registry
    for name, shown in _parse_aliases(args.alias).items():
        if name not in registry:
            raise SignatureError(f"no Skolem symbol named {name!r}")
        registry.set_alias(name, shown)
    aliases = registry.aliases
    rows = registry.table()
    lines = [f"{sf.label}: {render_formula(sf.open, aliases)}" for sf in problem.t_sk]
    lines.append("")
    lines += [registry.display(r["symbol"]) for r in rows]
    formulas = [
        {"label": sf.label, "open": str(sf), "shown": render_formula(sf.open, aliases)} for sf in problem.t_sk
    ]
    _emit(args, {"formulas": formulas, "registry": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_instances(args, settings: Settings) -> int:
    problem = load_problem(args.theory, args.goal, negate_goal=bool(args.goal))
    lam = load_term_set(args.lam, problem.signature)
    instances = available_instances(problem.t_sk, lam, settings.budget_instances)
    _emit(args, [inst.describe() for inst in instances], "\n".join(inst.describe() for inst in instances))
    return EXIT_OK


def cmd_find_eval(args, settings: Settings) -> int:
    problem = load_problem(args.theory, args.goal, negate_goal=bool(args.goal))
    lam = load_term_set(args.lam, problem.signature)
    p = find_evaluation(problem.t_sk, lam, problem.signature, mode=args.mode,
                        budget_atoms=settings.budget_atoms, budget_instances=settings.budget_instances,
                        brute_cap=settings.brute_cap)
    if p is None:
        _emit(args, {"verdict": "UNSAT"}, "NONE")
    else:
        _emit(args, {"verdict": "SAT", "true_atoms": p.render().splitlines()}, p.render())
    return EXIT_OK


def cmd_check_eval(args, settings: Settings) -> int:
    problem = load_problem(args.theory, args.goal, negate_goal=bool(args.goal))
    lam = load_term_set(args.lam, problem.signature)
    table = atoms_over(lam, problem.signature, settings.budget_atoms)
    p = load_evaluation(args.eval, table)
    structural = is_evaluation(p)
    violated = [render_formula(inst.ground) for inst in violated_instances(p, problem.t_sk, lam)]
    verdict = structural and not violated
    payload = {"evaluation": structural, "t_evaluation": verdict, "violated": violated}
    text = ["T-evaluation" if verdict else "not a T-evaluation"]
    if not structural:
        text.append("equality conditions fail")
    text += [f"violated: {v}" for v in violated]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK if verdict else EXIT_MISMATCH


def cmd_force(args, settings: Settings) -> int:
    problem = load_problem(args.theory, args.goal)
    lam = load_term_set(args.lam, problem.signature)
    result = force_check(problem.t_sk, lam, problem.signature, problem.goal,
                         settings.budget_atoms, settings.budget_instances)
    counter = result.counterexample.render().splitlines() if result.counterexample else []
    _emit(args, {"verdict": result.verdict.value, "counterexample": counter},
          "\n".join([result.verdict.value] + counter))
    return EXIT_OK


def cmd_prove(args, settings: Settings) -> int:
    theory = load_theory(args.theory)
    goal = parse_formula(args.goal, theory.signature)
    seeds = [Path(p).read_text(encoding="utf-8") for p in args.seed_lambda or ()]
    result = prove(
        theory, goal,
        max_level=settings.max_level if args.max_level is None else args.max_level,
        seeds=seeds, mode=args.mode, workers=settings.workers, minimise=not args.no_minimise,
        budget_atoms=settings.budget_atoms, budget_terms=settings.budget_terms,
        budget_instances=settings.budget_instances, brute_cap=settings.brute_cap,
    )
    payload = {"verdict": result.verdict.value, "levels_tried": result.levels_tried,
               "candidate": result.candidate, "reason": result.reason}
    lines = [result.verdict.value]
    if result.proved:
        payload["terms"] = result.certificate.terms.render_lines().splitlines()
        lines += [f"refuting set from {result.candidate}:"] + payload["terms"]
        if args.certificate:
            Path(args.certificate).write_text(dump_certificate(result.certificate), encoding="utf-8")
            lines.append(f"certificate written to {args.certificate}")
    else:
        lines.append(result.reason)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if result.proved else EXIT_BUDGET


def cmd_check_cert(args, settings: Settings) -> int:
    cert = load_certificate(Path(args.file).read_text(encoding="utf-8"))
    check = check_certificate(cert, settings.brute_cap)
    _emit(args, asdict(check), ("OK: " if check.ok else "REJECTED: ") + check.reason)
    return EXIT_OK if check.ok else EXIT_MISMATCH


def cmd_universe(args, settings: Settings) -> int:
    problem = load_problem(args.theory, args.goal, negate_goal=bool(args.goal))
    if args.base:
        base = load_term_set(args.base, problem.signature)
    else:
        base = TermSet.of(const(c) for c in problem.theory.signature.constants)
    universe = initial_universe(base, problem.theory.signature, problem.registry)
    sizes = [len(universe.terms)]
    for _ in range(args.levels):
        universe = grow_universe(universe, budget_terms=settings.budget_terms)
        sizes.append(len(universe.terms))
    text = "\n".join(f"level {k}: {n} terms" for k, n in enumerate(sizes))
    if args.show:
        text += "\n" + universe.terms.render_lines().rstrip("\n")
    _emit(args, {"sizes": sizes}, text)
    return EXIT_OK


def cmd_coding_report(args, settings: Settings) -> int:
    report = coding_report(settings.seed, args.size, settings.bit_ceiling)
    print(json.dumps(report, ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_fixtures(args, settings: Settings) -> int:
    fixtures_dir = Path(args.dir) if args.dir else FIXTURES_DIR
    reports = run_all(settings, fixtures_dir, args.name)
    if args.json:
        print(json.dumps([asdict(r) for r in reports], ensure_ascii=False, indent=2))
    else:
        for r in reports:
            print(f"{r.status.upper():6} {r.name}  expected {r.expected}, got {r.actual}  ({r.seconds:.2f}s)")
            if not r.passed:
                for line in r.detail:
                    print(f"       {line}")
    return summary_exit_code(reports)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="herbrand_workbench", description=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--budget-atoms", type=int)
    parser.add_argument("--budget-terms", type=int)
    parser.add_argument("--bit-ceiling", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--json", action="store_true", help="JSON output")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="NNF and RNNF of a formula")
    p.add_argument("--formula", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--theory")
    group.add_argument("--signature", help="e.g. 'signature: c/0 f/1 ; P/1'")
    p.add_argument("--free", nargs="*", help="free variables allowed in the formula")
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("skolemize", help="open Skolem forms and the registry table")
    p.add_argument("--theory", required=True)
    p.add_argument("--goal")
    p.add_argument("--alias", action="append", help="display name for a Skolem symbol, e.g. sk1=p")
    p.set_defaults(handler=cmd_skolemize)

    for name, handler, extra in (
        ("instances", cmd_instances, ()),
        ("find-eval", cmd_find_eval, ("mode",)),
        ("check-eval", cmd_check_eval, ("eval",)),
    ):
        p = sub.add_parser(name)
        p.add_argument("--theory", required=True)
        p.add_argument("--lambda", dest="lam", required=True)
        p.add_argument("--goal", help="sentence whose negation joins the theory")
        if "mode" in extra:
            p.add_argument("--mode", choices=[m.value for m in SearchMode], default=SearchMode.SAT.value)
        if "eval" in extra:
            p.add_argument("--eval", required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser("force", help="is a ground goal forced on Λ")
    p.add_argument("--theory", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--goal", required=True)
    p.set_defaults(handler=cmd_force)

    p = sub.add_parser("prove", help="Herbrand proof search")
    p.add_argument("--theory", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--max-level", type=int)
    p.add_argument("--seed-lambda", action="append")
    p.add_argument("--mode", choices=[m.value for m in SearchMode], default=SearchMode.SAT.value)
    p.add_argument("--no-minimise", action="store_true")
    p.add_argument("--certificate", help="write the certificate to this file")
    p.set_defaults(handler=cmd_prove)

    p = sub.add_parser("check-cert", help="replay a proof certificate")
    p.add_argument("file")
    p.set_defaults(handler=cmd_check_cert)

    p = sub.add_parser("universe", help="sizes of Λ^⟨k⟩")
    p.add_argument("--theory", required=True)
    p.add_argument("--base")
    p.add_argument("--goal")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--show", action="store_true")
    p.set_defaults(handler=cmd_universe)

    p = sub.add_parser("coding-report", help="JSON report of the coding contracts")
    p.add_argument("--size", type=int, default=1000)
    p.set_defaults(handler=cmd_coding_report)

    p = sub.add_parser("fixtures", help="fixture corpus")
    fixtures_sub = p.add_subparsers(dest="action", required=True)
    run = fixtures_sub.add_parser("run")
    run.add_argument("--name", action="append")
    run.add_argument("--dir")
    run.set_defaults(handler=cmd_fixtures)
    return parser


def _apply_overrides(settings: Settings, args) -> Settings:
    overrides = {
        key: getattr(args, key)
        for key in ("budget_atoms", "budget_terms", "bit_ceiling", "seed", "workers")
        if getattr(args, key) is not None
    }
    if args.verbose:
        overrides["log_level"] = "INFO" if args.verbose == 1 else "DEBUG"
    return replace(settings, **overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _apply_overrides(load_settings(), args)
    except HerbrandError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    logging.basicConfig(level=settings.log_level, format="[%(levelname)s] %(message)s", stream=sys.stderr)
    try:
        return args.handler(args, settings)
    except BudgetExceededError as exc:
        logger.error("%s", exc)
        return EXIT_BUDGET
    except (HerbrandError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_MISMATCH
