"""Command-line entry point: ``dp-toolkit <command> ...``.

Results go to standard output, diagnostics and errors (one JSON line) to standard error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from .config_manager import ConfigManager, RunConfig
from .constants import LOG_LEVELS, EncodingScope, ExitCode, ExtractionMethod, HornOutcome
from .corpus import run_corpus
from .deduction import assert_valid, check_derivation, depth, node_count
from .exceptions import DerivationCheckError, ToolkitError
from .extract import extract_bm, extract_choice, extract_slash, verify_result
from .horn import RefutationTrace, horn_satisfiability, id_check
from .logger import Stopwatch, get_toolkit_logger, setup_logging
from .machines import load_machine
from .normalize import harrop_normalize
from .oracle import ipc_valid
from .parsers import (
    format_certificate,
    format_derivation,
    parse_clause_file,
    parse_derivation,
    parse_sequent_set,
)
from .slash import SlashEvaluator
from .syntax import ChoiceVector, parse_sequent, spd_enumerate, strengthen
from .tmreduce import (
    DecisionPipeline,
    encode,
    encoding_size,
    jl7_mismatches,
    simulate,
)
from .utils import atomic_write_text, default_certificate_path

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, RunConfig], int]


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with ExitCode.USAGE."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_certificate(cert, name: str, config: RunConfig) -> Path:
    path = default_certificate_path(name, config.output.output_dir, config.output.certificate_suffix)
    return atomic_write_text(path, format_certificate(cert))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check(args: argparse.Namespace, config: RunConfig) -> int:
    d = parse_derivation(_read(args.file), source=args.file)
    report = check_derivation(d)
    get_toolkit_logger().log_check(d.conclusion.text, report.ok, report.path)
    if not report.ok:
        raise DerivationCheckError(f"Invalid derivation: {report.reason}", path=report.path, reason=report.reason)
    print(f"ok {node_count(d)} nodes")
    return ExitCode.OK


def cmd_extract(args: argparse.Namespace, config: RunConfig) -> int:
    d = parse_derivation(_read(args.file), source=args.file)
    if args.choices is not None:
        result = extract_choice(d, ChoiceVector.from_bits(args.choices))
    elif args.method == ExtractionMethod.SLASH.value:
        result = extract_slash(d)
    else:
        result = extract_bm(d)
    if not verify_result(result):
        raise DerivationCheckError("Extraction certificate failed validation", reason="certificate")
    path = _write_certificate(result.certificate, args.file, config)
    print(result.index)
    print(path)
    return ExitCode.OK


def cmd_normalize(args: argparse.Namespace, config: RunConfig) -> int:
    d = assert_valid(parse_derivation(_read(args.file), source=args.file))
    with Stopwatch() as watch:
        result = harrop_normalize(d, fuel=config.engine.fuel, fuel_factor=config.engine.fuel_factor)
    get_toolkit_logger().log_normalization(d.conclusion.text, result.steps, watch.elapsed_ms)
    text = format_derivation(result.derivation)
    print(f"steps {result.steps}")
    if args.output:
        print(atomic_write_text(args.output, text))
    else:
        sys.stdout.write(text)
    return ExitCode.OK


def cmd_slash(args: argparse.Namespace, config: RunConfig) -> int:
    base = parse_sequent_set(_read(args.base), source=args.base)
    s = parse_sequent(args.sequent)
    evaluator = SlashEvaluator(base, s.antecedent)
    holds = evaluator.holds(s.succedent)
    for judgment in evaluator.trace():
        flag = "i.d." if judgment.immediately_derivable else "-"
        print(f"{'holds' if judgment.holds else 'fails'}\t{flag}\t{judgment.formula}")
    print("true" if holds else "false")
    return ExitCode.OK


def cmd_horn(args: argparse.Namespace, config: RunConfig) -> int:
    clauses = parse_clause_file(_read(args.file), source=args.file)
    result = horn_satisfiability(clauses)
    if isinstance(result, RefutationTrace):
        print(HornOutcome.REFUTED.value)
        for step in result.steps:
            print(f"{step.unit}\tclause {step.clause}")
    else:
        print(HornOutcome.SATISFIABLE.value)
    return ExitCode.OK


def cmd_idcheck(args: argparse.Namespace, config: RunConfig) -> int:
    base = parse_sequent_set(_read(args.base), source=args.base)
    target = parse_sequent(args.sequent)
    cd = id_check(base, target)
    if cd is None:
        print("no")
        return ExitCode.OK
    print("yes")
    print(_write_certificate(cd, args.base, config))
    return ExitCode.OK


def cmd_spd(args: argparse.Namespace, config: RunConfig) -> int:
    s = parse_sequent(args.sequent)
    e = spd_enumerate(s.antecedent)
    print(e.count)
    for j, occ in enumerate(e.occurrences):
        print(f"{j}\t{occ}\t{occ.resolve(e.formulas[occ.formula_index])}")
    if args.choices is not None:
        print(strengthen(s.antecedent, e, ChoiceVector.from_bits(args.choices)).text)
    return ExitCode.OK


def cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    verdict = ipc_valid(parse_sequent(args.sequent), config.engine.oracle_cap)
    print("valid" if verdict.valid else "invalid")
    return ExitCode.OK if verdict.valid else ExitCode.USAGE


def cmd_corpus(args: argparse.Namespace, config: RunConfig) -> int:
    summary = run_corpus(config)
    print(json.dumps(summary, indent=2, sort_keys=True, default=str))
    return ExitCode.OK if not summary["failures"] else ExitCode.PRECONDITION


def _scope(args: argparse.Namespace) -> EncodingScope:
    return EncodingScope(args.scope)


def cmd_tm_encode(args: argparse.Namespace, config: RunConfig) -> int:
    m = load_machine(args.machine)
    enc = encode(m, args.n, _scope(args))
    print(f"ell {enc.ell}")
    print(f"formulas {len(enc.delta_big)}")
    print(f"size {encoding_size(enc)}")
    if args.output:
        print(atomic_write_text(args.output, "\n".join(f.text for f in enc.delta_big.ordered()) + "\n"))
    return ExitCode.OK


def cmd_tm_derive(args: argparse.Namespace, config: RunConfig) -> int:
    pipeline = DecisionPipeline(load_machine(args.machine), _scope(args))
    d = assert_valid(pipeline.derivation(args.n))
    print(f"nodes {node_count(d)}")
    print(f"depth {depth(d)}")
    print(f"conclusion {d.succedent}")
    if args.output:
        print(atomic_write_text(args.output, format_derivation(d)))
    return ExitCode.OK


def cmd_tm_decide(args: argparse.Namespace, config: RunConfig) -> int:
    m = load_machine(args.machine)
    pipeline = DecisionPipeline(m, _scope(args))
    word = m.parse_input(args.input)
    verdict, result = pipeline.decide_with_certificate(word)
    print(verdict.value)
    print(_write_certificate(result.certificate, f"{m.name}-{''.join(word)}", config))
    return ExitCode.OK


def cmd_tm_check_jl7(args: argparse.Namespace, config: RunConfig) -> int:
    m = load_machine(args.machine)
    mismatches = jl7_mismatches(m, args.input, encode(m, len(m.parse_input(args.input)), _scope(args)))
    for mm in mismatches:
        print(f"mismatch P({mm.symbol},{mm.position},{mm.time}) derivable={mm.derivable} actual={mm.actual}")
    print("ok" if not mismatches else "failed")
    return ExitCode.OK if not mismatches else ExitCode.PRECONDITION


def cmd_tm_simulate(args: argparse.Namespace, config: RunConfig) -> int:
    run = simulate(load_machine(args.machine), args.input)
    print(run.render(run.ell))
    print(run.verdict.value)
    return ExitCode.OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="dp-toolkit", description="Disjunction-property toolkit for NJp derivations")
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--seed", type=int, help="Seed for corpus generation")
    parser.add_argument("--fuel", type=int, help="Normalization fuel (default 10*|d|^2)")
    parser.add_argument("--oracle-cap", type=int, help="Connective limit for the validity oracle")
    parser.add_argument("--output-dir", help="Directory for certificates")
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = commands.add_parser("check", help="Check a derivation file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_check)

    p = commands.add_parser("extract", help="Extract a disjunct with a certificate")
    p.add_argument("--method", choices=["bm", "slash"], default="bm")
    p.add_argument("--choices", help="Choice vector bits for the strictly positive disjunctions")
    p.add_argument("file")
    p.set_defaults(handler=cmd_extract)

    p = commands.add_parser("normalize", help="Harrop-normalize a derivation")
    p.add_argument("--output", help="Write the normalized derivation here")
    p.add_argument("file")
    p.set_defaults(handler=cmd_normalize)

    p = commands.add_parser("slash", help="Evaluate S:Γ|α for a base file and sequent Γ => α")
    p.add_argument("base")
    p.add_argument("sequent")
    p.set_defaults(handler=cmd_slash)

    p = commands.add_parser("horn", help="Horn satisfiability of a clause file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_horn)

    p = commands.add_parser("idcheck", help="Immediate derivability of a sequent from a base file")
    p.add_argument("base")
    p.add_argument("sequent")
    p.set_defaults(handler=cmd_idcheck)

    p = commands.add_parser("spd", help="Strictly positive disjunctions of an antecedent")
    p.add_argument("--choices")
    p.add_argument("sequent")
    p.set_defaults(handler=cmd_spd)

    p = commands.add_parser("oracle", help="Intuitionistic validity (exit 0 valid, 1 invalid)")
    p.add_argument("sequent")
    p.set_defaults(handler=cmd_oracle)

    p = commands.add_parser("corpus", help="Corpus operations")
    corpus_commands = p.add_subparsers(dest="corpus_command", required=True, parser_class=_ArgumentParser)
    run = corpus_commands.add_parser("run", help="Run the corpus cross-checks")
    run.set_defaults(handler=cmd_corpus)

    p = commands.add_parser("tm", help="Turing machine reduction")
    tm_commands = p.add_subparsers(dest="tm_command", required=True, parser_class=_ArgumentParser)
    tm_handlers: Dict[str, Handler] = {
        "encode": cmd_tm_encode,
        "derive": cmd_tm_derive,
        "decide": cmd_tm_decide,
        "check-jl7": cmd_tm_check_jl7,
        "simulate": cmd_tm_simulate,
    }
    for name, handler in tm_handlers.items():
        sub = tm_commands.add_parser(name)
        sub.add_argument("--machine", required=True, help="Built-in machine (unit, parity) or description file")
        sub.add_argument(
            "--scope",
            choices=[s.value for s in EncodingScope],
            default=EncodingScope.REACHABLE.value,
            help="Symbol domains per cell: reachable (default) or full. Full grows past cubic in n "
            "and is practical only for tiny n (unit up to 3; parity runs out of memory)",
        )
        if name in ("encode", "derive"):
            sub.add_argument("--n", type=int, required=True, help="Input length")
            sub.add_argument("--output")
        else:
            sub.add_argument("--input", required=True)
        sub.set_defaults(handler=handler)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        manager = ConfigManager(args.config).load_config()
        manager.apply_overrides(
            fuel=args.fuel,
            oracle_cap=args.oracle_cap,
            seed=args.seed,
            output_dir=args.output_dir,
            log_level=args.log_level,
        )
        options = {k: v for k, v in vars(args).items() if k not in ("command", "handler")}
        config = manager.to_run_config(args.command, **options)
        setup_logging(config.logging)
        return int(args.handler(args, config))
    except ToolkitError as e:
        get_toolkit_logger().log_error(args.command, e)
        print(json.dumps(e.to_dict(), default=str), file=sys.stderr)
        return int(e.exit_code)
    except OSError as e:
        print(json.dumps({"error": "IO_ERROR", "message": str(e)}), file=sys.stderr)
        return int(ExitCode.USAGE)


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
