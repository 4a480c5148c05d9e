"""
Command-line front end.

    python -m src validate --algebra mo2.json --mv
    python -m src verify-csm --algebra chain.json --subset s.json --csm product.json --strong
    python -m src coexist --algebra chain.json --subset s.json --csm product.json --out cert.json
    python -m src reverse --algebra b2.json --observable identity.json --subset s.json
    python -m src witness --algebra chain.json --subset s.json --csm joinmeet.json
    python -m src search --algebra mo2.json --subset s.json --budget-nodes 100000

Exit codes: 0 holds, 1 verified violation, 2 input error, 3 inconclusive.
"""

import argparse
import dataclasses
import sys
from typing import List, Optional

from .coexistence_orchestrator import CoexistenceOrchestrator
from .config import CoexistenceConfig
from .models import CommandResult
from .report_formatter import ReportFormatterFactory


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=ReportFormatterFactory().formats, default='text',
                        help='report format written to stdout')
    common.add_argument('--seed', type=int, help='seed for sampled verification')
    common.add_argument('--max-s', type=int, dest='max_s', help='cap on |S| for exhaustive sweeps')
    common.add_argument('--samples', type=int, help='number of sampled pairs above the exhaustive threshold')
    common.add_argument('--budget-nodes', type=int, dest='budget_nodes', help='node budget for search')
    common.add_argument('--log-level', dest='log_level', help='log level for the JSON log on stderr')
    common.add_argument('--result-log', dest='result_log', help='JSON-lines file receiving search results')
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per pipeline."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='coexist',
        description='Verify compatibility support mappings and build coexistence certificates.',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    validate = commands.add_parser('validate', parents=[common], help='check the effect algebra axioms')
    validate.add_argument('--algebra', required=True)
    validate.add_argument('--mv', action='store_true', help='also decide whether the algebra is MV')

    verify = commands.add_parser('verify-csm', parents=[common], help='check conditions (a)-(e*)')
    verify.add_argument('--algebra', required=True)
    verify.add_argument('--subset')
    verify.add_argument('--csm', required=True)
    verify.add_argument('--strong', action='store_true', help='fail unless (e*) holds')

    coexist = commands.add_parser('coexist', parents=[common], help='build the limit observable')
    coexist.add_argument('--algebra', required=True)
    coexist.add_argument('--subset')
    coexist.add_argument('--csm')
    coexist.add_argument('--out', help='certificate file to write')
    coexist.add_argument('--certificate', help='re-check an existing certificate instead')

    reverse = commands.add_parser('reverse', parents=[common], help='CSM from an observable')
    reverse.add_argument('--algebra', required=True)
    reverse.add_argument('--observable', required=True)
    reverse.add_argument('--subset', required=True)
    reverse.add_argument('--out', help='CSM table file to write')
    reverse.add_argument('--all-preimages', action='store_true', dest='all_preimages',
                         help='check every choice of preimages')

    witness = commands.add_parser('witness', parents=[common], help='witness mapping of a CSM')
    witness.add_argument('--algebra', required=True)
    witness.add_argument('--subset')
    witness.add_argument('--csm', required=True)
    witness.add_argument('--witness', help='check this witness mapping instead of deriving one')
    witness.add_argument('--out', help='witness file to write')

    search = commands.add_parser('search', parents=[common], help='backtracking search on a finite algebra')
    search.add_argument('--algebra', required=True)
    search.add_argument('--subset')
    mode = search.add_mutually_exclusive_group()
    mode.add_argument('--witness', action='store_true', help='search for a witness mapping')
    mode.add_argument('--extend', help='witness file; search for a CSM extending it')
    search.add_argument('--strong', action='store_true')
    search.add_argument('--out', help='solution file to write')
    return parser


def _config_from(args: argparse.Namespace) -> CoexistenceConfig:
    overrides = {
        'seed': args.seed,
        'max_s': args.max_s,
        'sample_count': args.samples,
        'search_max_nodes': args.budget_nodes,
        'log_level': args.log_level,
        'result_log_path': args.result_log,
    }
    return dataclasses.replace(
        CoexistenceConfig.from_environment(),
        **{name: value for name, value in overrides.items() if value is not None},
    )


def run(args: argparse.Namespace, orchestrator: CoexistenceOrchestrator) -> CommandResult:
    """
    Dispatch parsed arguments to the matching orchestrator pipeline.

    Args:
        args: Parsed command line
        orchestrator: Orchestrator configured from the same arguments

    Returns:
        The pipeline's CommandResult
    """
    if args.command == 'validate':
        return orchestrator.validate(args.algebra, check_mv=args.mv)
    if args.command == 'verify-csm':
        return orchestrator.verify_csm(args.algebra, args.subset, args.csm, strong=args.strong)
    if args.command == 'coexist':
        return orchestrator.coexist(args.algebra, args.subset, args.csm, args.out, args.certificate)
    if args.command == 'reverse':
        return orchestrator.reverse(args.algebra, args.observable, args.subset, args.out, args.all_preimages)
    if args.command == 'witness':
        return orchestrator.witness(args.algebra, args.subset, args.csm, args.witness, args.out)
    return orchestrator.search(args.algebra, args.subset, strong=args.strong,
                               witness_mode=args.witness, extend_path=args.extend, out_path=args.out)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line entry point.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``

    Returns:
        Process exit code: 0 success, 1 violation, 2 input error, 3 inconclusive
    """
    args = build_parser().parse_args(argv)
    orchestrator = CoexistenceOrchestrator(_config_from(args))
    result = run(args, orchestrator)
    print(ReportFormatterFactory().get_formatter(args.format).format(result))
    return result.exit_code


if __name__ == '__main__':
    sys.exit(main())
