"""
Command-line front end.

Each subcommand reads JSON inputs, runs one handler and writes a single JSON
document to standard output with sorted keys. Logs go to standard error.
"""

import argparse
import json
import sys
from typing import Dict, List, Optional, TextIO, Type

from handlers.amice_handler import (
    AmiceHandler, BaseChangeHandler, BernoulliHandler, MomentsHandler, PairingHandler,
)
from handlers.base_handler import BaseCommandHandler
from handlers.error_handler import EXIT_SCHEMA
from handlers.hopf_handler import HopfVerifyHandler
from handlers.mahler_handler import EvaluateHandler, MahlerExpandHandler
from handlers.series_handler import NormHandler
from handlers.weights_handler import MembershipHandler, NuclearityHandler

HANDLERS: Dict[str, Type[BaseCommandHandler]] = {
    handler.command_name: handler for handler in (
        NuclearityHandler, MembershipHandler, MahlerExpandHandler, EvaluateHandler,
        PairingHandler, HopfVerifyHandler, AmiceHandler, MomentsHandler,
        BernoulliHandler, BaseChangeHandler, NormHandler,
    )
}


class _ArgumentParser(argparse.ArgumentParser):
    """Raise instead of exiting so ``run`` can report usage errors as JSON."""

    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='amice-kit',
                             description="Exact computations for the global Amice duality.")
    parser.add_argument('--pretty', action='store_true', help="indent the JSON output")
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

    nuclearity = commands.add_parser('nuclearity', help="is every row inclusion nuclear")
    nuclearity.add_argument('--matrix', required=True)

    member = commands.add_parser('membership', help="classify a series against lambda/kappa")
    member.add_argument('--matrix', required=True)
    member.add_argument('--series', required=True)
    member.add_argument('--space', choices=['lambda', 'kappa'], default='lambda')
    member.add_argument('--test', choices=['l1', 'linf'], default='l1')

    expand = commands.add_parser('mahler-expand', help="Mahler coefficients of a table")
    expand.add_argument('--table', required=True)

    evaluate = commands.add_parser('evaluate', help="value of a Mahler series")
    evaluate.add_argument('--series', required=True)
    point = evaluate.add_mutually_exclusive_group(required=True)
    point.add_argument('--at', type=int, help="integer point; negative points use f(-n)")
    point.add_argument('--padic', help="p-adic integer point as a rational string")
    evaluate.add_argument('--precision', type=int, default=None)

    pair = commands.add_parser('pairing', help="<xi, f>")
    pair.add_argument('--xi', required=True)
    pair.add_argument('--f', required=True)

    hopf = commands.add_parser('hopf-verify', help="check the Hopf axioms")
    hopf.add_argument('--model', required=True)
    hopf.add_argument('--order', type=int, required=True)

    amice = commands.add_parser('amice', help="Amice transform of a distribution")
    source = amice.add_mutually_exclusive_group(required=True)
    source.add_argument('--moments')
    source.add_argument('--dirac')
    source.add_argument('--kubota-leopoldt', action='store_true')
    amice.add_argument('--order', type=int, default=None)
    amice.add_argument('--model', default='Q-na')

    moments = commands.add_parser('moments', help="power moments of a distribution")
    moments.add_argument('--moments', required=True)
    moments.add_argument('--n', type=int, required=True)

    bernoulli = commands.add_parser('bernoulli', help="Bernoulli number B_n")
    bernoulli.add_argument('--n', type=int, required=True)

    change = commands.add_parser('base-change', help="map a series along a ring morphism")
    change.add_argument('--series', required=True)
    change.add_argument('--morphism', required=True)
    change.add_argument('--pair-with', default=None)

    norm = commands.add_parser('norm', help="ps or bs norm of a series")
    norm.add_argument('--series', required=True)
    norm.add_argument('--rho', required=True)
    return parser


def _write(stdout: TextIO, payload: dict, pretty: bool):
    stdout.write(json.dumps(payload, sort_keys=True, indent=2 if pretty else None))
    stdout.write('\n')


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse ``argv``, run the command, write its JSON result; returns the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValueError as e:
        _write(stdout, {'error': str(e), 'error_type': 'UsageError', 'field': None}, False)
        return EXIT_SCHEMA

    if args.command == 'amice' and not args.moments and args.order is None:
        _write(stdout, {'error': "--order is required with --dirac or --kubota-leopoldt",
                        'error_type': 'UsageError', 'field': 'order'}, args.pretty)
        return EXIT_SCHEMA

    code, payload = HANDLERS[args.command]().handle(args)
    _write(stdout, payload, args.pretty)
    return code
