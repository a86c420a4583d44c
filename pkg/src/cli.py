"""
Command-line front end.

Exit status: 0 when an allocation exists or the checked allocation satisfies
its mode, 3 when none exists or it does not, 1 on usage or data errors.
Results go to stdout (or ``--out``) as JSON; logs go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from .brute_force import exists_by_enumeration
from .config import Settings, configure_logging, load_settings
from .construction import solve, verify
from .decision import (
    PLUS_Z,
    PROPORTIONAL,
    STRONG,
    decide_general,
    decide_hungry_equal,
    decide_plus_z,
    decide_proportional,
    hungry_equal_budget,
    query_lower_bound,
    subset_dp_budget,
)
from .errors import CakeError
from .families import FAMILIES, FAMILY_ALIASES, VARIANTS, FamilyParams, generate
from .oracle import Oracle
from .serialization import (
    allocation_to_dict,
    decision_to_dict,
    dumps,
    fixture_to_dict,
    format_rational,
    load_allocation,
    load_instance,
    parse_rational,
    report_to_dict,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except CakeError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _mode(args) -> str:
    if getattr(args, 'proportional', False):
        return PROPORTIONAL
    if getattr(args, 'plus_z', None) is not None:
        return PLUS_Z
    return STRONG


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_decide(args, settings: Settings) -> int:
    instance = load_instance(args.instance)
    oracle = Oracle(instance)
    mode = _mode(args)
    if args.hungry_equal:
        decision = decide_hungry_equal(oracle)
    elif mode == PLUS_Z:
        decision = decide_plus_z(oracle, args.plus_z)
    elif mode == PROPORTIONAL:
        decision = decide_proportional(oracle)
    else:
        decision = decide_general(oracle)
    data = decision_to_dict(decision)
    if args.cross_check:
        expected = exists_by_enumeration(instance, mode, args.plus_z,
                                         cap=settings.enumeration_cap)
        data["cross_check"] = {"agrees": expected == decision.exists}
        if expected != decision.exists:
            logger.error(f"decision {decision.exists} disagrees with enumeration {expected}")
            _emit(args, dumps(data))
            return EXIT_ERROR
    _emit(args, dumps(data))
    return EXIT_OK if decision.exists else EXIT_NO


def cmd_solve(args, settings: Settings) -> int:
    instance = load_instance(args.instance)
    oracle = Oracle(instance)
    mode = _mode(args)
    decision, allocation = solve(oracle, mode, args.plus_z, hungry_equal=args.hungry_equal)
    data = {"decision": decision_to_dict(decision)}
    if allocation is None:
        _emit(args, dumps(data))
        return EXIT_NO
    report = verify(instance, allocation, mode, args.plus_z)
    data["allocation"] = allocation_to_dict(allocation, report)
    data["report"] = report_to_dict(report)
    if not report.satisfied:
        logger.error("constructed allocation failed verification")
        _emit(args, dumps(data))
        return EXIT_ERROR
    _emit(args, dumps(data))
    return EXIT_OK


def cmd_gen(args, settings: Settings) -> int:
    perturb = None
    if args.agent is not None or args.subset is not None:
        perturb = (args.agent or 0, args.subset or 0)
    params = FamilyParams(
        family=args.family,
        n=args.n,
        variant=args.variant,
        k=args.k,
        M=args.M,
        z=args.z,
        perturb_target=perturb,
        delta=args.delta,
        seed=settings.seed if args.seed is None else args.seed,
    )
    fixture = generate(
        params,
        max_doublings=settings.two_part_max_doublings,
        max_segments=settings.max_segments,
        max_denominator=settings.max_denominator,
        zero_probability=settings.zero_probability,
    )
    _emit(args, dumps(fixture_to_dict(fixture)))
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    instance = load_instance(args.instance)
    allocation = load_allocation(args.allocation)
    report = verify(instance, allocation, _mode(args), args.plus_z)
    _emit(args, dumps(report_to_dict(report)))
    if not report.structural:
        logger.error("allocation is not a connected division of the whole cake")
        return EXIT_ERROR
    return EXIT_OK if report.satisfied else EXIT_NO


def cmd_bounds(args, settings: Settings) -> int:
    instance = load_instance(args.instance)
    n = instance.n
    hungry_equal = instance.all_hungry() and instance.equal_entitlements()
    data = {
        "n": n,
        "lower_bound": format_rational(query_lower_bound(instance.entitlements)),
        "budgets": {
            "hungry_equal": hungry_equal_budget(n) if hungry_equal else None,
            "subset_dp": subset_dp_budget(n),
        },
    }
    if args.measure:
        measured = {"subset_dp": decide_general(Oracle(instance)).queries.total()}
        if hungry_equal:
            measured["hungry_equal"] = decide_hungry_equal(Oracle(instance)).queries.total()
        data["measured"] = measured

    if not args.csv:
        _emit(args, dumps(data))
        return EXIT_OK
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(["n", "lower_bound", "hungry_equal_budget", "subset_dp_budget",
                     "measured_hungry_equal", "measured_subset_dp"])
    measured = data.get("measured", {})
    writer.writerow([
        n,
        data["lower_bound"],
        "" if data["budgets"]["hungry_equal"] is None else data["budgets"]["hungry_equal"],
        data["budgets"]["subset_dp"],
        measured.get("hungry_equal", ""),
        measured.get("subset_dp", ""),
    ])
    _emit(args, buffer.getvalue())
    return EXIT_OK


def _mode_flags(parser: argparse.ArgumentParser, hungry_equal: bool = True) -> None:
    group = parser.add_mutually_exclusive_group()
    if hungry_equal:
        group.add_argument('--hungry-equal', action='store_true',
                           help='use the hungry, equal-entitlement algorithm')
    else:
        group.add_argument('--strong', action='store_true',
                           help='require every agent strictly above its entitlement (default)')
    group.add_argument('--proportional', action='store_true',
                       help='connected proportional instead of strongly-proportional')
    group.add_argument('--plus-z', type=_rational, metavar='Q',
                       help='require every agent strictly above entitlement + Q')


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--config', help='YAML configuration file')
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    common.add_argument('--out', help='write the result here instead of stdout')

    parser = _Parser(prog='strongprop',
                     description='Connected strongly-proportional cake cutting')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    decide = commands.add_parser('decide', parents=[common], help='decide existence')
    decide.add_argument('instance')
    _mode_flags(decide)
    decide.add_argument('--cross-check', action='store_true',
                        help='confirm the answer by enumerating all orders')
    decide.set_defaults(handler=cmd_decide)

    solve_cmd = commands.add_parser('solve', parents=[common],
                                    help='decide and construct an allocation')
    solve_cmd.add_argument('instance')
    _mode_flags(solve_cmd)
    solve_cmd.set_defaults(handler=cmd_solve)

    gen = commands.add_parser('gen', parents=[common], help='generate an instance family')
    gen.add_argument('--family', choices=FAMILIES + tuple(FAMILY_ALIASES), required=True)
    gen.add_argument('--n', type=int, default=3)
    gen.add_argument('--k', type=int, default=1, help='example number')
    gen.add_argument('--variant', choices=VARIANTS, default='baseline')
    gen.add_argument('--M', type=_rational)
    gen.add_argument('--z', type=_rational)
    gen.add_argument('--agent', type=int, help='perturbed agent (generic family)')
    gen.add_argument('--subset', type=int, help='index of the subset whose mark is moved')
    gen.add_argument('--delta', type=_rational)
    gen.add_argument('--seed', type=int)
    gen.set_defaults(handler=cmd_gen)

    verify_cmd = commands.add_parser('verify', parents=[common],
                                     help='check an allocation exactly')
    verify_cmd.add_argument('instance')
    verify_cmd.add_argument('allocation')
    _mode_flags(verify_cmd, hungry_equal=False)
    verify_cmd.set_defaults(handler=cmd_verify)

    bounds = commands.add_parser('bounds', parents=[common],
                                 help='query lower bound and algorithm budgets')
    bounds.add_argument('instance')
    bounds.add_argument('--measure', action='store_true',
                        help='also run the decisions and report their query counts')
    bounds.add_argument('--csv', action='store_true', help='one CSV row instead of JSON')
    bounds.set_defaults(handler=cmd_bounds)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config)
    except CakeError as e:
        sys.stderr.write(f"strongprop: {e}\n")
        return EXIT_ERROR
    configure_logging(settings, args.verbose)
    try:
        return args.handler(args, settings)
    except (CakeError, OSError, json.JSONDecodeError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_ERROR
