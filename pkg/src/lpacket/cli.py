"""Command-line interface: packet listing, theta transfers, branching
reports, and the randomized verification suite, all as JSON on stdout.

Exit codes: 0 success, 1 parse/usage diagnostics, 2 hypothesis
violations, 3 verification failures.
"""

from __future__ import annotations

import argparse
import sys

from .component import component_group, enumerate_characters
from .dsl import parse
from .errors import (
    DslSemanticError,
    DslSyntaxError,
    HypothesisViolation,
    LPacketError,
    NotSupercuspidalPacket,
)
from .recipe import GGPContext, main_multiplicity
from .seesaw import make_backend, run_property_suite
from .serialize import (
    dumps,
    packet_json,
    parameter_json,
    report_json,
    sign_str,
)
from . import theta as theta_mod


def _load_document(path, needed=True):
    if path is None:
        if needed:
            raise LPacketError("this command needs --input FILE")
        return None
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())


def _context(doc, identify_chi):
    identify = identify_chi or doc.identify_chi
    return GGPContext.standard(doc.n, doc.base, identify_chi=identify)


def _backend(kind, seed, doc):
    table = doc.table() if (doc is not None and kind == "table") else None
    return make_backend(kind, seed, table=table)


def _emit(payload, pretty):
    print(dumps(payload, pretty=pretty))


def cmd_packet(args):
    doc = _load_document(args.input)
    phi = doc.parameter(args.param)
    _emit(packet_json(phi), args.pretty)
    return 0


def cmd_theta(args):
    doc = _load_document(args.input)
    phi = doc.parameter(args.param)
    gctx = _context(doc, args.identify_chi)
    backend = _backend(args.backend, args.seed, doc)
    group = component_group(phi)
    chars = enumerate_characters(group)
    if args.direction == "up1":
        ctx = gctx.up1_recovery()
        lifted = theta_mod.theta_up1_param(phi, ctx)
        table = []
        for eta in chars:
            row = {"source": [sign_str(v) for v in eta.values]}
            for side in (+1, -1):
                out, got = theta_mod.theta_up1_char(phi, eta, side, ctx)
                row[f"target_{sign_str(side)}"] = {
                    "character": [sign_str(v) for v in out.values],
                    "side": sign_str(got),
                }
            table.append(row)
    else:
        ctx = gctx.up2_primary()
        lifted = theta_mod.theta_up2_param(phi, ctx)
        table = []
        for eta in chars:
            out = theta_mod.theta_up2_char(eta, phi, ctx, backend)
            eps_prime = theta_mod.theta_up2_eps_prime(+1, phi, ctx, backend)
            table.append({
                "source": [sign_str(v) for v in eta.values],
                "target": [sign_str(v) for v in out.values],
                "form_exchange_sign": sign_str(eps_prime),
            })
    payload = {
        "schema": "ggp-report/1",
        "kind": f"theta-{args.direction}",
        "source": parameter_json(phi),
        "lifted": parameter_json(lifted),
        "characters": table,
    }
    _emit(payload, args.pretty)
    return 0


def cmd_ggp(args):
    doc = _load_document(args.input)
    phi1 = doc.parameter(args.phi1)
    phi = doc.parameter(args.phi)
    gctx = _context(doc, args.identify_chi)
    backend = _backend(args.backend, args.seed, doc)
    report = main_multiplicity(
        phi1, phi, gctx, backend,
        merged_case_certified=args.merged_case_certified,
    )
    _emit(report_json(report), args.pretty)
    return 0


def cmd_verify(args):
    doc = _load_document(args.input, needed=(args.backend == "table"))
    table = doc.table() if (doc is not None and args.backend == "table") else None
    report = run_property_suite(
        seeds=args.seeds,
        max_rank=args.max_rank,
        parities=("odd", "even"),
        backend_kind=args.backend,
        master_seed=args.seed,
        table=table,
    )
    _emit(report, args.pretty)
    return 0 if report["all_pass"] else 3


def _add_common(parser, suppress):
    # the same flags live on the main parser and on every subcommand, so
    # they are accepted on either side of the subcommand word; the
    # subcommand copies must not clobber values parsed before it
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--input", default=dflt(None), help="DSL document file")
    parser.add_argument("--seed", type=int, default=dflt(0),
                        help="backend/suite seed")
    parser.add_argument("--identify-chi", action="store_true",
                        default=dflt(False),
                        help="identify chi_V and chi_W with powers of chi")
    parser.add_argument("--backend", choices=("hashed", "one", "table"),
                        default=dflt("hashed"))
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", default=dflt(False),
                        help="compact JSON (default)")
    output.add_argument("--pretty", action="store_true", default=dflt(False),
                        help="indented JSON")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lpacket",
        description="Component-group and theta-transfer calculus for "
        "unitary-group parameter packets",
    )
    _add_common(parser, suppress=False)

    sub = parser.add_subparsers(dest="command", required=True)

    p_packet = sub.add_parser("packet", help="list the packet members")
    p_packet.add_argument("param")
    _add_common(p_packet, suppress=True)
    p_packet.set_defaults(func=cmd_packet)

    p_theta = sub.add_parser("theta", help="theta transfer of a parameter")
    p_theta.add_argument("direction", choices=("up1", "up2"))
    p_theta.add_argument("param")
    _add_common(p_theta, suppress=True)
    p_theta.set_defaults(func=cmd_theta)

    p_ggp = sub.add_parser("ggp", help="branching multiplicity report")
    p_ggp.add_argument("phi1")
    p_ggp.add_argument("phi")
    p_ggp.add_argument(
        "--merged-case-certified", action="store_true",
        help="certify the irreducible-lifts hypothesis of the merged case",
    )
    _add_common(p_ggp, suppress=True)
    p_ggp.set_defaults(func=cmd_ggp)

    p_verify = sub.add_parser("verify", help="run the property suite")
    p_verify.add_argument("--seeds", type=int, default=25)
    p_verify.add_argument("--max-rank", type=int, default=5)
    _add_common(p_verify, suppress=True)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DslSyntaxError, DslSemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (HypothesisViolation, NotSupercuspidalPacket) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 2
    except (LPacketError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
