"""Command-line interface.

Subcommands: ``simulate`` runs Monte Carlo sweeps into a CSV table,
``bound`` evaluates the error-probability bound for one configuration,
``cost`` sizes the number of channel uses needed for a target accuracy
and confidence.  Exit codes: 0 success, 2 usage/validation error, 3 I/O
error, 4 infeasible cost search.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import List, Optional

from . import bounds, channel, functions, harness

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INFEASIBLE = 4

BOUND_CSV_HEADER = "K,M,eps,delta_or_prob,eta,L,F,D,phi_inv_eps,bound_raw,bound_capped"


def _int_list(text: str) -> List[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> List[float]:
    return [float(tok) for tok in text.split(",") if tok]


# lets "--noise-db -10,0,10" parse as a value instead of an unknown option
_NEGATIVE_LIST = re.compile(r"^-[\d.,eE+-]+$")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aircomp",
        description="Over-the-air computation simulator and bound toolkit.",
    )
    parser._negative_number_matcher = _NEGATIVE_LIST
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo mean-squared-error sweep")
    sim._negative_number_matcher = _NEGATIVE_LIST
    sim.add_argument("--function", required=True,
                     help="mean | norm | wsum:<w1,w2,...>")
    sim.add_argument("--scheme", default="both", choices=["dfa", "tdma", "both"])
    sim.add_argument("--users", required=True, type=_int_list,
                     help="comma-separated list of user counts")
    sim.add_argument("--chuses", required=True, type=_int_list,
                     help="comma-separated list of channel-use counts")
    sim.add_argument("--noise-db", required=True, type=_float_list,
                     help="comma-separated noise powers in dB per complex dimension")
    sim.add_argument("--runs", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--power", type=float, default=1.0)
    sim.add_argument("--fading", default="experiments", choices=sorted(harness.FADING_PRESETS))
    sim.add_argument("--correlation", default="iid",
                     help="iid | ar:<rho> | file:<path>")
    sim.add_argument("--no-clamp", action="store_true",
                     help="disable clamping of decoded estimates")
    sim.add_argument("--iid-messages", action="store_true", help=argparse.SUPPRESS)
    sim.add_argument("--out", required=True, help="output CSV path")

    bnd = sub.add_parser("bound", help="evaluate the error-probability bound")
    bnd._negative_number_matcher = _NEGATIVE_LIST
    bnd.add_argument("--function", required=True)
    bnd.add_argument("--users", required=True, type=int)
    bnd.add_argument("--chuses", required=True, type=int)
    bnd.add_argument("--eps", required=True, type=float)
    bnd.add_argument("--power", type=float, default=1.0)
    bnd.add_argument("--noise-db", type=float, default=0.0)
    bnd.add_argument("--fading", default="experiments", choices=sorted(harness.FADING_PRESETS))
    bnd.add_argument("--correlation", default="iid")
    bnd.add_argument("--ai", default="same", choices=list(bounds.AI_STRATEGIES))
    bnd.add_argument("--lipschitz", action="store_true",
                     help="use eps/C instead of the inverted growth envelope")
    bnd.add_argument("--out", required=True)

    cost = sub.add_parser("cost", help="channel uses needed for (eps, delta)")
    cost._negative_number_matcher = _NEGATIVE_LIST
    cost.add_argument("--function", required=True)
    cost.add_argument("--users", required=True, type=int)
    cost.add_argument("--eps", required=True, type=float)
    cost.add_argument("--delta", required=True, type=float)
    cost.add_argument("--power", type=float, default=1.0)
    cost.add_argument("--noise-db", type=float, default=0.0)
    cost.add_argument("--fading", default="experiments", choices=sorted(harness.FADING_PRESETS))
    cost.add_argument("--correlation", default="iid", help="only 'iid' is supported")
    cost.add_argument("--m-max", type=int, default=None,
                      help="declare infeasibility above this blocklength")
    cost.add_argument("--lipschitz", action="store_true")
    cost.add_argument("--out", required=True)
    return parser


def _write_bound_csv(path: str, K: int, M: int, eps: float, delta_or_prob: float,
                     terms: bounds.BoundTerms, raw: float, capped: float) -> None:
    fmt = harness._fmt
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(BOUND_CSV_HEADER + "\n")
        fh.write(
            f"{K},{M},{fmt(eps)},{fmt(delta_or_prob)},{fmt(terms.eta)},"
            f"{fmt(terms.l_term)},{fmt(terms.f_term)},{fmt(terms.d_term)},"
            f"{fmt(terms.phi_inv_eps)},{fmt(raw)},{fmt(capped)}\n"
        )


def _cmd_simulate(args: argparse.Namespace) -> int:
    schemes = ("dfa", "tdma") if args.scheme == "both" else (args.scheme,)
    cfg = harness.SweepConfig(
        function=args.function,
        schemes=schemes,
        users=tuple(args.users),
        chuses=tuple(args.chuses),
        noise_db=tuple(args.noise_db),
        runs=args.runs,
        root_seed=args.seed,
        power=args.power,
        fading=args.fading,
        correlation=args.correlation,
        clamp=not args.no_clamp,
        iid_messages=args.iid_messages,
    )
    result = harness.run_sweep(cfg)
    harness.emit_csv(result, args.out)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return EXIT_OK


def _bound_model(args: argparse.Namespace):
    sigma_f = harness.FADING_PRESETS[args.fading]
    sigma_n = harness.noise_db_to_sigma(args.noise_db)
    model = harness.build_model(args.correlation, args.users, args.chuses,
                                sigma_f, sigma_n)
    return model


def _cmd_bound(args: argparse.Namespace) -> int:
    f = functions.resolve_function(args.function, args.users)
    model = _bound_model(args)
    terms = bounds.bound_terms(f, model, args.ai, args.power, args.eps,
                               use_lipschitz=args.lipschitz)
    raw = bounds.error_probability_bound_raw(terms)
    capped = bounds.error_probability_bound(terms)
    _write_bound_csv(args.out, model.K, model.M, args.eps, capped, terms, raw, capped)
    print(f"bound {capped} (raw {raw}) written to {args.out}")
    return EXIT_OK


def _cmd_cost(args: argparse.Namespace) -> int:
    if args.correlation != "iid":
        raise ValueError("cost search supports only --correlation iid")
    f = functions.resolve_function(args.function, args.users)
    sigma_f = harness.FADING_PRESETS[args.fading]
    sigma_n = harness.noise_db_to_sigma(args.noise_db)
    family = bounds.iid_family(args.users, sigma_f, sigma_n)
    m = bounds.communication_cost(f, args.eps, args.delta, family, args.power,
                                  use_lipschitz=args.lipschitz)
    if m is None or (args.m_max is not None and m > args.m_max):
        limit = args.m_max if args.m_max is not None else "the search limit"
        print(f"cost search infeasible: no blocklength within {limit} "
              f"meets delta={args.delta}", file=sys.stderr)
        return EXIT_INFEASIBLE
    model, ai = family(m)
    terms = bounds.bound_terms(f, model, ai, args.power, args.eps,
                               use_lipschitz=args.lipschitz)
    raw = bounds.error_probability_bound_raw(terms)
    capped = bounds.error_probability_bound(terms)
    _write_bound_csv(args.out, model.K, m, args.eps, args.delta, terms, raw, capped)
    print(f"need {m} channel uses; bound there {capped} (raw {raw}); written to {args.out}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"simulate": _cmd_simulate, "bound": _cmd_bound, "cost": _cmd_cost}
    try:
        return handlers[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
