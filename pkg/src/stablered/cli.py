"""Command-line front end.

Thin client over the service handlers: flags are parsed into the same
request models the HTTP endpoints take, dispatched in-process by default
or against a running server with --server.  Reports are deterministic
JSON on stdout (or --out).  Exit codes: 0 success, 1 a mathematical check
failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import MalformedInput, MathematicalFailure
from .reports import STATUS_OK, dump_document
from .service import HANDLERS

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_MALFORMED = 2


def _csv(text):
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablered",
        description="Exact invariants of three point covers with bad "
                    "reduction to characteristic p.")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default runs "
                             "in-process")
    parser.add_argument("--out", default=None,
                        help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="command")

    d = sub.add_parser("analyze-dessin",
                       help="branch cycle data to lifting prediction")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--types", required=True,
                   help="three cycle types, e.g. 2-3,2-3,7")
    d.add_argument("--n-prime", type=int, default=None)
    d.add_argument("--aut-orders", default=None,
                   help="per-tail inner automorphism orders, e.g. 1,1,1|2")
    d.add_argument("--group-order", type=int, default=None,
                   help="keep only classes generating a group of this order")

    v = sub.add_parser("verify-datum",
                       help="build and check the special datum for a "
                            "signature triple")
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--sigma", required=True, help="e.g. 1/6,1/6,2/3")
    v.add_argument("--epsilon", type=int, default=1)

    e = sub.add_parser("enumerate-signatures")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--max-new-tails", type=int, default=0)
    e.add_argument("--any-denominators", action="store_true",
                   help="drop the denominators-divide-p-1 restriction")

    t = sub.add_parser("tree-check", help="validate a tree document")
    t.add_argument("--input", required=True, help="path to the JSON document")
    t.add_argument("--general", action="store_true",
                   help="skip the three-point structure requirements")

    n = sub.add_parser("tail-normalize")
    n.add_argument("--p", type=int, required=True)
    n.add_argument("--m", type=int, required=True)
    n.add_argument("--a", type=int, required=True,
                   help="leading z-exponent offset; the conductor is m + a")
    n.add_argument("--coefficients", required=True, help="e.g. 1,3,5,0")
    n.add_argument("--precision", type=int, default=None)

    g = sub.add_parser("germ-reduce")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--h", type=int, required=True)
    g.add_argument("--ratio", required=True,
                   help="valuation ratio val(T)/val(p), e.g. 7/8")

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    return parser


def _request_payload(args) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "analyze-dessin":
        return cmd, {
            "p": args.p, "types": _csv(args.types),
            "n_prime": args.n_prime,
            "aut_orders": _csv(args.aut_orders) if args.aut_orders else None,
            "group_order": args.group_order,
        }
    if cmd == "verify-datum":
        return cmd, {"p": args.p, "sigma": _csv(args.sigma),
                     "epsilon": args.epsilon}
    if cmd == "enumerate-signatures":
        return cmd, {
            "p": args.p, "max_new_tails": args.max_new_tails,
            "denominators_divide_p_minus_1": not args.any_denominators,
        }
    if cmd == "tree-check":
        with open(args.input, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedInput(f"bad JSON in {args.input}: {exc}") \
                    from exc
        return cmd, {"tree": doc, "three_point": not args.general}
    if cmd == "tail-normalize":
        return cmd, {
            "p": args.p, "m": args.m, "a": args.a,
            "coefficients": [int(x) for x in _csv(args.coefficients)],
            "precision": args.precision,
        }
    if cmd == "germ-reduce":
        return cmd, {"p": args.p, "m": args.m, "h": args.h,
                     "valuation_ratio": args.ratio}
    raise MalformedInput(f"unknown subcommand {cmd!r}")


def _dispatch(command: str, payload: dict, server: str) -> dict:
    if server:
        import httpx
        resp = httpx.post(f"{server.rstrip('/')}/{command}", json=payload,
                          timeout=300.0)
        if resp.status_code == 400:
            raise MalformedInput(resp.json().get("detail", "bad request"))
        resp.raise_for_status()
        return resp.json()
    model_cls, handler = HANDLERS[command]
    try:
        model = model_cls(**payload)
    except ValidationError as exc:
        raise MalformedInput(str(exc)) from exc
    return handler(model)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_MALFORMED
    if args.command == "serve":
        import uvicorn
        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK
    try:
        command, payload = _request_payload(args)
        doc = _dispatch(command, payload, args.server)
    except (MalformedInput, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except MathematicalFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    text = dump_document(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if doc.get("status") == STATUS_OK else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
