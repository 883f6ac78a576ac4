"""Command-line interface: a thin client over the HTTP service.

Every subcommand builds a JSON request and sends it to the service -- by
default to an in-process instance of the app, or to a running server when
--server URL is given -- so the CLI and the HTTP API cannot drift apart.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import httpx


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _params_list(text: str) -> list[dict]:
    """Parse --params 'i,j,m,c;i,j,m,c;...' into decompose parameters."""
    out = []
    for chunk in text.split(";"):
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 4:
            raise argparse.ArgumentTypeError(
                f"expected 'i,j,m,c' groups separated by ';', got {chunk!r}"
            )
        try:
            i, j, m, c = (int(x) for x in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"non-integer in parameter group {chunk!r}")
        out.append({"i": i, "j": j, "m": m, "c": c})
    if not out:
        raise argparse.ArgumentTypeError("at least one 'i,j,m,c' group is required")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloosterman",
        description="Exact Kloosterman-sum evaluation, oracles, scans, and verification.",
    )
    parser.add_argument("--server", help="URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="evaluate one Kloosterman sum")
    p_compute.add_argument("--group", choices=("gln", "gl4"), default="gln")
    p_compute.add_argument(
        "--weyl", choices=("long", "star", "blockswap", "mixed"), default="long"
    )
    p_compute.add_argument("--p", type=int, required=True)
    p_compute.add_argument("--r", type=_int_list, required=True)
    p_compute.add_argument("--psi", type=_int_list, required=True)
    p_compute.add_argument("--psi-prime", type=_int_list, required=True)
    p_compute.add_argument("--budget", type=int)
    p_compute.add_argument("--companion", action="store_true")
    fmt = p_compute.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="one-row CSV output")

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument(
        "--suite",
        required=True,
        choices=("exact-evals", "oracles", "bruhat", "counts", "shift-invariance", "weil"),
    )

    p_scan = sub.add_parser("scan", help="power-saving scan over modulus vectors")
    p_scan.add_argument(
        "--weyl", choices=("long", "star", "blockswap", "mixed"), default="long"
    )
    p_scan.add_argument("--p", type=int, required=True)
    p_scan.add_argument("--n", type=int, required=True)
    p_scan.add_argument("--r-budget", type=int, required=True)
    p_scan.add_argument("--psi", type=_int_list)
    p_scan.add_argument("--psi-prime", type=_int_list)
    p_scan.add_argument("--budget", type=int)
    p_scan.add_argument("--out", help="CSV output file (default: stdout)")

    p_dec = sub.add_parser("decompose", help="exact Bruhat factorization of a word product")
    p_dec.add_argument("--weyl", choices=("long", "star", "blockswap", "mixed"), default="long")
    p_dec.add_argument("--n", type=int, required=True)
    p_dec.add_argument("--p", type=int, required=True)
    p_dec.add_argument(
        "--params",
        type=_params_list,
        required=True,
        help="semicolon-separated 'i,j,m,c' groups, one per support index",
    )

    p_count = sub.add_parser("count", help="strata and coset cardinalities")
    p_count.add_argument("--weyl", choices=("long", "star", "blockswap", "mixed"), default="long")
    p_count.add_argument("--p", type=int, required=True)
    p_count.add_argument("--r", type=_int_list, required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=True)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code == 400:
        print(f"error: {response.json().get('detail')}", file=sys.stderr)
        raise SystemExit(2)
    response.raise_for_status()
    return response.json()


def _compute(client, args) -> int:
    data = _post(
        client,
        "/compute",
        {
            "group": args.group,
            "weyl": args.weyl,
            "p": args.p,
            "r": args.r,
            "psi": args.psi,
            "psi_prime": args.psi_prime,
            "budget": args.budget,
            "companion": args.companion,
        },
    )
    if args.csv:
        value_abs = abs(complex(data["complex"]["re"], data["complex"]["im"]))
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["weyl", "p", "r", "psi", "psi_prime", "value_abs", "trivial_bound"])
        writer.writerow(
            [
                data["weyl"],
                data["p"],
                " ".join(map(str, data["r"])),
                " ".join(map(str, data["psi"])),
                " ".join(map(str, data["psi_prime"])),
                f"{value_abs:.12g}",
                data["trivial_bound"],
            ]
        )
        sys.stdout.write(buf.getvalue())
    else:
        json.dump(data, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _verify(client, args) -> int:
    data = _post(client, "/verify", {"suite": args.suite})
    for check in data["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']} ({check['seconds']:.2f}s): {check['detail']}")
    return 0 if data["passed"] else 1


def _scan(client, args) -> int:
    data = _post(
        client,
        "/scan",
        {
            "weyl": args.weyl,
            "p": args.p,
            "n": args.n,
            "r_budget": args.r_budget,
            "psi": args.psi if args.psi else [1] * args.n,
            "psi_prime": args.psi_prime if args.psi_prime else [1] * args.n,
            "budget": args.budget,
        },
    )
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(data["header"])
        for row in data["rows"]:
            writer.writerow(row)
    finally:
        if args.out:
            out.close()
    return 0


def _decompose(client, args) -> int:
    data = _post(
        client,
        "/decompose",
        {"weyl": args.weyl, "n": args.n, "p": args.p, "params": args.params},
    )
    for label in ("product", "L", "N", "R"):
        print(f"{label}:")
        width = max(len(x) for row in data[label] for x in row)
        for row in data[label]:
            print("  [" + "  ".join(x.rjust(width) for x in row) + "]")
    print(f"p_integral: {data['p_integral']}")
    print(f"round_trip: {data['round_trip']}")
    if "closed_form_match" in data:
        print(f"closed_form_match: {data['closed_form_match']}")
    return 0


def _count(client, args) -> int:
    data = _post(client, "/count", {"weyl": args.weyl, "p": args.p, "r": args.r})
    print(f"weyl={data['weyl']} p={data['p']} r={data['r']} strata={len(data['strata'])}")
    for s in data["strata"]:
        print(
            f"  m={s['m']} height={s['height']} kappa={s['kappa']} "
            f"cardinality={s['coset_cardinality']} formula={s['dr_count']}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; preserve both
        return int(exc.code or 0)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    handlers = {
        "compute": _compute,
        "verify": _verify,
        "scan": _scan,
        "decompose": _decompose,
        "count": _count,
    }
    try:
        with _client(args.server) as client:
            return handlers[args.command](client, args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
