"""Command-line client for the frame service.

Every subcommand builds a request against the HTTP API; by default the
FastAPI app is driven in-process (no server needed), while --server
targets a running instance. Exit codes: 0 success, 1 theorem-level
failure (a check failed or a construction was refused), 2 input error
(malformed file, impossible dimensions, bad arguments).

The residual tolerance is resolved in order: --tolerance flag, the
OVF_TOLERANCE environment variable, the file's tolerance block, the
default 1e-9.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import httpx

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class InputError(Exception):
    pass


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=120.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _resolved_tolerance(args) -> float | None:
    if getattr(args, "tolerance", None) is not None:
        return args.tolerance
    env = os.environ.get("OVF_TOLERANCE")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise InputError(f"OVF_TOLERANCE is not a number: {env!r}") from exc
    return None


def _load_frame_payload(path, args) -> dict:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path} does not contain a frame document")
    override = _resolved_tolerance(args)
    if override is not None:
        block = dict(data.get("tolerance") or {})
        block["residual_eps"] = override
        block.setdefault("invert_eps", 1e-8)
        data["tolerance"] = block
    return data


def _post(client, path, payload):
    response = client.post(path, json=payload)
    if response.status_code == 422:
        detail = response.json().get("detail", "invalid input")
        raise InputError(str(detail))
    response.raise_for_status()
    return response.json()


def _write_json(path, data) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def _print_checks(checks) -> None:
    for check in checks:
        status = "PASS" if check["passed"] else "FAIL"
        line = f"[{status}] {check['name']}: {check['statement']}"
        if check.get("residual") is not None:
            line += f" (residual {check['residual']:.3e})"
        if check.get("detail"):
            line += f" -- {check['detail']}"
        print(line)


def cmd_gen(args, client) -> int:
    payload = {
        "kind": args.kind, "d": args.d, "d0": args.d0, "N": args.N, "seed": args.seed,
    }
    override = _resolved_tolerance(args)
    if override is not None:
        payload["tolerance"] = {"residual_eps": override, "invert_eps": 1e-8}
    data = _post(client, "/gen", payload)
    _write_json(args.output, data["frame"])
    print(f"wrote {args.kind} frame to {args.output}")
    return EXIT_OK


def cmd_verify(args, client) -> int:
    payload = {
        "frame": _load_frame_payload(args.file, args),
        "checks": args.checks.split(","),
    }
    if args.dual_file:
        payload["companion"] = _load_frame_payload(args.dual_file, args)
    data = _post(client, "/verify", payload)
    _print_checks(data["checks"])
    return EXIT_OK if data["passed"] else EXIT_CHECK_FAILED


def cmd_dual(args, client) -> int:
    data = _post(client, "/dual", {"frame": _load_frame_payload(args.file, args)})
    if not data["ok"]:
        print(f"dual refused: {data['reason']}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    _write_json(args.output, data["frame"])
    print(f"wrote canonical dual to {args.output}")
    return EXIT_OK


def cmd_dilate(args, client) -> int:
    data = _post(client, "/dilate", {"frame": _load_frame_payload(args.file, args)})
    if not data["ok"]:
        print(f"dilation refused: {data['reason']}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    out = data["frame"]
    out["dilation"] = {"extended_dim": data["extended_dim"], "embed": data["embed"]}
    _write_json(args.output, out)
    print(f"wrote orthonormal dilation (dim {data['extended_dim']}) to {args.output}")
    return EXIT_OK


def cmd_similar(args, client) -> int:
    payload = {
        "frame": _load_frame_payload(args.file, args),
        "other": _load_frame_payload(args.other, args),
    }
    data = _post(client, "/similar", payload)
    if not data["similar"]:
        print(f"not similar: {data['reason']}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"similar (residual {data['residual']:.3e}, idempotent residual {data['p_residual']:.3e})")
    if args.output:
        _write_json(args.output, {"R_AB": data["r_ab"], "R_PsiPhi": data["r_psiphi"]})
        print(f"wrote witness to {args.output}")
    return EXIT_OK


def cmd_reconstruct(args, client) -> int:
    data = _post(client, "/reconstruct", {"frame": _load_frame_payload(args.file, args)})
    if not data["ok"]:
        print(f"reconstruction refused: {data['reason']}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    _write_json(args.output, {"kind": data["kind"], "pi": data["pi"]})
    print(
        f"wrote {data['kind']} representation to {args.output} "
        f"(law residual {data['law_residual']:.3e}, "
        f"regeneration residual {data['regeneration_residual']:.3e})"
    )
    return EXIT_OK


def cmd_perturb(args, client) -> int:
    try:
        budgets = [float(b) for b in args.budgets.split(",") if b]
    except ValueError as exc:
        raise InputError(f"bad budget list {args.budgets!r}") from exc
    payload = {
        "frame": _load_frame_payload(args.file, args),
        "budget_fractions": budgets,
        "seeds": args.seeds,
        "base_seed": args.base_seed,
    }
    data = _post(client, "/perturb", payload)
    if not data["ok"]:
        print(f"perturbation failed: {data['reason']}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    columns = [
        "seed", "budget_fraction",
        "theoretical_lower", "measured_lower",
        "theoretical_upper", "measured_upper",
    ]
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in data["rows"]:
            writer.writerow({k: row[k] for k in columns})
    print(f"wrote {len(data['rows'])} tightness rows to {args.output}")
    return EXIT_OK


def cmd_report(args, client) -> int:
    payload = {"frame": _load_frame_payload(args.file, args), "checks": ["all"]}
    data = _post(client, "/verify", payload)
    cls = data["classification"]
    flags = [
        name
        for name, key in (
            ("weak", "is_weak"), ("Parseval", "is_parseval"),
            ("Riesz", "is_riesz"), ("orthonormal", "is_orthonormal"),
        )
        if cls[key]
    ]
    print(f"frame: d={cls['d']} d0={cls['d0']} N={cls['N']}")
    print(f"class: {', '.join(flags) if flags else 'not weak'}")
    if cls["lower_bound"] is not None:
        print(f"optimal bounds: ({cls['lower_bound']:.6g}, {cls['upper_bound']:.6g})")
    print(f"truncated analysis norm ||theta_A||: {cls['truncated_analysis_norm']:.6g}")
    _print_checks(data["checks"])
    return EXIT_OK if data["passed"] else EXIT_CHECK_FAILED


def cmd_serve(args, client) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ovframes",
        description="Construct, classify, dualize, dilate and perturb weak operator-valued frames.",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    parser.add_argument(
        "--tolerance", type=float, help="override residual_eps (also: OVF_TOLERANCE env var)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a frame file of a given class")
    p.add_argument("--kind", required=True,
                   choices=["parseval", "weak", "group", "grouplike", "operator-onb"])
    p.add_argument("-d", type=int, required=True, help="dimension of the domain space")
    p.add_argument("--d0", type=int, required=True, help="dimension of the target space")
    p.add_argument("-N", type=int, required=True, help="number of indices (group order for group kinds)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run named checks against a frame file")
    p.add_argument("file")
    p.add_argument("--checks", default="all",
                   help="comma list: all,weak,factor,parseval,riesz,dual,shift,grouplike,perturb")
    p.add_argument("--dual-file", help="companion frame for the dual check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="write the canonical dual of a frame file")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("dilate", help="extend a qualifying Parseval frame to an orthonormal one")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("similar", help="recover right-multipliers between two frames")
    p.add_argument("file")
    p.add_argument("other")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("reconstruct", help="recover the representation behind a generated frame")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("perturb", help="emit the theoretical-vs-measured bounds CSV")
    p.add_argument("file")
    p.add_argument("--budgets", default="0.1,0.5,0.9,0.99")
    p.add_argument("--seeds", type=int, default=25)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("report", help="human-readable verification report")
    p.add_argument("file")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "serve":
            return cmd_serve(args, None)
        client = _client(args.server)
        try:
            return args.func(args, client)
        finally:
            client.close()
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except httpx.HTTPError as exc:
        print(f"service error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
