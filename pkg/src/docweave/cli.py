"""Command-line front door: validate, verify, compile, run, serve.

Exit codes are a contract: 0 means the command succeeded and the domain
verdict was clean, 1 means the inputs were processed but judged bad (invalid
spec, violated constraint, failed pipeline stage, failing evaluation), and 2
means the command never got that far — bad usage, missing files, no provider
credentials, an occupied port.

Provider resolution never calls a network silently: ``--fixtures`` replays a
scripted directory, otherwise DOCWEAVE_PROVIDER_URL / DOCWEAVE_PROVIDER_MODEL
must both be set, otherwise commands that need an agent refuse with exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from .docspec import DocSpec, parse_docspec, serialize_docspec
from .pipeline import (
    ExecutionFailed,
    HttpProvider,
    PipelineConfig,
    PlanFailed,
    ProviderError,
    ProviderSet,
    ScriptedProvider,
    StageFailed,
    evaluate,
    execute,
    plan,
    run_naive,
)
from .verifier import plan_sweep, verify_constraint
from .widget import compile_widget

__all__ = ["main", "entry"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _err(message: str) -> None:
    print(f"docweave: {message}", file=sys.stderr)


def _read_spec(path_text: str, as_json: bool):
    """Load and validate a spec file; returns (spec, exit_code)."""

    path = Path(path_text)
    if not path.is_file():
        _err(f"no such file: {path}")
        return None, EXIT_USAGE
    result = parse_docspec(path.read_text(encoding="utf-8"))
    if isinstance(result, DocSpec):
        return result, EXIT_OK
    if as_json:
        print(json.dumps(result.to_json(), indent=2, sort_keys=True))
    else:
        print(result.render())
    return None, EXIT_DOMAIN


def _resolve_providers(fixtures: "str | None", env=None) -> "ProviderSet | None":
    env = os.environ if env is None else env
    if fixtures:
        return ProviderSet.uniform(ScriptedProvider.from_dir(fixtures))
    endpoint = env.get("DOCWEAVE_PROVIDER_URL")
    model = env.get("DOCWEAVE_PROVIDER_MODEL")
    if endpoint and model:
        return ProviderSet.uniform(
            HttpProvider(
                endpoint,
                model,
                api_key_env=env.get("DOCWEAVE_PROVIDER_API_KEY_ENV", "DOCWEAVE_API_KEY"),
            )
        )
    return None


def _env_line(env: dict) -> str:
    return ", ".join(f"{name}={value}" for name, value in sorted(env.items()))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    spec, code = _read_spec(args.spec, args.json)
    if spec is None:
        return code
    if args.json:
        print(json.dumps({"ok": True, "violations": []}, indent=2, sort_keys=True))
    else:
        print(f"ok: {args.spec}: {len(spec.units)} unit(s)")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, code = _read_spec(args.spec, args.json)
    if spec is None:
        return code

    units = spec.units
    if args.unit is not None:
        units = tuple(u for u in spec.units if u.id == args.unit)
        if not units:
            known = ", ".join(u.id for u in spec.units)
            _err(f"unknown unit id {args.unit!r} (spec has: {known})")
            return EXIT_DOMAIN

    results = []
    worst = EXIT_OK
    for unit in units:
        sweep = plan_sweep(unit.interaction, args.grid, args.cap)
        report = verify_constraint(unit.interaction, sweep)
        results.append((unit.id, report))
        if report.status == "violated":
            worst = EXIT_DOMAIN

    if args.json:
        print(
            json.dumps(
                {"units": [{"unit_id": uid, **rep.to_json()} for uid, rep in results]},
                indent=2,
                sort_keys=True,
            )
        )
        return worst

    for unit_id, report in results:
        print(f"{unit_id}: {report.status}, {report.samples_checked} samples")
        if report.status == "violated":
            env, _inputs = report.violations[0]
            print(f"  first violation at {_env_line(report.to_json()['violations'][0]['env'])}")
        if report.status == "degenerate":
            env, name, value = report.non_finite[0]
            _err(
                f"warning: {unit_id} is degenerate — {name} is non-finite"
                f" at {_env_line(report.to_json()['non_finite'][0]['env'])}"
            )
    return worst


def cmd_compile(args) -> int:
    spec, code = _read_spec(args.spec, args.json)
    if spec is None:
        return code

    unit_id = args.unit
    if unit_id is None:
        if len(spec.units) != 1:
            known = ", ".join(u.id for u in spec.units)
            _err(f"--unit is required when the spec has several (spec has: {known})")
            return EXIT_USAGE
        unit_id = spec.units[0].id
    matches = [u for u in spec.units if u.id == unit_id]
    if not matches:
        known = ", ".join(u.id for u in spec.units)
        _err(f"unknown unit id {unit_id!r} (spec has: {known})")
        return EXIT_DOMAIN

    unit = matches[0]
    fragment = compile_widget(unit.interaction, args.container_id or f"dw-{unit.id}")
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(fragment.html, encoding="utf-8")
        print(f"wrote {out} ({len(fragment.html.encode('utf-8'))} bytes)")
    elif args.json:
        print(json.dumps(fragment.to_json(), indent=2, sort_keys=True))
    else:
        print(fragment.html)
    return EXIT_OK


def cmd_run(args) -> int:
    providers = _resolve_providers(args.fixtures)
    if providers is None:
        _err("scripted provider required when no credentials configured"
             " (pass --fixtures or set DOCWEAVE_PROVIDER_URL and DOCWEAVE_PROVIDER_MODEL)")
        return EXIT_USAGE

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = PipelineConfig(
        max_attempts=args.max_attempts,
        widget_mode="deterministic" if args.mode == "deterministic" else "llm",
        grid_points=args.grid,
        cap=args.cap,
    )

    target_path = Path(args.target)
    if args.mode == "naive":
        if target_path.is_file():
            _err("naive mode generates straight from a topic; pass a topic, not a spec file")
            return EXIT_USAGE
        try:
            document = run_naive(args.target, providers.naive, config)
        except StageFailed as failure:
            _err(f"naive generation failed after {len(failure.reports)} attempt(s)")
            for report in failure.reports:
                print(report.render(), file=sys.stderr)
            return EXIT_DOMAIN
        doc_path = out_dir / "document.html"
        doc_path.write_text(document.html, encoding="utf-8")
        if args.json:
            print(json.dumps({"document": str(doc_path), "mode": "naive"}, sort_keys=True))
        else:
            print(f"document: {doc_path} ({len(document.html.encode('utf-8'))} bytes)")
        return EXIT_OK

    if target_path.is_file():
        spec, code = _read_spec(args.target, args.json)
        if spec is None:
            return code
    else:
        try:
            spec = plan(args.target, providers.planner, config)
        except PlanFailed as failure:
            _err(f"planning failed after {len(failure.reports)} attempt(s)")
            for report in failure.reports:
                print(report.render(), file=sys.stderr)
            return EXIT_DOMAIN

    try:
        document, units = execute(spec, providers, config)
    except ExecutionFailed as failure:
        cause = failure.cause
        _err(
            f"unit {cause.unit_id!r} failed its {cause.stage} stage"
            f" after {len(cause.reports)} attempt(s);"
            f" {len(failure.completed)} unit(s) completed"
        )
        for report in cause.reports:
            print(report.render(), file=sys.stderr)
        return EXIT_DOMAIN

    try:
        evaluation = evaluate(document, units, spec, providers.evaluator, config)
    except ProviderError:
        _err("coherence review skipped: provider had no response for it")
        evaluation = evaluate(document, units, spec, None, config)

    doc_path = out_dir / "document.html"
    spec_path = out_dir / "docspec.json"
    eval_path = out_dir / "evaluation.json"
    doc_path.write_text(document.html, encoding="utf-8")
    spec_path.write_text(serialize_docspec(spec) + "\n", encoding="utf-8")
    eval_path.write_text(
        json.dumps(evaluation.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    if args.json:
        print(
            json.dumps(
                {
                    "document": str(doc_path),
                    "docspec": str(spec_path),
                    "evaluation": str(eval_path),
                    "verdict": evaluation.verdict,
                    "units": [unit.to_json() for unit in units],
                },
                indent=2,
                sort_keys=True,
            )
        )
    else:
        for unit in units:
            fallback = ", compiler fallback" if unit.used_fallback else ""
            print(
                f"unit {unit.unit_id}: text ×{unit.attempts_text},"
                f" widget ×{unit.attempts_widget}{fallback}"
            )
        print(f"document: {doc_path} ({len(document.html.encode('utf-8'))} bytes)")
        print(f"docspec: {spec_path}")
        print(f"evaluation: {eval_path}")
        score = evaluation.coherence_score
        coherence = f", coherence {score}/5" if score is not None else ""
        print(f"verdict: {evaluation.verdict}{coherence}")
    return EXIT_OK if evaluation.verdict == "pass" else EXIT_DOMAIN


def cmd_serve(args) -> int:
    try:
        host, _, port_text = args.addr.rpartition(":")
        port = int(port_text)
        if not host:
            raise ValueError
    except ValueError:
        _err(f"--addr must look like host:port, got {args.addr!r}")
        return EXIT_USAGE

    # claim-check the port up front so a busy address is a clean usage error
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        _err(f"cannot bind {args.addr}: {exc}")
        return EXIT_USAGE
    finally:
        probe.close()

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        data_dir=args.data_dir,
        providers=_resolve_providers(args.fixtures),
        cors=args.cors,
    )
    app = create_app(config)

    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docweave",
        description="Interactive explainer documents from declarative interaction specs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a spec file; exit 0 iff it is clean")
    p.add_argument("spec", help="path to a spec JSON file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("verify", help="sweep every unit's constraint over its control domains")
    p.add_argument("spec", help="path to a spec JSON file")
    p.add_argument("--unit", help="verify a single unit instead of all of them")
    p.add_argument("--grid", type=int, default=11, help="samples per continuous control")
    p.add_argument("--cap", type=int, default=10_000, help="hard limit on total samples")
    p.add_argument("--json", action="store_true", help="machine-readable reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compile", help="compile one unit's widget to a self-contained fragment")
    p.add_argument("spec", help="path to a spec JSON file")
    p.add_argument("--unit", help="unit id (optional when the spec has exactly one)")
    p.add_argument("--out", help="write the fragment here instead of stdout")
    p.add_argument("--container-id", help="DOM id for the widget root")
    p.add_argument("--json", action="store_true", help="emit the full fragment record")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="plan, execute and evaluate a document")
    p.add_argument("target", help="a topic string, or a path to an existing spec file")
    p.add_argument("--mode", choices=("llm", "deterministic", "naive"), default="llm")
    p.add_argument("--fixtures", help="scripted provider directory (hermetic run)")
    p.add_argument("--out", default="docweave-out", help="output directory")
    p.add_argument("-k", "--max-attempts", type=int, default=3, help="retries per stage")
    p.add_argument("--grid", type=int, default=11)
    p.add_argument("--cap", type=int, default=10_000)
    p.add_argument("--json", action="store_true", help="machine-readable run summary")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="run the editing service")
    p.add_argument("--addr", default="127.0.0.1:8787", help="host:port to listen on")
    p.add_argument("--data-dir", default="docweave-data", help="session storage root")
    p.add_argument("--fixtures", help="scripted provider directory")
    p.add_argument("--cors", action="store_true", help="allow cross-origin editors")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
