"""``factor-calc`` command line.

    factor-calc [script.fc] [--mode distinct|collapsed] [--json out.json] [--check]
    factor-calc check --suite all|fdim|words --n N --seed S [--out DIR]

Exit status: 0 on success, 1 on parse/usage diagnostics, 2 on engine errors or
a certificate that fails to replay.  ``check`` exits 1 when a fuzz suite fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certify import Certificate, replay
from .expr import COLLAPSED, DISTINCT
from .repl import ENGINE, OK, Session, execute, run_script


def _cert_json(obj) -> dict:
    if isinstance(obj, Certificate):
        return obj.to_json()
    return {"verdict": type(obj).__name__, "left": obj.left.to_json(),
            "right": obj.right.to_json()}


def _certs(obj) -> list:
    return [obj] if isinstance(obj, Certificate) else [obj.left, obj.right]


def _interactive(session: Session) -> int:
    status = OK
    while not session.done:
        try:
            line = input("fc> ")
        except EOFError:
            break
        r = execute(line, session)
        if r.output:
            print(r.output)
        status = max(status, r.status)
    return status


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "check":
        return check_main(argv[1:])
    ap = argparse.ArgumentParser(prog="factor-calc", description=__doc__.splitlines()[0])
    ap.add_argument("script", nargs="?", help="script of commands, one per line")
    ap.add_argument("--mode", choices=[DISTINCT, COLLAPSED], default=DISTINCT)
    ap.add_argument("--json", metavar="OUT", help="write all certificates as JSON")
    ap.add_argument("--check", action="store_true", help="replay every certificate")
    args = ap.parse_args(argv)

    session = Session()
    session.assumptions = session.assumptions.with_mode(args.mode)
    if args.script:
        try:
            text = Path(args.script).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read {args.script}: {exc.strerror}", file=sys.stderr)
            return 1
        result = run_script(text, session)
        if result.output:
            print(result.output)
        status = result.status
    else:
        status = _interactive(session)

    if args.check:
        bad = [cmd for cmd, obj in session.certificates
               if not all(replay(c) for c in _certs(obj))]
        for cmd in bad:
            print(f"certificate failed to replay: {cmd}", file=sys.stderr)
        print(f"replayed {len(session.certificates)} certificate(s), {len(bad)} failed")
        if bad:
            status = max(status, ENGINE)
    if args.json:
        payload = [{"command": cmd, "certificate": _cert_json(obj)}
                   for cmd, obj in session.certificates]
        Path(args.json).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
                                   encoding="utf-8")
    return status


def check_main(argv) -> int:
    from .oracle import GenConfig, run_suite

    ap = argparse.ArgumentParser(prog="factor-calc check",
                                 description="run the randomized oracle suites")
    ap.add_argument("--suite", choices=["all", "fdim", "words"], default="all")
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="counterexamples",
                    help="directory for counterexample .fc scripts")
    args = ap.parse_args(argv)
    reports = run_suite(args.suite, GenConfig(seed=args.seed), args.n)
    failed = False
    for rep in reports:
        print(rep.summary())
        if not rep.ok:
            failed = True
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{rep.name}-seed{args.seed}.fc"
            path.write_text(rep.script(), encoding="utf-8")
            print(f"  counterexample written to {path}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
