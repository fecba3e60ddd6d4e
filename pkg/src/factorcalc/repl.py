"""Command interpreter shared by the interactive REPL, scripts and ``:load``."""
from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from pathlib import Path

from .certify import Certificate
from .engine import normalize, rescale, trade, trade_all
from .errors import EngineError, ParseError
from .expr import COLLAPSED, DISTINCT, IDENT, RESERVED, AssumptionSet, is_fclass
from .fclass import fdim_nf, normalize_fclass
from .fdim import fdim
from .iso import iso_verdict
from .lang import parse, parse_prefix, parse_scale, print_form
from .scalars import fmt
from .words import Word

OK, DIAGNOSTIC, ENGINE = 0, 1, 2

HELP = """commands:
  :fdim e               free dimension of a class-F expression
  :nf e                 canonical form
  :word e               canonical word
  :rescale e t          rescale by t (a rational or sqrt(q))
  :trade e Q[#k] t      move the k-th letter Q to support t
  :tradeAll e Q=t, ...  simultaneous trades
  :iso e1 e2            isomorphism verdict with certificate
  :mode distinct|collapsed
  :assume stable Q
  :explain              last certificate
  :load file            run a script
  :quit"""


class UsageError(Exception):
    """A malformed command line (reported like a parse diagnostic)."""


@dataclass
class Session:
    assumptions: AssumptionSet = field(default_factory=AssumptionSet)
    last: object = None
    certificates: list = field(default_factory=list)  # (command, Certificate | Isomorphic)
    done: bool = False


@dataclass
class Result:
    output: str
    status: int = OK


def _expr(text: str):
    if not text.strip():
        raise UsageError("missing expression")
    return parse(text)


def _two(text: str):
    e1, end = parse_prefix(text)
    if end >= len(text.rstrip()):
        raise UsageError("expected two expressions")
    return e1, end


def _word_for(e, s: Session):
    f, cert = normalize(e, s.assumptions)
    if not isinstance(f, Word):
        raise UsageError("expression is class F; trades need a word")
    return f, cert


_REF = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)(?:#(\d+))?\s*")


def _letter_index(w: Word, name: str, k: str | None) -> int:
    hits = [i for i, x in enumerate(w.letters) if x.body == name]
    k = int(k) if k else 1
    if not 1 <= k <= len(hits):
        raise UsageError(f"word has no letter {name}#{k}")
    return hits[k - 1]


def _cmd_fdim(arg, s):
    e = _expr(arg)
    if not is_fclass(e):
        raise UsageError("free dimension is defined on class F only")
    try:
        return fmt(fdim(e))
    except EngineError:
        return fmt(fdim_nf(normalize_fclass(e)))


def _cmd_nf(arg, s):
    f, cert = normalize(_expr(arg), s.assumptions)
    s.last = cert
    s.certificates.append((arg, cert))
    return print_form(f)


def _cmd_rescale(arg, s):
    e, end = _two(arg)
    sq = parse_scale(arg[end:])
    f, cert = normalize(e, s.assumptions)
    g, more = rescale(f, sq)
    cert = cert.then(more)
    s.last = cert
    s.certificates.append((arg, cert))
    return print_form(g)


def _cmd_trade(arg, s):
    e, end = _two(arg)
    m = _REF.match(arg, end)
    if not m:
        raise UsageError("expected a letter reference Q or Q#k")
    sq = parse_scale(arg[m.end():])
    w, cert = _word_for(e, s)
    out, more = trade(w, _letter_index(w, m.group(1), m.group(2)), sq)
    cert = cert.then(more)
    s.last = cert
    s.certificates.append((arg, cert))
    return print_form(out)


def _cmd_trade_all(arg, s):
    e, end = _two(arg)
    w, cert = _word_for(e, s)
    targets = {}
    for item in arg[end:].split(","):
        ref, eq, value = item.partition("=")
        m = _REF.fullmatch(ref)
        if not eq or not m:
            raise UsageError(f"bad target {item.strip()!r}; expected Q[#k]=t")
        targets[_letter_index(w, m.group(1), m.group(2))] = parse_scale(value.strip())
    out, more = trade_all(w, targets)
    cert = cert.then(more)
    s.last = cert
    s.certificates.append((arg, cert))
    return print_form(out)


def _cmd_iso(arg, s):
    e1, end = _two(arg)
    e2 = _expr(arg[end:])
    v = iso_verdict(e1, e2, s.assumptions)
    s.last = v
    s.certificates.append((arg, v))
    return v.render()


def _cmd_mode(arg, s):
    mode = arg.strip()
    if mode not in (DISTINCT, COLLAPSED):
        raise UsageError("mode is 'distinct' or 'collapsed'")
    s.assumptions = s.assumptions.with_mode(mode)
    return f"mode {mode}"


def _cmd_assume(arg, s):
    parts = arg.split()
    if len(parts) != 2 or parts[0] != "stable":
        raise UsageError("usage: :assume stable Q")
    name = parts[1]
    if not IDENT.match(name) or name in RESERVED:
        raise UsageError(f"bad factor symbol {name!r}")
    s.assumptions = s.assumptions.assume_stable(name)
    return f"assuming {name} = {name} * L(F_inf)"


def _cmd_explain(arg, s):
    if s.last is None:
        return "no certificate yet"
    if isinstance(s.last, Certificate):
        return s.last.render()
    return "left:\n" + s.last.left.render() + "\nright:\n" + s.last.right.render()


def _cmd_load(arg, s):
    path = Path(arg.strip())
    if not arg.strip():
        raise UsageError("usage: :load file")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    result = run_script(text, s)
    if result.status:
        raise _Nested(result)
    return result.output


def _cmd_quit(arg, s):
    s.done = True
    return ""


class _Nested(Exception):
    def __init__(self, result: Result):
        self.result = result


COMMANDS = {
    "fdim": _cmd_fdim, "nf": _cmd_nf, "word": _cmd_nf, "rescale": _cmd_rescale,
    "trade": _cmd_trade, "tradeAll": _cmd_trade_all, "iso": _cmd_iso,
    "mode": _cmd_mode, "assume": _cmd_assume, "explain": _cmd_explain,
    "load": _cmd_load, "quit": _cmd_quit, "help": lambda arg, s: HELP,
}


def execute(line: str, session: Session) -> Result:
    """Run one command; the session is only updated when the command succeeds."""
    text = line.strip()
    if not text or text.startswith("#"):
        return Result("")
    if text.startswith(":"):
        name, _, arg = text[1:].partition(" ")
        handler = COMMANDS.get(name)
        if handler is None:
            return Result(f"error: unknown command :{name} (try :help)", DIAGNOSTIC)
    else:
        handler, arg = _cmd_nf, text
    work = copy.copy(session)
    work.certificates = list(session.certificates)
    try:
        out = handler(arg, work)
    except ParseError as exc:
        column = exc.column + (line.find(arg) if exc.line == 1 and arg else 0)
        return Result(f"parse error at column {column}: {exc.message}", DIAGNOSTIC)
    except UsageError as exc:
        return Result(f"error: {exc}", DIAGNOSTIC)
    except EngineError as exc:
        return Result(exc.render(), ENGINE)
    except _Nested as exc:
        return exc.result
    session.__dict__.update(work.__dict__)
    return Result(out)


def repl_eval(line: str, session: Session) -> str:
    return execute(line, session).output


def run_script(text: str, session: Session) -> Result:
    """Run a script: one command per line, ``#`` comments, stop at ``:quit``."""
    outputs, status = [], OK
    for n, line in enumerate(text.splitlines(), 1):
        r = execute(line, session)
        if r.output:
            prefix = f"line {n}: " if r.status else ""
            outputs.append(prefix + r.output)
        status = max(status, r.status)
        if session.done:
            break
    return Result("\n".join(outputs), status)
