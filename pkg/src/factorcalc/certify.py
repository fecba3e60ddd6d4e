"""Certificates: ordered rewrite steps that can be replayed and checked.

Each step records the rule name, a descriptive anchor formula, the parameter
bindings, and the canonical text of the form before and after.  Replaying a
step parses ``before``, applies the named rule with the recorded bindings and
compares the printed result with ``after``; consecutive steps must chain.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EngineError, MalformedCertificate, ParseError
from .expr import AssumptionSet
from .fclass import FNormalForm, normalize_fclass, rescale_fclass
from .lang import parse, parse_form, print_form
from .words import (Word, absorb_stable, canonicalize_word, collapse_form,
                    rescale_word, trade_step, word_of)


@dataclass(frozen=True)
class Step:
    rule: str
    anchor: str
    bindings: dict
    before: str
    after: str

    def label(self) -> str:
        return self.bindings.get("law", self.rule)

    def to_json(self) -> dict:
        return {"rule": self.rule, "anchor": self.anchor, "bindings": dict(self.bindings),
                "before": self.before, "after": self.after}


@dataclass
class Certificate:
    initial: str
    steps: list = field(default_factory=list)
    final: str = ""

    def __post_init__(self):
        if not self.final:
            self.final = self.steps[-1].after if self.steps else self.initial

    def then(self, other: "Certificate") -> "Certificate":
        if other.initial != self.final:
            raise MalformedCertificate("certificates do not chain")
        return Certificate(self.initial, self.steps + other.steps, other.final)

    def labels(self) -> list:
        out = []
        for s in self.steps:
            if s.label() not in out:
                out.append(s.label())
        return out

    def to_json(self) -> dict:
        return {"initial": self.initial, "final": self.final,
                "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            steps = [Step(s["rule"], s["anchor"], dict(s["bindings"]), s["before"], s["after"])
                     for s in data["steps"]]
            return cls(data["initial"], steps, data["final"])
        except (KeyError, TypeError) as exc:
            raise MalformedCertificate(f"missing certificate field: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def render(self) -> str:
        lines = [f"start: {self.initial}"]
        for i, s in enumerate(self.steps, 1):
            extra = ", ".join(f"{k}={v}" for k, v in s.bindings.items())
            lines.append(f"{i}. {s.rule}" + (f" [{extra}]" if extra else ""))
            lines.append(f"   by {s.anchor}")
            lines.append(f"   {s.before}  =>  {s.after}")
        lines.append(f"final: {self.final}")
        return "\n".join(lines)


def assumptions_binding(a: AssumptionSet) -> dict:
    return {"stable": ",".join(sorted(a.stable)), "mode": a.mode}


def _assumptions(b: dict) -> AssumptionSet:
    names = [x for x in b.get("stable", "").split(",") if x]
    return AssumptionSet(frozenset(names)).with_mode(b.get("mode", "distinct"))


def _word(text: str) -> Word:
    f = parse_form(text)
    if not isinstance(f, Word):
        raise MalformedCertificate(f"expected a word, got {text!r}")
    return f


def _rescale(text, b):
    f = parse_form(text)
    sq = Fraction(b["s"])
    return rescale_fclass(f, sq) if isinstance(f, FNormalForm) else rescale_word(f, sq)


# rule name -> (anchor, apply(before_text, bindings) -> form)
RULES = {
    "fclass-normalize": (
        "L(F_r) (+) D normal form; fdim(A*B) = fdim(A) + fdim(B); "
        "atoms of A*B are a+b-1 for atom pairs with a+b > 1",
        lambda text, b: normalize_fclass(parse(text))),
    "to-word": (
        "N (*) [t, A] = N * L(F_{t^2 fdim A}) for A in class F; "
        "[t, Q] with t > 1 is Q_{1/t} * L(F_{t^2-1}); nested scaled products flatten",
        lambda text, b: word_of(parse(text), _assumptions(b))),
    "rescale": (
        "(N (*) [t, Q] * L(F_r))_s = N_s (*) [t/s, Q] * L(F_{r/s^2}); "
        "(Q_1*...*Q_n)_s = Q_1s*...*Q_ns * L(F_{(n-1)(s^-2 - 1)}); L(F_r)_s = L(F_{1+(r-1)/s^2})",
        _rescale),
    "trade": (
        "(N * L(F_r)) (*) [t, Q] = (N * L(F_{r - s^2 + t^2})) (*) [s, Q_{s/t}], r >= s^2 - t^2",
        lambda text, b: trade_step(_word(text), int(b["letter"]) - 1, Fraction(b["t_sq"]))),
    "canonicalize": (
        "r' = r + sum(t_i^2 - s_i^2) with r' >= 0; maximal lift toward t = 1",
        lambda text, b: canonicalize_word(_word(text))),
    "absorb-stable": (
        "N (*) [t_i, Q_i] = N * (*)_i Q_i_{1/t_i} when L(F_inf) is absorbed",
        lambda text, b: absorb_stable(_word(text), _assumptions(b))),
    "collapse": (
        "all L(F_r), 1 < r <= inf, identified with L(F_inf)",
        lambda text, b: collapse_form(parse_form(text))),
}


def make_step(rule: str, before, after, **bindings) -> Step:
    anchor = RULES[rule][0]
    return Step(rule, anchor, {k: str(v) for k, v in bindings.items()},
                before if isinstance(before, str) else print_form(before),
                print_form(after))


def replay_step(step: Step) -> bool:
    if step.rule not in RULES:
        raise MalformedCertificate(f"unknown rule {step.rule!r}")
    try:
        got = RULES[step.rule][1](step.before, step.bindings)
    except (KeyError, ValueError, ZeroDivisionError, ParseError) as exc:
        raise MalformedCertificate(f"bad step for {step.rule}: {exc}") from exc
    except EngineError:
        return False
    return print_form(got) == step.after


def replay(cert: Certificate, initial: str | None = None) -> bool:
    """True iff every step reproduces its recorded result and the chain closes."""
    if initial is not None and initial != cert.initial:
        return False
    here = cert.initial
    for step in cert.steps:
        if step.before != here or not replay_step(step):
            return False
        here = step.after
    return here == cert.final
