"""Seeded generators and independent oracles for the engine's laws.

Every oracle recomputes its expectation along a separate path: additivity is
checked by evaluating :func:`fdim` on expression trees (never the normalizer's
own solve) together with an independent atom-collision computation; the
chain oracle folds single-letter conversions and compares with the closed
form and with the engine's class view.  Runs are reproducible from the seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .certify import Certificate, replay
from .engine import rescale as certified_rescale
from .engine import trade as certified_trade
from .errors import EngineError, UnsupportedCase
from .expr import (FGF, DirectSum, FreeProduct, Matrix, Opaque, Rescale,
                   ScaledProduct, C, H, R, well_formed)
from .fclass import (SCALARS, Diffuse, FNormalForm, fdim_nf, free_product_fclass,
                     make_nf, nf_to_expr, normalize_fclass)
from .fdim import fdim
from .iso import Isomorphic, class_view, iso_verdict
from .lang import print_expr, print_form
from .scalars import INF, ONE, ZERO
from .words import Base, Letter, Word, canonicalize_word, rho, word_of

SYMBOLS = ("Q1", "Q2", "Q3", "N")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_depth: int = 3
    max_summands: int = 3
    max_letters: int = 4
    weight_den_bound: int = 12


class Gen:
    """A deterministic stream of random expressions and words."""

    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    def rational(self, lo: int = 1, hi: int = 8, den: int = 4) -> Fraction:
        return Fraction(self.rng.randint(lo, hi), self.rng.randint(1, den))

    def unit(self) -> Fraction:
        """A rational in (0, 1]."""
        d = self.rng.randint(1, self.cfg.weight_den_bound)
        return Fraction(self.rng.randint(1, d), d)

    def weights(self, k: int) -> list:
        d = self.rng.randint(k, max(k, self.cfg.weight_den_bound))
        cuts = sorted(self.rng.sample(range(1, d), k - 1))
        return [Fraction(b - a, d) for a, b in zip([0] + cuts, cuts + [d])]

    def fclass_leaf(self):
        roll = self.rng.random()
        if roll < 0.3:
            return FGF(1 + self.rational())
        if roll < 0.55:
            return C
        if roll < 0.8:
            return Matrix(self.rng.randint(2, 4))
        if roll < 0.9:
            return H
        return R

    def fclass_expr(self, depth: int | None = None):
        depth = self.cfg.max_depth if depth is None else depth
        roll = self.rng.random()
        if depth <= 0 or roll < 0.35:
            return self.fclass_leaf()
        if roll < 0.65:
            k = self.rng.randint(2, max(2, self.cfg.max_summands))
            return DirectSum(tuple(zip(self.weights(k),
                                       (self.fclass_expr(depth - 1) for _ in range(k)))))
        if roll < 0.8:
            # finite dimensional abelian: exercises the atom collision rule
            k = self.rng.randint(2, max(2, self.cfg.max_summands))
            return DirectSum(tuple((w, C) for w in self.weights(k)))
        return FreeProduct(tuple(self.fclass_expr(depth - 1) for _ in range(2)))

    def ii1_fclass(self):
        return R if self.rng.random() < 0.2 else FGF(1 + self.rational())

    def word_expr(self, depth: int | None = None):
        """A well-formed expression mentioning opaque factors."""
        depth = self.cfg.max_depth if depth is None else depth
        roll = self.rng.random()
        if depth <= 0 or roll < 0.25:
            return Opaque(self.rng.choice(SYMBOLS))
        if roll < 0.6:
            base = self.word_expr(depth - 1) if self.rng.random() < 0.7 else self.ii1_fclass()
            letters = []
            for _ in range(self.rng.randint(1, self.cfg.max_letters)):
                sq = self.unit() * self.rng.choice([1, 1, 1, 2])
                pick = self.rng.random()
                if pick < 0.6:
                    body = self.word_expr(depth - 1)
                elif pick < 0.8 or sq > 1:
                    body = self.ii1_fclass()
                else:
                    body = self.fclass_expr(1)
                letters.append((sq, body))
            return ScaledProduct(base, tuple(letters))
        if roll < 0.85:
            parts = [self.word_expr(depth - 1)]
            parts.append(self.word_expr(depth - 1) if self.rng.random() < 0.6
                         else self.ii1_fclass())
            return FreeProduct(tuple(parts))
        return Rescale(self.word_expr(depth - 1), self.unit() * self.rng.choice([1, 4]))

    def word(self, max_letters: int = 6, tail=None) -> Word:
        """A based word with opaque letters at supports in (0, 1]."""
        letters = tuple(Letter(self.rng.choice(SYMBOLS[:3]), self.rational(1, 4, 4), self.unit())
                        for _ in range(self.rng.randint(0, max_letters)))
        if tail is None:
            tail = self.unit() * self.rng.randint(0, 3)
        return Word(Base("N", self.rational(1, 4, 4)), letters, tail)

    def scale(self) -> Fraction:
        return self.unit() * self.rng.choice([1, 1, 4, 9])


def random_fclass_expr(cfg: GenConfig):
    return Gen(cfg).fclass_expr()


# -- reports ---------------------------------------------------------------------

@dataclass
class Report:
    name: str
    cases: int = 0
    skipped: int = 0
    failure: str = ""
    counterexample: list = field(default_factory=list)  # script lines

    @property
    def ok(self) -> bool:
        return not self.failure

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        text = f"{self.name}: {status} ({self.cases} cases"
        if self.skipped:
            text += f", {self.skipped} unsupported inputs regenerated"
        text += ")"
        if self.failure:
            text += f"\n  {self.failure}"
        return text

    def script(self) -> str:
        lines = [f"# counterexample for {self.name}", f"# {self.failure}"]
        return "\n".join(lines + self.counterexample) + "\n"


# -- shrinking -------------------------------------------------------------------

def _simpler(e):
    """Candidate replacements for ``e``, simplest first."""
    out = []
    if isinstance(e, (DirectSum, FreeProduct, Rescale, ScaledProduct)):
        if isinstance(e, DirectSum):
            out += [x for _, x in e.terms]
            for i, (w, x) in enumerate(e.terms):
                for y in _simpler(x):
                    terms = list(e.terms)
                    terms[i] = (w, y)
                    out.append(DirectSum(tuple(terms)))
        elif isinstance(e, FreeProduct):
            out += list(e.factors)
            if len(e.factors) > 2:
                out += [FreeProduct(e.factors[:i] + e.factors[i + 1:])
                        for i in range(len(e.factors))]
            for i, x in enumerate(e.factors):
                for y in _simpler(x):
                    out.append(FreeProduct(e.factors[:i] + (y,) + e.factors[i + 1:]))
        elif isinstance(e, Rescale):
            out.append(e.body)
        else:
            out.append(e.base)
    elif isinstance(e, FGF) and e.r != 2:
        out.append(FGF(Fraction(2)))
    elif isinstance(e, Matrix) and e.n > 2:
        out += [C, Matrix(2)]
    return [x for x in out if well_formed(x).ok]


def shrink(e, fails, budget: int = 2000):
    """Greedy shrinking: keep replacing ``e`` by a simpler failing candidate."""
    progress = True
    while progress and budget > 0:
        progress = False
        for cand in _simpler(e):
            budget -= 1
            if fails(cand):
                e, progress = cand, True
                break
            if budget <= 0:
                break
    return e


# -- fdim additivity ---------------------------------------------------------------

def expected_atoms(a: FNormalForm, b: FNormalForm) -> list:
    return sorted((x + y - 1 for x in a.atoms for y in b.atoms if x + y > 1), reverse=True)


def additivity_problem(ea, eb, kernel=free_product_fclass) -> str | None:
    """Check one pair; None when the kernel behaves, a description otherwise.

    Raises UnsupportedCase when the pair lies outside the supported domain as
    judged by the oracle itself.
    """
    a, b = normalize_fclass(ea), normalize_fclass(eb)
    total = fdim(ea) + fdim(eb)
    if a == SCALARS or b == SCALARS:
        expected = b if a == SCALARS else a
        got = kernel(a, b)
        return None if got == expected else "product with the scalars changed the other factor"
    atoms = expected_atoms(a, b)
    rest = ONE - sum(atoms, ZERO)
    if rest <= 0:
        raise UnsupportedCase("oracle: atoms exhaust the trace")
    if total != INF:
        # conservation: total = 1 + rest^2 (r - 1) - sum(atoms^2)
        r = 1 + (total - 1 + sum(x * x for x in atoms)) / rest**2
        if r < 1:
            raise UnsupportedCase("oracle: solved parameter below 1")
    try:
        got = kernel(a, b)
    except UnsupportedCase as exc:
        return f"kernel rejected a supported product: {exc}"
    if list(got.atoms) != atoms:
        return f"atoms {list(map(str, got.atoms))} but expected {list(map(str, atoms))}"
    if got.blocks or len(got.diffuse) != 1 or got.diffuse[0].weight != rest:
        return "result is not one diffuse part plus atoms"
    got_fdim = fdim(nf_to_expr(got))
    if got_fdim != total:
        return f"fdim {got_fdim} but fdim(A) + fdim(B) = {total}"
    return None


def mutant_free_product(a: FNormalForm, b: FNormalForm) -> FNormalForm:
    """A deliberately wrong kernel (atoms a+b instead of a+b-1) for mutation tests."""
    if a == SCALARS:
        return b
    if b == SCALARS:
        return a
    atoms = [x + y for x in a.atoms for y in b.atoms if x + y > 1]
    rest = ONE - sum(atoms, ZERO)
    if rest <= 0:
        raise UnsupportedCase("atoms exhaust the trace")
    r = 1 + (fdim_nf(a) + fdim_nf(b) - 1 + sum(x * x for x in atoms)) / rest**2
    return make_nf([Diffuse("FGF", rest, r)], [], atoms)


def check_additivity(cfg: GenConfig, n: int, kernel=free_product_fclass,
                     max_retries: int = 50) -> Report:
    gen = Gen(cfg)
    rep = Report("fdim-additivity")
    for _ in range(n):
        for _attempt in range(max_retries):
            ea, eb = gen.fclass_expr(), gen.fclass_expr()
            try:
                problem = additivity_problem(ea, eb, kernel)
                break
            except UnsupportedCase:
                rep.skipped += 1
        else:
            continue
        rep.cases += 1
        if problem:
            def fails_a(x, eb=eb):
                return _still_fails(x, eb, kernel)
            ea = shrink(ea, fails_a)
            eb = shrink(eb, lambda y: _still_fails(ea, y, kernel))
            problem = additivity_problem(ea, eb, kernel)
            rep.failure = f"{problem} for A = {print_expr(ea)}, B = {print_expr(eb)}"
            rep.counterexample = [f":nf {print_expr(FreeProduct((ea, eb)))}",
                                  f":fdim {print_expr(ea)}", f":fdim {print_expr(eb)}"]
            return rep
    return rep


def _still_fails(ea, eb, kernel) -> bool:
    try:
        return additivity_problem(ea, eb, kernel) is not None
    except EngineError:
        return False


# -- words: closed form vs folded single-letter conversions -------------------------

def closed_form_tail(w: Word):
    """Tail of N * Q_1 * ... * Q_n * L(F_r) for ``w`` with tail 0: r = -n + sum t_i^2."""
    return -len(w.letters) + sum((x.t_sq for x in w.letters), ZERO)


def folded_tail(w: Word):
    """Apply the one-letter conversion r <- r - 1 + t^2 letter by letter."""
    r = w.tail
    for x in w.letters:
        r = r - 1 + x.t_sq
    return r


def chain_vs_closed_form(cfg: GenConfig, n: int) -> Report:
    gen = Gen(cfg)
    rep = Report("chain-vs-closed-form")
    for _ in range(n):
        w = gen.word(max_letters=6, tail=ZERO)
        rep.cases += 1
        closed, folded = closed_form_tail(w), folded_tail(w)
        canon = canonicalize_word(w)
        lifted = Word(w.base, tuple(x.lifted() for x in w.letters), folded)
        problems = []
        if closed != folded:
            problems.append(f"closed form {closed} vs fold {folded}")
        if class_view(canon).tail != closed:
            problems.append(f"engine extended tail {class_view(canon).tail} vs {closed}")
        if canonicalize_word(lifted) != canon:
            problems.append("canonical words differ")
        if problems:
            rep.failure = "; ".join(problems) + f" for {print_form(w)}"
            rep.counterexample = [f"# word {print_form(w)}"]
            return rep
    return rep


# -- rescale laws ----------------------------------------------------------------------

def random_factor_form(gen: Gen):
    roll = gen.rng.random()
    if roll < 0.25:
        return normalize_fclass(gen.ii1_fclass())
    if roll < 0.5:
        w = gen.word()
        return canonicalize_word(w)
    e = gen.word_expr()
    return word_of(e)


def check_rescale_laws(cfg: GenConfig, n: int, sink: list | None = None) -> Report:
    gen = Gen(cfg)
    rep = Report("rescale-laws")
    for _ in range(n):
        try:
            f = random_factor_form(gen)
        except UnsupportedCase:
            rep.skipped += 1
            continue
        s, t = gen.scale(), gen.scale()
        rep.cases += 1
        one, _ = certified_rescale(f, ONE)
        twice, c1 = certified_rescale(f, s)
        twice, c2 = certified_rescale(twice, t)
        once, c3 = certified_rescale(f, s * t)
        problems = []
        if one != f:
            problems.append("rescale by 1 is not the identity")
        if twice != once:
            problems.append(f"composition: {print_form(twice)} vs {print_form(once)}")
        if isinstance(f, Word) and not f.stable and rho(once) != rho(f) / (s * t):
            problems.append("rho does not scale by 1/s^2")
        if sink is not None:
            sink.extend((c1, c2, c3))
        if not all(replay(c) for c in (c1, c2, c3)):
            problems.append("certificate does not replay")
        if problems:
            rep.failure = "; ".join(problems) + f" for {print_form(f)} at s^2={s}, t^2={t}"
            rep.counterexample = [f"# form {print_form(f)}"]
            return rep
    return rep


# -- trade invariance ----------------------------------------------------------------

def _keys(w: Word):
    return sorted(x.key for x in w.letters)


def random_trades(gen: Gen, w: Word, steps: int):
    """A legal sequence of single trades with its certificate."""
    cert = Certificate(print_form(w))
    for _ in range(steps):
        if not w.letters:
            break
        i = gen.rng.randrange(len(w.letters))
        cap = min(ONE, w.tail + w.letters[i].t_sq)
        new = cap * gen.unit()
        w, more = certified_trade(w, i, new)
        cert = cert.then(more)
    return w, cert


def check_trade_invariance(cfg: GenConfig, n: int, sink: list | None = None) -> Report:
    gen = Gen(cfg)
    rep = Report("trade-invariance")
    for _ in range(n):
        w0 = gen.word()
        w, cert = random_trades(gen, w0, gen.rng.randint(1, 5))
        rep.cases += 1
        problems = []
        if rho(w) != rho(w0):
            problems.append("rho changed")
        if _keys(w) != _keys(w0):
            problems.append("letter keys changed")
        if w.base != w0.base:
            problems.append("base changed")
        if w.tail < 0:
            problems.append("negative tail")
        verdict = iso_verdict(w0, w)
        if sink is not None:
            sink.append(cert)
            if isinstance(verdict, Isomorphic):
                sink.extend((verdict.left, verdict.right))
        if not replay(cert):
            problems.append("certificate does not replay")
        if not isinstance(verdict, Isomorphic):
            problems.append("not isomorphic to the original")
        if problems:
            rep.failure = "; ".join(problems) + f" for {print_form(w0)} -> {print_form(w)}"
            rep.counterexample = [f"# {print_form(w0)}", f"# {print_form(w)}"]
            return rep
    return rep


def replay_certificate(cert: Certificate, initial) -> bool:
    return replay(cert, print_expr(initial))


SUITES = {
    "fdim": [check_additivity],
    "words": [chain_vs_closed_form, check_rescale_laws, check_trade_invariance],
}


def run_suite(name: str, cfg: GenConfig, n: int) -> list:
    checks = SUITES["fdim"] + SUITES["words"] if name == "all" else SUITES[name]
    return [check(cfg, n) for check in checks]


__all__ = ["GenConfig", "Gen", "Report", "random_fclass_expr", "check_additivity",
           "mutant_free_product", "chain_vs_closed_form", "check_rescale_laws",
           "check_trade_invariance", "replay_certificate", "shrink", "run_suite"]
