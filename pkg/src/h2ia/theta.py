"""Substitution rules: how each Nielsen generator s rewrites IA generators so that
the rewritten word represents s t s^{-1}.

Swaps and inversions act by relabelling indices. Transvections use a rule table
written in a small template language. A row ``pattern -> template`` matches an
IA generator ``t`` against the transvection ``Transv(±a, ±b)``; the letters
``a``/``b`` are the transvection's indices, ``c``/``d`` are any other indices,
and ``sa``, ``sb``, ``sc``, ``sd`` are the signs attached to those letters.

Conventions used when reading the table:

* rows are stated for Conj letters with positive second slot; the image of an
  inverse Conj letter is the inverse of the image of its positive form;
* the sign of a Conj first slot is ignored, and ``C(x, y^-1)`` means ``C(x, y)^-1``;
* a commutator transvection matched by no row, whose flipped form
  (``CommTv(a, c, b)``) is matched, maps to the inverse of the flipped image;
* everything else is fixed.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .ia_alphabet import (
    CommTv,
    Conj,
    Gen,
    Transv,
    all_aut_generators,
    all_ia_generators,
    evaluate,
    inverse_gen,
    iw,
    pw,
)

# Rules for Transv(sa*a, sb*b), i.e. x_a^sa ↦ x_b^sb x_a^sa.
TRANSVECTION_RULES: tuple[tuple[str, str], ...] = (
    ("C(c,a)", "(C(c,a)^sa C(c,b)^sb)^sa"),
    ("C(a,c)", "C(a,c) Mc(a^sa,b^-sb,c)"),
    ("C(b,c)", "C(b,c) Mc(a^sa,b^-sb,c^-1)"),
    ("C(b,a)", "(C(a,b)^sb C(b,a)^sa)^sa"),
    ("Mc(a^sa,c^sc,d^sd)", "C(a,b)^sb Mc(a^sa,c^sc,d^sd) C(a,b)^-sb"),
    ("Mc(c^sc,a^sa,d^sd)", "Mc(c^sc,b^sb,d^sd) C(c,b)^-sb Mc(c^sc,a^sa,d^sd) C(c,b)^sb"),
    ("Mc(c^sc,a^-sa,d^sd)", "Mc(c^sc,a^-sa,d^sd) C(c,a)^sa Mc(c^sc,b^-sb,d^sd) C(c,a)^-sa"),
    ("Mc(b^sb,c^sc,d^sd)", "C(a,b)^sb Mc(a^-sa,c^sc,d^sd) Mc(b^sb,c^sc,d^sd) C(a,b)^-sb"),
    ("Mc(b^-sb,c^sc,d^sd)", "Mc(a^sa,c^sc,d^sd) Mc(b^-sb,c^sc,d^sd)"),
    ("Mc(a^sa,b^sb,c^sc)", "C(a,b)^sb Mc(a^sa,b^sb,c^sc) C(a,b)^-sb"),
    ("Mc(a^sa,b^-sb,c^sc)", "C(a,b)^sb Mc(a^sa,b^-sb,c^sc) C(a,b)^-sb"),
    ("Mc(b^sb,a^sa,c^sc)", "C(a,c)^sc Mc(a^sa,b^-sb,c^sc) C(b,c)^-sc Mc(b^-sb,a^sa,c^-sc)"),
    (
        "Mc(b^sb,a^-sa,c^sc)",
        "C(c,b)^-sb C(c,a)^-sa Mc(b^-sb,c^-sc,a^sa) C(b,c)^sc Mc(a^sa,c^sc,b^-sb)"
        " C(a,c)^-sc C(c,a)^sa C(c,b)^sb",
    ),
    (
        "Mc(b^-sb,a^sa,c^sc)",
        "C(a,c)^-sc C(c,a)^sa Mc(b^-sb,c^sc,a^-sa) C(c^sc,b)^sb Mc(a^sa,c^sc,b^-sb)"
        " C(b,c)^sc C(c,b)^-sb C(c,a)^-sa",
    ),
    (
        "Mc(b^-sb,a^-sa,c^sc)",
        "C(b,c)^-sc Mc(a^sa,b^-sb,c^sc) C(c,b)^-sb Mc(b^-sb,a^-sa,c^sc) C(c,a)^-sa"
        " C(a,c)^sc C(c,a)^sa C(c,b)^sb",
    ),
    ("Mc(c^sc,a^sa,b^sb)", "C(a,b)^sb Mc(c^sc,a^sa,b^sb) C(a,b)^-sb"),
    ("Mc(c^sc,a^sa,b^-sb)", "Mc(c^sc,b^sb,a^sa)"),
)

_TOKEN = re.compile(r"\s*(Mc|C|\(|\)|\^|,|-?[a-z]+|-?1)")


def _lex(text: str) -> list[str]:
    out, pos, text = [], 0, text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse rule text at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return out


def _parse_seq(toks: list[str], i: int):
    items = []
    while i < len(toks) and toks[i] != ")":
        t = toks[i]
        if t == "(":
            sub, i = _parse_seq(toks, i + 1)
            i += 1
            exp = "1"
            if i < len(toks) and toks[i] == "^":
                exp, i = toks[i + 1], i + 2
            items.append(("group", tuple(sub), exp))
        elif t in ("C", "Mc"):
            i += 2
            slots = []
            while True:
                letter, sign = toks[i], "1"
                i += 1
                if toks[i] == "^":
                    sign, i = toks[i + 1], i + 2
                slots.append((letter, sign))
                if toks[i] == ",":
                    i += 1
                    continue
                i += 1
                break
            exp = "1"
            if i < len(toks) and toks[i] == "^":
                exp, i = toks[i + 1], i + 2
            items.append((t, tuple(slots), exp))
        else:
            raise ValueError(f"unexpected token {t!r} in rule text")
    return items, i


def parse_template(text: str) -> tuple:
    items, i = _parse_seq(_lex(text), 0)
    return tuple(items)


def _sign_value(expr: str, signs: dict[str, int]) -> int:
    neg = expr.startswith("-")
    name = expr.lstrip("-")
    v = 1 if name == "1" else signs[name]
    return -v if neg else v


def _instantiate(items: Sequence, letters: dict[str, int], signs: dict[str, int]) -> tuple:
    out: tuple = ()
    for kind, body, exp in items:
        e = _sign_value(exp, signs)
        if kind == "group":
            w = _instantiate(body, letters, signs)
            out = pw(out, w if e > 0 else iw(w))
        elif kind == "C":
            (x, _), (y, ys) = body
            e *= _sign_value(ys, signs)
            out = pw(out, (Conj(letters[x], letters[y] * e),))
        else:
            g = CommTv(*[_sign_value(s, signs) * letters[x] for x, s in body])
            out = pw(out, (g if e > 0 else inverse_gen(g),))
    return out


@dataclass(frozen=True)
class ThetaRule:
    pattern_text: str
    template_text: str
    pattern: tuple
    template: tuple

    def match(self, t: Gen, a: int, sa: int, b: int, sb: int):
        kind, slots, _ = self.pattern[0]
        if kind != t[0]:
            return None
        letters = {"a": a, "b": b}
        signs = {"sa": sa, "sb": sb}
        if kind == "C":
            if t[2] < 0:
                return None
            values = [(t[1], 1), (t[2], 1)]
        else:
            values = [(abs(x), 1 if x > 0 else -1) for x in t[1:]]
        for (sym, sexpr), (idx, sg) in zip(slots, values):
            if sym in letters:
                if letters[sym] != idx:
                    return None
            elif idx in letters.values():
                return None
            else:
                letters[sym] = idx
            if kind == "Mc":
                name = sexpr.lstrip("-")
                if name in signs or name == "1":
                    if _sign_value(sexpr, signs) != sg:
                        return None
                else:
                    signs[name] = -sg if sexpr.startswith("-") else sg
        return letters, signs

    def to_json(self) -> dict:
        return {"match": self.pattern_text, "image": self.template_text}


def make_rule(pattern: str, template: str) -> ThetaRule:
    pat = parse_template(pattern)
    if len(pat) != 1 or pat[0][0] == "group":
        raise ValueError(f"rule pattern must be a single generator: {pattern!r}")
    return ThetaRule(pattern, template, pat, parse_template(template))


def relabel_letter(s: Gen, x: int) -> int:
    """Image of the signed basis letter x under a swap or an inversion."""
    ax = abs(x)
    if s[0] == "P":
        a, b = s[1], s[2]
        y = b if ax == a else a if ax == b else ax
        return y if x > 0 else -y
    return -x if ax == s[1] else x


class RuleTable:
    def __init__(self, rows: Iterable[tuple[str, str]] = TRANSVECTION_RULES, check: bool = True):
        self.rules = tuple(make_rule(p, t) for p, t in rows)
        self._image = lru_cache(maxsize=1 << 16)(self._image_uncached)
        if check:
            self.check_totality()

    def _matches(self, t: Gen, a: int, sa: int, b: int, sb: int):
        hits = []
        for rule in self.rules:
            m = rule.match(t, a, sa, b, sb)
            if m is not None:
                hits.append((rule, m))
        return hits

    def _transvection_image(self, s: Gen, t: Gen) -> tuple:
        a, b = abs(s[1]), abs(s[2])
        sa, sb = (1 if s[1] > 0 else -1), (1 if s[2] > 0 else -1)
        if t[0] == "C" and t[2] < 0:
            return iw(self._transvection_image(s, Conj(t[1], -t[2])))
        hits = self._matches(t, a, sa, b, sb)
        if len(hits) > 1:
            raise RuntimeError(f"rules {[h[0].pattern_text for h in hits]} all match {t!r} under {s!r}")
        if hits:
            rule, (letters, signs) = hits[0]
            return _instantiate(rule.template, letters, signs)
        if t[0] == "Mc":
            flipped = inverse_gen(t)
            hits = self._matches(flipped, a, sa, b, sb)
            if len(hits) > 1:
                raise RuntimeError(f"several rules match the flip of {t!r} under {s!r}")
            if hits:
                rule, (letters, signs) = hits[0]
                return iw(_instantiate(rule.template, letters, signs))
        return (t,)

    def _image_uncached(self, s: Gen, t: Gen) -> tuple:
        kind = s[0]
        if kind == "M":
            return self._transvection_image(s, t)
        if kind not in ("P", "I"):
            raise TypeError(f"{s!r} is not a Nielsen generator")
        if t[0] == "C":
            return (Conj(abs(relabel_letter(s, t[1])), relabel_letter(s, t[2])),)
        return (CommTv(*(relabel_letter(s, x) for x in t[1:])),)

    def theta_gen(self, s: Gen, t: Gen) -> tuple:
        return self._image(s, t)

    def theta_word(self, w: Sequence[Gen], v: Sequence[Gen]) -> tuple:
        """Apply θ(w[0]) ∘ ... ∘ θ(w[-1]) to v, the last letter of w acting first."""
        out = tuple(v)
        for s in reversed(tuple(w)):
            out = pw(*[self._image(s, t) for t in out])
        return out

    def check_totality(self, rank: int = 5) -> None:
        """Fail if some generator shape is matched by two rules.

        The transvection is pinned to indices 1 and 2; the remaining indices
        of ``t`` then cover every coincidence pattern by relabelling.
        """
        ts = all_ia_generators(rank)
        for sa in (1, -1):
            for sb in (1, -1):
                for t in ts:
                    hits = self._matches(t, 1, sa, 2, sb)
                    if len(hits) > 1:
                        raise RuntimeError(
                            f"ambiguous rule table: {[h[0].pattern_text for h in hits]} match {t!r}"
                        )
                    img = self._transvection_image(Transv(sa, 2 * sb), t)
                    if not isinstance(img, tuple):
                        raise RuntimeError(f"rule image for {t!r} is not a word")

    def dump(self) -> list[dict]:
        return [r.to_json() for r in self.rules]

    def dumps(self) -> str:
        return json.dumps({"transvection_rules": self.dump()}, indent=2)


DEFAULT_TABLE = RuleTable()


def theta_gen(s: Gen, t: Gen, table: RuleTable | None = None) -> tuple:
    return (table or DEFAULT_TABLE).theta_gen(s, t)


def theta_word(w: Sequence[Gen], v: Sequence[Gen], table: RuleTable | None = None) -> tuple:
    return (table or DEFAULT_TABLE).theta_word(w, v)


def conjugation_witness(s: Gen, t: Gen, rank: int, table: RuleTable | None = None) -> int | None:
    """First basis index where θ(s)(t) and s t s^{-1} disagree, else None."""
    lhs = evaluate(theta_gen(s, t, table), rank).images
    rhs = evaluate((s, t, inverse_gen(s)), rank).images
    if lhs == rhs:
        return None
    return next(i for i, (x, y) in enumerate(zip(lhs, rhs), start=1) if x != y)


def verify_theta_conjugation(s: Gen, t: Gen, rank: int, table: RuleTable | None = None) -> bool:
    return conjugation_witness(s, t, rank, table) is None


def inverse_witness(s: Gen, t: Gen, rank: int, table: RuleTable | None = None) -> int | None:
    """First basis index where θ(s)(θ(s^{-1})(t)) and t evaluate differently."""
    table = table or DEFAULT_TABLE
    w = table.theta_word((s, inverse_gen(s)), (t,))
    lhs = evaluate(w, rank).images
    rhs = evaluate((t,), rank).images
    if lhs == rhs:
        return None
    return next(i for i, (x, y) in enumerate(zip(lhs, rhs), start=1) if x != y)


def all_pairs(rank: int):
    ss = all_aut_generators(rank)
    ts = all_ia_generators(rank)
    return [(s, t) for s in ss for t in ts]


__all__ = [
    "DEFAULT_TABLE",
    "RuleTable",
    "TRANSVECTION_RULES",
    "all_pairs",
    "conjugation_witness",
    "inverse_witness",
    "theta_gen",
    "theta_word",
    "verify_theta_conjugation",
]
