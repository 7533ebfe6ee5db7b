"""Action equations: how a transvection acts on an H-generator, stored as data.

An equation reads ``actor · subject = Σ coef · term (+ wildcard generators)``, or
``subject = Σ coef · term`` when there is no actor. Letters are symbolic; an
instantiation maps each letter to a signed basis index, optionally merging
letters as allowed by the equation's coincidence clauses.

The checks here are necessary conditions only: every term must be a genuine
relator, and both sides must have the same image in ∧²H_1(IA_n).
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations, product

from ..ia_alphabet import Gen, Transv, is_trivial, iw, max_index, pw
from ..relations import enumerate_instances, family
from ..theta import theta_gen
from .exponents import canonical_generator
from .wedge import SpanModP, combine, psi

Letter = tuple[str, int]  # (letter name, relative sign)


@dataclass(frozen=True)
class SymTerm:
    family: str
    slots: tuple[Letter, ...]

    def __str__(self):
        return f"{self.family.lower()}({','.join(('-' if s < 0 else '') + n for n, s in self.slots)})"


@dataclass(frozen=True)
class ActionEquation:
    id: str
    actor: tuple[Letter, Letter] | None
    subject: SymTerm
    result: tuple[tuple[int, SymTerm], ...]
    wildcards: frozenset[str] = frozenset()
    even_if: tuple[str, ...] = ()

    @property
    def is_identity(self) -> bool:
        return self.actor is None

    def letters(self) -> list[str]:
        seen: list[str] = []
        slots = list(self.actor or ()) + list(self.subject.slots)
        for _, t in self.result:
            slots.extend(t.slots)
        for name, _ in slots:
            if name not in seen:
                seen.append(name)
        return seen

    def families(self) -> set[str]:
        return {self.subject.family} | {t.family for _, t in self.result}

    def __str__(self):
        rhs = " ".join(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}{t}" for c, t in self.result)
        if self.wildcards:
            rhs += " +(" + ",".join(sorted(self.wildcards)) + ")"
        if self.actor is None:
            return f"{self.subject} = {rhs}"
        (x, sx), (y, sy) = self.actor
        return f"M({'-' if sx < 0 else ''}{x},{'-' if sy < 0 else ''}{y}) . {self.subject} = {rhs}"


_TERM = re.compile(r"^([+-]?\d*)h(\d)\(([^)]*)\)$")
_ACTOR = re.compile(r"^M\((-?[a-z]),(-?[a-z])\)$")


def _letter(tok: str) -> Letter:
    tok = tok.strip()
    return (tok[1:], -1) if tok.startswith("-") else (tok, 1)


def parse_term(text: str) -> tuple[int, SymTerm]:
    m = _TERM.match(text.replace(" ", ""))
    if not m:
        raise ValueError(f"cannot parse term {text!r}")
    coef_txt, idx, args = m.groups()
    coef = -1 if coef_txt == "-" else 1 if coef_txt in ("", "+") else int(coef_txt)
    name = f"H{idx}"
    slots = tuple(_letter(a) for a in args.split(","))
    if len(slots) != family(name).arity:
        raise ValueError(f"{text!r}: {name} takes {family(name).arity} slots")
    return coef, SymTerm(name, slots)


def equation_from_json(obj: dict) -> ActionEquation:
    actor = None
    if obj.get("actor"):
        m = _ACTOR.match(obj["actor"].replace(" ", ""))
        if not m:
            raise ValueError(f"{obj.get('id')}: cannot parse actor {obj['actor']!r}")
        actor = (_letter(m.group(1)), _letter(m.group(2)))
    coef, subject = parse_term(obj["subject"])
    if coef != 1:
        raise ValueError(f"{obj.get('id')}: subject must have coefficient 1")
    return ActionEquation(
        id=obj["id"],
        actor=actor,
        subject=subject,
        result=tuple(parse_term(t) for t in obj["result"]),
        wildcards=frozenset(obj.get("wildcards", ())),
        even_if=tuple(obj.get("even_if", ())),
    )


def load_equations(path=None) -> list[ActionEquation]:
    if path is None:
        text = resources.files("h2ia").joinpath("data/action_equations.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    eqs = [equation_from_json(e) for e in data["equations"]]
    ids = [e.id for e in eqs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate equation ids")
    return eqs


@lru_cache(maxsize=1)
def default_equations() -> tuple[ActionEquation, ...]:
    return tuple(load_equations())


# ----- instantiation ------------------------------------------------------


@dataclass(frozen=True)
class ConcreteEquation:
    id: str
    actor: Transv | None
    subject: tuple[str, tuple[int, ...]]
    result: tuple[tuple[int, tuple[str, tuple[int, ...]]], ...]
    wildcards: frozenset[str]
    merges: tuple[str, ...] = ()

    def terms(self):
        yield 1, self.subject
        yield from self.result


def _merge_options(atoms: Sequence[str]) -> Iterable[tuple[tuple[str, str, int], ...]]:
    """Subsets of coincidence atoms in which every letter is merged at most once."""
    parsed = []
    for atom in atoms:
        if "=" in atom:
            p, q = atom.split("=")
            parsed.append([(p.strip(), q.strip(), 1)])
        elif "~" in atom:
            p, q = atom.split("~")
            parsed.append([(p.strip(), q.strip(), 1), (p.strip(), q.strip(), -1)])
        else:
            raise ValueError(f"bad coincidence clause {atom!r}")
    for k in range(len(parsed) + 1):
        for chosen in combinations(parsed, k):
            used = [x for opts in chosen for x in opts[0][:2]]
            if len(used) != len(set(used)):
                continue
            yield from product(*chosen)


def instantiate(eq: ActionEquation, merges: Sequence[tuple[str, str, int]] = ()) -> ConcreteEquation:
    letters = eq.letters()
    value = {name: i for i, name in enumerate(letters, start=1)}
    for p, q, s in merges:
        value[q] = s * value[p]

    def sv(letter: Letter) -> int:
        return letter[1] * value[letter[0]]

    def term(t: SymTerm):
        return (t.family, family(t.family).normalize(tuple(sv(x) for x in t.slots)))

    actor = None
    if eq.actor is not None:
        actor = Transv(sv(eq.actor[0]), sv(eq.actor[1]))
    desc = tuple(f"{p}{'=' if s > 0 else '=-'}{q}" for p, q, s in merges)
    return ConcreteEquation(
        eq.id, actor, term(eq.subject), tuple((c, term(t)) for c, t in eq.result), eq.wildcards, desc
    )


def instantiations(eq: ActionEquation) -> list[ConcreteEquation]:
    return [instantiate(eq, m) for m in _merge_options(eq.even_if)]


# ----- necessary-condition checks -----------------------------------------


@dataclass
class EquationCheck:
    """Outcome for one instantiation.

    ``ok`` covers relator-hood and parameter consistency. ``wedge_ok`` is the
    stronger comparison of wedge images, reported separately.
    """

    id: str
    merges: tuple[str, ...]
    ok: bool
    problems: list[str] = field(default_factory=list)
    wedge_ok: bool | None = None
    wedge_problem: str | None = None


def act_on_word(s: Gen, w: Sequence[Gen]) -> tuple:
    """Image of an IA word under conjugation by ``s``, extended as a homomorphism.

    Each letter is rewritten through its positively oriented generator, so a
    letter and its formal inverse always get mutually inverse images.
    """
    out = []
    for g in w:
        pos, e = canonical_generator(g)
        img = theta_gen(s, pos)
        out.append(img if e > 0 else iw(img))
    return pw(*out)


@lru_cache(maxsize=None)
def _wildcard_span(names: frozenset[str], rank: int) -> SpanModP:
    span = SpanModP()
    for name in sorted(names):
        fam = family(name)
        for inst in enumerate_instances(name, pool_size=rank):
            span.add(psi(fam.builder(*inst.params)))
    return span


def _consistency_problems(ce: ConcreteEquation) -> list[str]:
    problems = []
    known = {abs(p) for p in ce.subject[1]}
    if ce.actor is not None:
        a, b = ce.actor[1], ce.actor[2]
        if abs(a) == abs(b):
            problems.append(f"actor {ce.actor!r} is not a transvection")
        known |= {abs(a), abs(b)}
    for _, (name, params) in ce.result:
        stray = {abs(p) for p in params} - known
        if stray:
            problems.append(f"{name}{params} uses letters {sorted(stray)} absent from the subject and actor")
    for name in ce.wildcards:
        try:
            family(name)
        except ValueError as exc:
            problems.append(str(exc))
    return problems


def check_concrete(ce: ConcreteEquation, wedge: bool = True) -> EquationCheck:
    problems = _consistency_problems(ce)
    words = {}
    for _, (name, params) in ce.terms():
        err = family(name).violation(params)
        if err:
            problems.append(f"{name}{params}: {err}")
            continue
        words[(name, params)] = family(name).builder(*params)
    if problems:
        return EquationCheck(ce.id, ce.merges, False, problems)
    rank = max(max_index(w) for w in words.values())
    for key, w in words.items():
        if not is_trivial(w, rank):
            problems.append(f"{key[0]}{key[1]} does not evaluate to the identity")
    check = EquationCheck(ce.id, ce.merges, not problems, problems)
    if wedge and not problems:
        check.wedge_problem = wedge_discrepancy(ce, words, rank)
        check.wedge_ok = check.wedge_problem is None
    return check


def wedge_discrepancy(ce: ConcreteEquation, words: dict, rank: int) -> str | None:
    subject_word = words[ce.subject]
    lhs_word = subject_word if ce.actor is None else act_on_word(ce.actor, subject_word)
    diff = combine([(1, psi(lhs_word))] + [(-c, psi(words[t])) for c, t in ce.result])
    if not diff:
        return None
    if not ce.wildcards:
        return f"wedge images of the two sides differ in {len(diff)} coordinates"
    if not _wildcard_span(frozenset(ce.wildcards), rank).contains(diff):
        return "wedge-image difference is not spanned by the wildcard families"
    return None


def check_equation(eq: ActionEquation, wedge: bool = True) -> list[EquationCheck]:
    return [check_concrete(ce, wedge) for ce in instantiations(eq)]
