"""Symbolic replay of the coboundary eliminations for the H1..H9 generators.

Each action equation ``f·r = Σ c_i t_i`` gives a relation ``Σ c_i t_i − r ≡ 0``
among coinvariance classes. Eliminations are tracked per pattern (see
``pattern_of``): the equations are schematic in their letters, so a derivation
for one instance applies to every signed relabelling of it.

Two modes:

* ``full``: integral coinvariants under GL_n(Z). Terms with the same pattern
  are congruent up to the pattern sign, so a relation is collected per pattern.
  A pattern is eliminated once a relation reduces to ±1 times it, or to an odd
  multiple when the pattern is congruent to its own negative.
* ``rational``: rational coinvariants under a level-ℓ congruence subgroup.
  Relabelling is no longer free, so coefficients are collected per concrete
  term. A generator is eliminated either because ``f·r − r = s`` with ``f·s ≡ s``
  (then ``f^ℓ·r − r = ℓs``, the ``first`` approach) or because ``f·r − r = s``
  with ``r`` already eliminated (the ``second`` approach).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from ..relations import H_FAMILIES, enumerate_instances, family
from .equations import ActionEquation, ConcreteEquation, default_equations, instantiations
from .h2expr import TorsionTerm, canonical_term, pattern_of, relabel_params

Pattern = tuple[str, tuple[int, ...]]


class ReplayError(RuntimeError):
    """A step of the elimination order could not be completed."""

    def __init__(self, family_name: str, message: str, blocked_by: Sequence[str] = (),
                 cycle: Sequence[str] = ()):
        self.family = family_name
        self.blocked_by = tuple(blocked_by)
        self.cycle = tuple(cycle)
        super().__init__(f"{family_name}: {message}")


class MissingEquation(ReplayError):
    pass


@dataclass(frozen=True)
class Step:
    """One entry of an elimination order.

    For the first approach each item is a pair (equation id, fixed-point
    equation id); otherwise each item is a single equation id.
    """

    family: str
    approach: str  # "relation", "first" or "second"
    items: tuple
    label: str = ""

    def equation_ids(self) -> list[str]:
        out = []
        for item in self.items:
            out.extend(item if isinstance(item, tuple) else (item,))
        return out


FULL_ORDER: tuple[Step, ...] = (
    Step("H1", "relation", ("generich1", "specialh1")),
    Step("H2", "relation", ("generich2", "bothsidesh2")),
    Step("H3", "relation", ("h3",)),
    Step("H4", "relation", ("h4",)),
    Step("H5", "relation", ("h5",)),
    Step("H6", "relation", ("generich6",), "generic"),
    Step("H7", "relation", ("generich7", "part1h7", "part2h7")),
    Step("H6", "relation", ("specialh6", "h6secondparam", "h6secondthird"), "special"),
    Step("H8", "relation", ("h8",)),
    Step("H9", "relation", ("h9",)),
)

RATIONAL_ORDER: tuple[Step, ...] = (
    Step("H1", "first", (("generich1", "generich1fixed"),), "generic"),
    Step("H1", "second", ("specialh1",), "special"),
    Step("H3", "second", ("h3",)),
    Step("H2", "second", ("generich2", "bothsidesh2")),
    Step("H4", "first", (("h4", "fixedh4"),)),
    Step("H5", "second", ("h5",)),
    Step("H6", "first", (("generich6", "genericfixedh6"),), "generic"),
    Step("H7", "first", (("generich7", "genericfixedh7"),), "generic"),
    Step("H7", "first", (("part1h7", "part1fixedh7"), ("part2h7", "part2fixedh7")), "special"),
    Step("H6", "first", (("specialh6", "specialfixedh6"),), "one special case"),
    Step("H6", "second", ("h6secondparam", "h6secondthird"), "other special cases"),
    Step("H8", "first", (("h8", "h8fixed"),)),
    Step("H9", "first", (("h9", "h9fixed"),)),
)


@lru_cache(maxsize=None)
def required_patterns(name: str, rank: int = 6) -> frozenset[Pattern]:
    """Every pattern realised by some valid instance of the family."""
    fam = family(name)
    pool = min(fam.arity, rank)
    return frozenset(pattern_of(name, inst.params)[0] for inst in enumerate_instances(name, pool_size=pool))


@dataclass
class ReplayResult:
    mode: str
    rank: int
    ell: int | None
    log: list[dict] = field(default_factory=list)
    eliminated: set[Pattern] = field(default_factory=set)

    def completed(self) -> set[str]:
        return {name for name in H_FAMILIES if required_patterns(name, self.rank) <= self.eliminated}

    def to_json(self) -> list[dict]:
        return self.log


def _letter_count(ce: ConcreteEquation) -> int:
    idx = {abs(p) for _, (_, params) in ce.terms() for p in params}
    if ce.actor is not None:
        idx |= {abs(ce.actor[1]), abs(ce.actor[2])}
    return max(idx)


class _Replay:
    def __init__(self, equations: Iterable[ActionEquation], mode: str, rank: int, ell: int | None):
        self.by_id = {e.id: e for e in equations}
        self.result = ReplayResult(mode, rank, ell)
        self.rank = rank
        self.done_families: set[str] = set()
        self._inst_cache: dict[str, list[ConcreteEquation]] = {}

    @property
    def eliminated(self) -> set[Pattern]:
        return self.result.eliminated

    def instances(self, eq_id: str, step: Step) -> list[ConcreteEquation]:
        if eq_id not in self.by_id:
            raise MissingEquation(step.family, f"equation {eq_id!r} needed for {step.family} is missing")
        if eq_id not in self._inst_cache:
            self._inst_cache[eq_id] = [
                ce for ce in instantiations(self.by_id[eq_id])
                if _letter_count(ce) <= self.rank
                and not any(family(n).violation(p) for _, (n, p) in ce.terms())
            ]
        return self._inst_cache[eq_id]

    def wildcards_ok(self, ce: ConcreteEquation, blockers: set[str]) -> bool:
        pending = set(ce.wildcards) - self.done_families
        blockers |= pending
        return not pending

    # ----- per-pattern relations (full mode, and the second approach) -----

    def pattern_relation(self, ce: ConcreteEquation) -> dict[Pattern, int]:
        coef: dict[Pattern, int] = {}
        torsion: set[Pattern] = set()
        for c, (name, params) in _residual_terms(ce):
            pat, sign = pattern_of(name, params)
            if pat in self.eliminated:
                continue
            if sign == 0:
                torsion.add(pat)
                coef[pat] = coef.get(pat, 0) + c
            else:
                coef[pat] = coef.get(pat, 0) + sign * c
        return {p: (c % 2 if p in torsion else c) for p, c in coef.items() if (c % 2 if p in torsion else c)}

    def concrete_relation(self, ce: ConcreteEquation) -> dict:
        coef: dict = {}
        for c, (name, params) in _residual_terms(ce):
            if pattern_of(name, params)[0] in self.eliminated:
                continue
            try:
                term, sign = canonical_term(name, params)
            except TorsionTerm:
                continue  # equal to its own negative, hence zero rationally
            coef[term] = coef.get(term, 0) + sign * c
        return {t: c for t, c in coef.items() if c}

    def try_relation(self, ce: ConcreteEquation, step: Step, blockers: set[str]) -> Pattern | None:
        if not self.wildcards_ok(ce, blockers):
            return None
        if step.approach == "second" and ce.actor is not None:
            if pattern_of(*ce.subject)[0] not in self.eliminated:
                blockers.add(ce.subject[0])
                return None
        if self.result.mode == "full":
            rel = self.pattern_relation(ce)
            if len(rel) != 1:
                blockers.update(p[0] for p in rel if p[0] != step.family)
                return None
            (pat, c), = rel.items()
            if pat[0] != step.family:
                blockers.add(pat[0])
                return None
            if abs(c) == 1 or (pattern_of(*pat)[1] == 0 and c % 2):
                return pat
            return None
        rel = self.concrete_relation(ce)
        if len(rel) != 1:
            blockers.update(t[0] for t in rel if t[0] != step.family)
            return None
        (term,) = rel
        if term[0] != step.family:
            blockers.add(term[0])
            return None
        return pattern_of(*term)[0]

    # ----- first approach -----

    def try_first(self, ce: ConcreteEquation, fixed_id: str, step: Step, blockers: set[str]) -> Pattern | None:
        if ce.actor is None or not self.wildcards_ok(ce, blockers):
            return None
        rel = self.concrete_relation(ce)
        if len(rel) != 1:
            blockers.update(t[0] for t in rel if t[0] != step.family)
            return None
        (term,) = rel
        if term[0] != step.family:
            blockers.add(term[0])
            return None
        pat = pattern_of(*term)[0]
        if pat in self.eliminated:
            return None
        for fce in self.instances(fixed_id, step):
            for relabelled in _matching_relabels(fce, ce.actor, term):
                if not self.wildcards_ok(relabelled, blockers):
                    continue
                if not self.concrete_relation(relabelled):
                    return pat
        return None

    # ----- driver -----

    def run_step(self, step: Step) -> None:
        used: list[str] = []
        newly: list[Pattern] = []
        blockers: set[str] = set()
        pairs = [(item, None) if not isinstance(item, tuple) else item for item in step.items]
        # resolve every equation up front so a missing one is reported immediately
        for main, fixed in pairs:
            self.instances(main, step)
            if fixed is not None:
                self.instances(fixed, step)
        changed = True
        while changed:
            changed = False
            for main, fixed in pairs:
                for ce in self.instances(main, step):
                    if step.approach == "first":
                        pat = self.try_first(ce, fixed, step, blockers)
                    else:
                        pat = self.try_relation(ce, step, blockers)
                    if pat is not None and pat not in self.eliminated:
                        self.eliminated.add(pat)
                        newly.append(pat)
                        changed = True
                        for eq_id in (main, fixed):
                            if eq_id is not None and eq_id not in used:
                                used.append(eq_id)
        if not newly:
            blocked = sorted(blockers - self.done_families - {step.family})
            raise ReplayError(step.family, "no generator could be eliminated"
                              + (f"; blocked by {', '.join(blocked)}" if blocked else ""), blocked)
        record = {"family": step.family, "eliminated_by": used}
        if step.label:
            record["case"] = step.label
        if self.result.mode == "rational":
            record["approach"] = step.approach
        record["patterns"] = [{"family": n, "params": list(p)} for n, p in sorted(newly)]
        self.result.log.append(record)

    def finish_family(self, name: str) -> None:
        missing = required_patterns(name, self.rank) - self.eliminated
        if missing:
            example = min(missing)
            raise ReplayError(name, f"{len(missing)} generator patterns remain, e.g. {example[0]}{example[1]}")
        self.done_families.add(name)


def _residual_terms(ce: ConcreteEquation):
    """Terms of ``rhs − subject``: the coboundary, or the identity moved to one side."""
    yield -1, ce.subject
    yield from ce.result


def _relabel(ce: ConcreteEquation, phi: dict[int, int]) -> ConcreteEquation:
    from ..ia_alphabet import Transv

    def term(t):
        name, params = t
        return name, family(name).normalize(relabel_params(params, phi))

    actor = None
    if ce.actor is not None:
        a, b = relabel_params((ce.actor[1], ce.actor[2]), phi)
        actor = Transv(a, b)
    return ConcreteEquation(ce.id, actor, term(ce.subject),
                            tuple((c, term(t)) for c, t in ce.result), ce.wildcards, ce.merges)


def _matching_relabels(fce: ConcreteEquation, actor, term) -> Iterable[ConcreteEquation]:
    """Relabellings of ``fce`` whose actor is ``actor`` and whose subject is ±``term``."""
    name, target = term
    if fce.subject[0] != name:
        return
    fam = family(name)
    src = fce.subject[1]
    letters = sorted({abs(p) for _, (_, ps) in fce.terms() for p in ps} | {abs(fce.actor[1]), abs(fce.actor[2])})
    fresh_base = max([abs(p) for p in target] + [abs(actor[1]), abs(actor[2])]) + 1
    seen = set()
    from .h2expr import _orbit

    for image in _orbit(name, target, strict=False):
        phi: dict[int, int] = {}
        free_sign: set[int] = set()
        ok = True
        pairs = [(s, t, signed) for s, t, signed in zip(src, image, fam.signed)]
        pairs += [(fce.actor[1], actor[1], True), (fce.actor[2], actor[2], True)]
        for s, t, signed in pairs:
            i = abs(s)
            val = (t if s > 0 else -t) if signed else abs(t)
            if i in phi:
                if abs(phi[i]) != abs(val):
                    ok = False
                    break
                if signed:
                    if i in free_sign:
                        phi[i] = val
                        free_sign.discard(i)
                    elif phi[i] != val:
                        ok = False
                        break
            else:
                phi[i] = val
                if not signed:
                    free_sign.add(i)
        if not ok or len({abs(v) for v in phi.values()}) != len(phi):
            continue
        rest = [i for i in letters if i not in phi]
        for k, i in enumerate(rest):
            phi[i] = fresh_base + k
        free = sorted(free_sign)
        for signs in product((1, -1), repeat=len(free)):
            trial = dict(phi)
            for i, s in zip(free, signs):
                trial[i] = s * abs(trial[i])
            key = tuple(sorted(trial.items()))
            if key in seen:
                continue
            seen.add(key)
            cand = _relabel(fce, trial)
            if cand.actor != actor:
                continue
            if canonical_term(*cand.subject)[0] != term:
                continue
            yield cand


def coinvariants_replay(
    equations: Iterable[ActionEquation] | None = None,
    mode: str = "full",
    *,
    rank: int = 6,
    ell: int = 2,
    order: Sequence[Step] | None = None,
) -> ReplayResult:
    """Replay the elimination order; raises ReplayError at the first failing step."""
    if mode not in ("full", "rational"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "rational" and ell < 2:
        raise ValueError("the congruence level must be at least 2")
    eqs = list(default_equations() if equations is None else equations)
    if order is None:
        order = FULL_ORDER if mode == "full" else RATIONAL_ORDER
    replay = _Replay(eqs, mode, rank, ell if mode == "rational" else None)
    last_step = {s.family: k for k, s in enumerate(order)}
    for k, step in enumerate(order):
        try:
            replay.run_step(step)
        except ReplayError as err:
            if isinstance(err, MissingEquation) or not err.blocked_by:
                raise
            cycle = _find_cycle(step.family, err.blocked_by, order[k + 1:], replay.by_id)
            if cycle:
                raise ReplayError(step.family, f"circular dependency {' -> '.join(cycle)}",
                                  err.blocked_by, cycle) from None
            raise
        if last_step[step.family] == k:
            replay.finish_family(step.family)
    missing = [n for n in H_FAMILIES if n not in replay.done_families]
    if missing:
        raise ReplayError(missing[0], "family is never eliminated by the order")
    return replay.result


def _find_cycle(start: str, blockers: Sequence[str], later: Sequence[Step], by_id: dict) -> list[str]:
    """Follow 'needs' edges through the remaining steps back to ``start``."""
    needs: dict[str, set[str]] = {}
    for step in later:
        for eq_id in step.equation_ids():
            eq = by_id.get(eq_id)
            if eq is not None:
                needs.setdefault(step.family, set()).update(eq.families() | eq.wildcards)
    for fam in needs:
        needs[fam].discard(fam)
    path = [start]

    def dfs(node: str, seen: set[str]) -> bool:
        for nxt in sorted(needs.get(node, ())):
            if nxt == start:
                path.append(start)
                return True
            if nxt not in seen:
                seen.add(nxt)
                path.append(nxt)
                if dfs(nxt, seen):
                    return True
                path.pop()
        return False

    for b in blockers:
        path[1:] = [b]
        if dfs(b, {b}):
            return path
    return []
