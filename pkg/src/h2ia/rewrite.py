"""Certificates: scripted relator insertions that reduce a word to the empty word.

A certificate starts from a word and applies steps in order. An insertion step
splices a word after the first ``pos`` letters of the current reduced word and
reduces. A cyclic step (only when ``allow_cyclic`` is set) rotates the current
word, which is legitimate when working modulo conjugation.

In strict mode every inserted word must be a relator instance of a registered
family, possibly inverted, rotated or conjugated. A step may name its relation
explicitly (``"relation": {"family": ..., "params": ...}``), in which case the
inserted word is derived from it; otherwise the engine searches the registered
families for a match.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from importlib import resources

from .ia_alphabet import evaluate, iw, max_index, pw, word_from_json, word_to_json
from .relations import Registry, RelInstance, default_registry, enumerate_instances, expand


class CertificateError(ValueError):
    """Malformed certificate or a step that cannot be applied."""


class StrictModeError(CertificateError):
    """An inserted word is not recognised as a relator."""


@dataclass(frozen=True)
class Step:
    pos: int | None = None
    insert: tuple = ()
    relation: RelInstance | None = None
    inverse: bool = False
    conjugator: tuple = ()
    cyclic: int | None = None

    @property
    def is_cyclic(self) -> bool:
        return self.cyclic is not None

    def to_json(self) -> dict:
        if self.is_cyclic:
            return {"cyclic": self.cyclic}
        out: dict = {"pos": self.pos, "insert": word_to_json(self.insert)}
        if self.relation is not None:
            out["relation"] = self.relation.to_json()
            if self.inverse:
                out["inverse"] = True
            if self.conjugator:
                out["conjugator"] = word_to_json(self.conjugator)
        return out


@dataclass(frozen=True)
class Certificate:
    start: tuple
    steps: tuple[Step, ...] = ()
    allow_cyclic: bool = False
    strict: bool = True

    def to_json(self) -> dict:
        return {
            "start": word_to_json(self.start),
            "steps": [s.to_json() for s in self.steps],
            "allow_cyclic": self.allow_cyclic,
            "strict": self.strict,
        }


@dataclass
class ReplayResult:
    reduces_to_identity: bool
    final: tuple
    trace: list[tuple] = field(default_factory=list)
    matched: list[str | None] = field(default_factory=list)


def relation_word(rel: RelInstance, inverse: bool = False, conjugator: Sequence = (),
                  registry: Registry | None = None) -> tuple:
    w = expand(rel, registry)
    if inverse:
        w = iw(w)
    if conjugator:
        w = pw(conjugator, w, iw(conjugator))
    return w


def step_from_json(obj: dict, index: int, registry: Registry | None = None) -> Step:
    if not isinstance(obj, dict):
        raise CertificateError(f"step {index}: expected an object, got {obj!r}")
    try:
        if "cyclic" in obj:
            return Step(cyclic=int(obj["cyclic"]))
        pos = int(obj["pos"])
        rel = RelInstance.from_json(obj["relation"]) if "relation" in obj else None
        inverse = bool(obj.get("inverse", False))
        conj = word_from_json(obj.get("conjugator", []))
        if "insert" in obj:
            insert = word_from_json(obj["insert"])
        elif rel is not None:
            insert = relation_word(rel, inverse, conj, registry)
        else:
            raise CertificateError(f"step {index}: needs 'insert' or 'relation'")
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"step {index}: {exc}") from None
    return Step(pos, insert, rel, inverse, conj)


def certificate_from_json(obj: dict, registry: Registry | None = None) -> Certificate:
    if not isinstance(obj, dict) or "start" not in obj:
        raise CertificateError("certificate must be an object with a 'start' word")
    try:
        start = word_from_json(obj["start"])
    except ValueError as exc:
        raise CertificateError(f"start word: {exc}") from None
    steps = tuple(step_from_json(s, i, registry) for i, s in enumerate(obj.get("steps", []), start=1))
    return Certificate(start, steps, bool(obj.get("allow_cyclic", False)), bool(obj.get("strict", True)))


def load_certificate(path, registry: Registry | None = None) -> Certificate:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"{path}: invalid JSON ({exc})") from None
    return certificate_from_json(data, registry)


def worked_certificate() -> Certificate:
    """The bundled example: θ(M_{a,b} M_{a,b}^{-1}) applied to Mc(b,a,e), times Mc(b,e,a)."""
    text = resources.files("h2ia").joinpath("data/worked_certificate.json").read_text()
    return certificate_from_json(json.loads(text))


def apply_step(current: Sequence, pos: int, insert: Sequence) -> tuple:
    current = tuple(current)
    if not 0 <= pos <= len(current):
        raise CertificateError(f"position {pos} outside 0..{len(current)}")
    return pw(current[:pos], insert, current[pos:])


def rotate(current: Sequence, k: int) -> tuple:
    current = tuple(current)
    if not current:
        return current
    k %= len(current)
    return pw(current[k:] + current[:k])


# ----- relator recognition ------------------------------------------------


def cyclic_core(w: Sequence) -> tuple:
    """Cyclically reduce: strip matching letter pairs from the two ends."""
    from .ia_alphabet import inverse_gen

    w = tuple(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == inverse_gen(w[j - 1]):
        i += 1
        j -= 1
    return w[i:j]


def cyclic_key(w: Sequence) -> tuple:
    core = cyclic_core(w)
    if not core:
        return ()
    cands = []
    for base in (core, iw(core)):
        for k in range(len(base)):
            cands.append(base[k:] + base[:k])
    return min(cands)


def _relabel_word(w: Sequence, mapping: dict[int, int]) -> tuple:
    from .ia_alphabet import _KINDS

    out = []
    for g in w:
        vals = [mapping[abs(x)] * (1 if x > 0 else -1) for x in g[1:]]
        out.append(_KINDS[g[0]](*vals))
    return tuple(out)


def _relator_index(registry: Registry, k: int) -> dict:
    cache = registry.relator_index_cache
    if k not in cache:
        index: dict = {}
        for name in registry.names():
            fam = registry[name]
            if fam.arity < k:
                continue
            for inst in enumerate_instances(name, pool_size=k, registry=registry):
                if inst.indices() != set(range(1, k + 1)):
                    continue
                key = cyclic_key(fam.builder(*inst.params))
                if key:
                    index.setdefault(key, inst)
        cache[k] = index
    return cache[k]


def recognise_relator(w: Sequence, registry: Registry | None = None) -> RelInstance | None:
    """A registered relation instance whose relator is w up to rotation,
    inversion and conjugation, or None."""
    registry = default_registry() if registry is None else registry
    key = cyclic_key(w)
    if not key:
        return None
    used = sorted({abs(x) for g in key for x in g[1:]})
    fwd = {old: new for new, old in enumerate(used, start=1)}
    back = {new: old for old, new in fwd.items()}
    inst = _relator_index(registry, len(used)).get(cyclic_key(_relabel_word(key, fwd)))
    if inst is None:
        return None
    params = tuple(back[abs(p)] * (1 if p > 0 else -1) for p in inst.params)
    return RelInstance(inst.family, params)


# ----- replay -------------------------------------------------------------


def _check_strict(step: Step, index: int, registry: Registry | None) -> str:
    if step.relation is not None:
        expected = relation_word(step.relation, step.inverse, step.conjugator, registry)
        if tuple(step.insert) != expected:
            raise StrictModeError(
                f"step {index}: inserted word differs from the expansion of {step.relation}"
            )
        return str(step.relation)
    if not cyclic_key(step.insert):
        return "trivial"
    found = recognise_relator(step.insert, registry)
    if found is None:
        raise StrictModeError(f"step {index}: inserted word is not a recognised relator")
    return str(found)


def replay(cert: Certificate, registry: Registry | None = None) -> ReplayResult:
    current = pw(cert.start)
    result = ReplayResult(False, current)
    for i, step in enumerate(cert.steps, start=1):
        if step.is_cyclic:
            if not cert.allow_cyclic:
                raise CertificateError(f"step {i}: cyclic shift not allowed by this certificate")
            current = rotate(current, step.cyclic)
            result.matched.append(f"cyclic {step.cyclic}")
        else:
            note = _check_strict(step, i, registry) if cert.strict else None
            try:
                current = apply_step(current, step.pos, step.insert)
            except CertificateError as exc:
                raise CertificateError(f"step {i}: {exc}") from None
            result.matched.append(note)
        result.trace.append(current)
    result.final = current
    result.reduces_to_identity = not current
    return result


def _rank_for(cert: Certificate) -> int:
    words = [cert.start] + [s.insert for s in cert.steps]
    return max([max_index(w) for w in words] + [1])


def first_invariant_failure(cert: Certificate, rank: int | None = None) -> int | None:
    """Index of the first step after which the evaluated automorphism changed."""
    rank = _rank_for(cert) if rank is None else rank
    target = evaluate(cert.start, rank)
    current = pw(cert.start)
    for i, step in enumerate(cert.steps, start=1):
        if step.is_cyclic:
            current = rotate(current, step.cyclic)
        else:
            current = apply_step(current, step.pos, step.insert)
        if evaluate(current, rank) != target:
            return i
    return None


def invariant_check(cert: Certificate, rank: int | None = None) -> bool:
    return first_invariant_failure(cert, rank) is None


def trace_lines(result: ReplayResult) -> list[str]:
    return [json.dumps(word_to_json(w)) for w in result.trace]
