"""Parameterized relation families, their expansion into relator words, and
exhaustive enumeration of their instances.

A relation "L = R" is stored in relator form, the reduced word L·R^{-1}. Each
parameter slot is a signed index x^{±1}. Slots whose sign does not enter the
formula are normalized to +. Distinct slots get distinct indices except for the
pairs a family explicitly allows to coincide.

Families R0–R9 are the basic relations of the presentation, H1–H9 the
commutator relators, and further families can be registered at run time
(``register_extra_relation``) or loaded from JSON word templates.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import product
from operator import itemgetter

from .ia_alphabet import CommTv, Conj, commutator, is_trivial, iw, pw, word_from_json

Builder = Callable[..., tuple]


def _sg(x: int) -> int:
    return 1 if x > 0 else -1


def C(x: int, y: int, e: int = 1) -> tuple:
    """One-letter word C_{x,y}^e; only the indices of x and y matter."""
    return (Conj(abs(x), abs(y) * e),)


def Mc(a: int, b: int, c: int) -> tuple:
    return (CommTv(a, b, c),)


cm = commutator


@dataclass(frozen=True)
class RelInstance:
    family: str
    params: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))

    def to_json(self) -> dict:
        return {"family": self.family, "params": list(self.params)}

    @classmethod
    def from_json(cls, obj: dict) -> "RelInstance":
        try:
            return cls(str(obj["family"]), tuple(obj["params"]))
        except (KeyError, TypeError, ValueError):
            raise ValueError(f"malformed relation instance {obj!r}") from None

    def indices(self) -> set[int]:
        return {abs(p) for p in self.params}

    def __str__(self):
        return f"{self.family}({','.join(f'{p:+d}' for p in self.params)})"


@dataclass(frozen=True)
class Family:
    name: str
    arity: int
    builder: Builder
    signed: tuple[bool, ...]
    may_coincide: frozenset[frozenset[int]] = frozenset()
    symmetries: tuple[tuple[int, ...], ...] = ()
    sign_check: Callable[[tuple[int, ...]], str | None] | None = None
    kind: str = "R"
    slot_names: str = "abcdef"

    def coincidence_allowed(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self.may_coincide

    def violation(self, params: Sequence[int]) -> str | None:
        """Name of the first violated side condition, or None."""
        if len(params) != self.arity:
            return f"{self.name} takes {self.arity} parameters, got {len(params)}"
        if any(p == 0 for p in params):
            return "parameters must be nonzero signed indices"
        for i in range(self.arity):
            for j in range(i + 1, self.arity):
                if abs(params[i]) == abs(params[j]) and not self.coincidence_allowed(i, j):
                    n = self.slot_names
                    return f"{self.name}: slots {n[i]} and {n[j]} must be distinct"
        for i, s in enumerate(self.signed):
            if not s and params[i] < 0:
                return f"{self.name}: slot {self.slot_names[i]} ignores its sign and must be positive"
        if self.sign_check is not None:
            return self.sign_check(tuple(params))
        return None

    def normalize(self, params: Sequence[int]) -> tuple[int, ...]:
        return tuple(abs(p) if not s else p for p, s in zip(params, self.signed))

    @cached_property
    def _symmetry_group(self) -> tuple:
        ident = tuple(range(self.arity))
        group = {ident}
        frontier = [ident]
        while frontier:
            cur = frontier.pop()
            for perm in self.symmetries:
                img = tuple(cur[k] for k in perm)
                if img not in group:
                    group.add(img)
                    frontier.append(img)
        group.discard(ident)
        return tuple(itemgetter(*perm) for perm in sorted(group))

    def canonical(self, params: Sequence[int]) -> tuple[int, ...]:
        """Least parameter tuple among the symmetry images of ``params``."""
        params = tuple(params)
        return min([params] + [g(params) for g in self._symmetry_group])

    def is_canonical(self, params: tuple[int, ...]) -> bool:
        return all(g(params) >= params for g in self._symmetry_group)

    def expand(self, params: Sequence[int]) -> tuple:
        params = self.normalize(params)
        err = self.violation(params)
        if err:
            raise ValueError(err)
        return self.builder(*params)


# ----- basic relations ---------------------------------------------------


def _r0(A, B, Cc):
    return pw(iw(Mc(A, B, Cc)), iw(Mc(A, Cc, B)))


def _r1(a, b, c, d):
    return cm(C(a, b), C(c, d))


def _r2(A, B, Cc, D, E, F):
    return cm(Mc(A, B, Cc), Mc(D, E, F))


def _r3(a, b, Cc, D, E):
    return cm(C(a, b), Mc(Cc, D, E))


def _r4(a, b, c):
    return cm(pw(C(a, b), C(c, b)), C(c, a))


def _r5(A, B, Cc):
    lhs = pw(C(A, B, _sg(B)), Mc(A, B, Cc), C(A, B, -_sg(B)))
    return pw(lhs, iw(Mc(A, Cc, -B)))


def _r6(A, B, Cc):
    lhs = pw(Mc(A, B, Cc), Mc(-A, B, Cc))
    return pw(lhs, iw(cm(C(A, Cc, -_sg(Cc)), C(A, B, -_sg(B)))))


def _r7(a, B, Cc, D):
    lhs = cm(C(a, B, -_sg(B)), Mc(B, Cc, D))
    return pw(lhs, iw(cm(C(a, D, -_sg(D)), C(a, Cc, -_sg(Cc)))))


def _r8(A, B, Cc, D, E):
    e = _sg(E)
    lhs = pw(Mc(A, B, Cc), Mc(D, A, E), Mc(A, Cc, B))
    rhs = pw(C(D, E, -e), Mc(D, Cc, B), C(D, E, e), Mc(D, A, E), Mc(D, B, Cc))
    return pw(lhs, iw(rhs))


def _r9(A, B, Cc, D):
    b, d = _sg(B), _sg(D)
    lhs = pw(C(A, B, b), Mc(Cc, A, D), C(A, B, -b))
    rhs = pw(C(Cc, D, -d), Mc(Cc, A, B), C(Cc, D, d), Mc(Cc, A, D), Mc(Cc, B, A))
    return pw(lhs, iw(rhs))


# ----- commutator relators -----------------------------------------------


def _h1(A, B, Cc, D):
    return cm(C(A, B, _sg(B)), C(Cc, D, _sg(D)))


def _h3(Cc, D, E, A, B):
    return cm(C(A, B, _sg(B)), Mc(Cc, D, E))


def _h4(A, B, Cc):
    b = _sg(B)
    return cm(pw(C(Cc, B, b), C(A, B, b)), C(Cc, A, _sg(A)))


def _h5(A, B, Cc, D):
    return pw(cm(C(A, Cc, -_sg(Cc)), C(A, D, -_sg(D))), cm(C(A, B, -_sg(B)), Mc(B, Cc, D)))


def _h6(A, B, Cc, D, E):
    m1, m2, m3 = Mc(A, B, Cc), Mc(D, A, E), Mc(D, Cc, B)
    return pw(cm(m1, m2), cm(m2, m3), cm(m3, C(D, E, -_sg(E))))


def _h7(A, B, Cc, D):
    m1, m2 = Mc(Cc, A, D), Mc(Cc, A, B)
    return pw(cm(m1, C(A, B, _sg(B))), cm(C(Cc, D, -_sg(D)), m2), cm(m2, m1))


def _h8(A, B, Cc, D):
    d = _sg(D)
    return cm(Mc(A, B, Cc), pw(C(A, D, d), C(B, D, d), C(Cc, D, d)))


def _h9(A, B, Cc):
    a, b, c = _sg(A), _sg(B), _sg(Cc)
    first = cm(pw(C(A, Cc, c), C(B, Cc, c)), pw(C(A, B, b), C(Cc, B, b)))
    return pw(first, cm(Mc(A, B, Cc), pw(C(B, A, a), C(Cc, A, a))))


def _pairs(*pairs: tuple[int, int]) -> frozenset[frozenset[int]]:
    return frozenset(frozenset(p) for p in pairs)


def _opposite_first_slots(params: tuple[int, ...]) -> str | None:
    # x_a^α = x_d^δ is excluded; only x_a^α = x_d^{-δ} may coincide.
    if params[0] == params[3]:
        return "slot a and slot d may share an index only with opposite signs"
    return None


ALL = (True,) * 6
_COMM = (3, 4, 5, 0, 1, 2)

_BUILTIN = [
    Family("R0", 3, _r0, ALL[:3], symmetries=((0, 2, 1),)),
    Family("R1", 4, _r1, (False,) * 4, _pairs((1, 3)), symmetries=((2, 3, 0, 1),)),
    Family(
        "R2", 6, _r2, ALL, _pairs((1, 4), (1, 5), (2, 4), (2, 5), (0, 3)),
        symmetries=((0, 2, 1, 3, 4, 5), (0, 1, 2, 3, 5, 4), _COMM),
        sign_check=_opposite_first_slots,
    ),
    Family("R3", 5, _r3, (False, False, True, True, True), _pairs((1, 3), (1, 4)),
           symmetries=((0, 1, 2, 4, 3),)),
    Family("R4", 3, _r4, (False,) * 3),
    Family("R5", 3, _r5, ALL[:3]),
    Family("R6", 3, _r6, ALL[:3]),
    Family("R7", 4, _r7, (False, True, True, True)),
    Family("R8", 5, _r8, ALL[:5], _pairs((1, 4), (2, 4))),
    Family("R9", 4, _r9, ALL[:4], _pairs((1, 3))),
    Family("H1", 4, _h1, (False, True, False, True), _pairs((1, 3)),
           symmetries=((2, 3, 0, 1),), kind="H"),
    Family(
        "H2", 6, _r2, ALL, _pairs((1, 4), (1, 5), (2, 4), (2, 5), (0, 3)),
        symmetries=((0, 2, 1, 3, 4, 5), (0, 1, 2, 3, 5, 4), _COMM),
        sign_check=_opposite_first_slots, kind="H",
    ),
    Family("H3", 5, _h3, (True, True, True, False, True), _pairs((4, 1), (4, 2)),
           symmetries=((0, 2, 1, 3, 4),), kind="H", slot_names="cdeab"),
    Family("H4", 3, _h4, (True, True, False), kind="H"),
    Family("H5", 4, _h5, (False, True, True, True), kind="H"),
    Family("H6", 5, _h6, ALL[:5], _pairs((1, 4), (2, 4)), kind="H"),
    Family("H7", 4, _h7, ALL[:4], _pairs((1, 3)), kind="H"),
    Family("H8", 4, _h8, ALL[:4], kind="H"),
    Family("H9", 3, _h9, ALL[:3], kind="H"),
]

R_FAMILIES = tuple(f"R{i}" for i in range(10))
H_FAMILIES = tuple(f"H{i}" for i in range(1, 10))


# ----- registry ----------------------------------------------------------


@dataclass
class RegistryEntry:
    family: Family
    duplicate_of: str | None = None
    source: str = "builtin"


@dataclass
class Registry:
    entries: dict[str, RegistryEntry] = field(default_factory=dict)
    relator_index_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __getitem__(self, name: str) -> Family:
        try:
            return self.entries[name].family
        except KeyError:
            raise ValueError(f"unknown relation family {name!r}") from None

    def names(self) -> list[str]:
        return list(self.entries)

    def extras(self) -> list[str]:
        return [n for n, e in self.entries.items() if e.source != "builtin"]

    def copy(self) -> "Registry":
        return Registry(dict(self.entries))


def _builtin_registry() -> Registry:
    return Registry({f.name: RegistryEntry(f) for f in _BUILTIN})


BUILTIN = _builtin_registry()


def family(name: str, registry: Registry | None = None) -> Family:
    return (registry if registry is not None else default_registry())[name]


def expand(inst: RelInstance, registry: Registry | None = None) -> tuple:
    return family(inst.family, registry).expand(inst.params)


def validate(inst: RelInstance, registry: Registry | None = None) -> None:
    fam = family(inst.family, registry)
    err = fam.violation(inst.params)
    if err:
        raise ValueError(err)


def _index_tuples(fam: Family, pool: Sequence[int]) -> Iterable[tuple[int, ...]]:
    k = fam.arity
    chosen: list[int] = []

    def rec(i: int):
        if i == k:
            yield tuple(chosen)
            return
        for x in pool:
            if all(x != chosen[j] or fam.coincidence_allowed(j, i) for j in range(i)):
                chosen.append(x)
                yield from rec(i + 1)
                chosen.pop()

    return rec(0)


def enumerate_instances(
    name: str,
    pool_size: int = 8,
    rank: int | None = None,
    registry: Registry | None = None,
) -> list[RelInstance]:
    """Every allowed instance over basis letters 1..pool_size, up to symmetry."""
    fam = family(name, registry)
    rank = pool_size if rank is None else rank
    if pool_size > rank:
        raise ValueError(f"pool of {pool_size} letters does not fit in rank {rank}")
    pool = range(1, pool_size + 1)
    sign_choices = [(1, -1) if s else (1,) for s in fam.signed]
    out = []
    for idx in _index_tuples(fam, pool):
        for signs in product(*sign_choices):
            params = tuple(i * s for i, s in zip(idx, signs))
            if fam.sign_check is not None and fam.sign_check(params):
                continue
            if fam.symmetries and not fam.is_canonical(params):
                continue
            out.append(RelInstance(name, params))
    return out


# ----- extra relations ---------------------------------------------------


def _duplicate_target(fam: Family, registry: Registry, pool_size: int) -> str | None:
    insts = enumerate_instances_for(fam, pool_size)
    for other in registry.entries.values():
        cand = other.family
        if cand.arity != fam.arity or cand.name == fam.name:
            continue
        same = True
        for params in insts:
            if cand.violation(params) or cand.builder(*params) != fam.builder(*params):
                same = False
                break
        if same and insts:
            return cand.name
    return None


def enumerate_instances_for(fam: Family, pool_size: int) -> list[tuple[int, ...]]:
    sign_choices = [(1, -1) if s else (1,) for s in fam.signed]
    out = []
    for idx in _index_tuples(fam, range(1, pool_size + 1)):
        for signs in product(*sign_choices):
            params = tuple(i * s for i, s in zip(idx, signs))
            if fam.sign_check is None or not fam.sign_check(params):
                out.append(params)
    return out


def register_extra_relation(
    name: str,
    arity: int,
    expander: Builder,
    *,
    registry: Registry | None = None,
    signed: Sequence[bool] | None = None,
    may_coincide: Iterable[tuple[int, int]] = (),
    source: str = "user",
) -> RegistryEntry:
    """Add a relation family after checking every instance is a relator.

    Instances are checked over ``arity`` letters, which covers every index
    pattern up to relabelling. A family whose words coincide with an existing
    family is accepted and flagged through ``duplicate_of``.
    """
    registry = default_registry() if registry is None else registry
    if name in registry:
        raise ValueError(f"relation family {name!r} is already registered")
    fam = Family(
        name, arity, expander,
        tuple(signed) if signed is not None else (True,) * arity,
        _pairs(*may_coincide), kind="extra",
    )
    pool = max(arity, 1)
    for params in enumerate_instances_for(fam, pool):
        w = fam.builder(*params)
        if not is_trivial(w, pool):
            from .ia_alphabet import evaluate

            img = evaluate(w, pool)
            letter = next(i for i, im in enumerate(img.images, start=1) if im != (i,))
            raise ValueError(
                f"{name}{params} is not a relator: x{letter} maps to {list(img.images[letter - 1])}"
            )
    entry = RegistryEntry(fam, _duplicate_target(fam, registry, pool), source)
    registry.entries[name] = entry
    registry.relator_index_cache.clear()
    return entry


def _template_slot(spec, names: dict[str, int], params: Sequence[int]) -> int:
    if isinstance(spec, int):
        return spec
    neg = spec.startswith("-")
    val = params[names[spec.lstrip("-")]]
    return -val if neg else val


def template_builder(params_names: Sequence[str], word: Sequence[dict]) -> Builder:
    names = {n: i for i, n in enumerate(params_names)}
    slot_keys = {"C": ("a", "b"), "Mc": ("a", "b", "c")}
    for obj in word:
        if obj.get("k") not in slot_keys:
            raise ValueError(f"template letters must be C or Mc, got {obj!r}")
        for key in slot_keys[obj["k"]]:
            v = obj.get(key)
            if isinstance(v, str) and v.lstrip("-") not in names:
                raise ValueError(f"template slot {v!r} names no parameter")

    def build(*params: int) -> tuple:
        letters = []
        for obj in word:
            inst = {k: (_template_slot(v, names, params) if k != "k" else v) for k, v in obj.items()}
            letters.append(inst)
        return pw(word_from_json(letters))

    return build


def load_registry_file(path, registry: Registry | None = None, source: str | None = None) -> list[RegistryEntry]:
    with open(path) as fh:
        data = json.load(fh)
    return load_templates(data, registry, source or str(path))


def load_templates(data, registry: Registry | None = None, source: str = "json") -> list[RegistryEntry]:
    if isinstance(data, dict):
        data = data.get("relations", [])
    out = []
    for tpl in data:
        try:
            params = list(tpl["params"])
            word = list(tpl["word"])
            name = str(tpl["name"])
        except (KeyError, TypeError):
            raise ValueError(f"malformed relation template {tpl!r}") from None
        coincide = [tuple(params.index(x) for x in pair) for pair in tpl.get("may_coincide", [])]
        out.append(
            register_extra_relation(
                name, len(params), template_builder(params, word),
                registry=registry, signed=tpl.get("signed"), may_coincide=coincide, source=source,
            )
        )
    return out


_DEFAULT: Registry | None = None


def default_registry() -> Registry:
    """Built-in families plus the bundled extra relations (loaded once)."""
    global _DEFAULT
    if _DEFAULT is None:
        reg = _builtin_registry()
        text = resources.files("h2ia").joinpath("data/extra_relations.json").read_text()
        load_templates(json.loads(text), reg, source="bundled")
        _DEFAULT = reg
    return _DEFAULT
