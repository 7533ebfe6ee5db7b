"""Endomorphisms of a free group, stored as the tuple of basis images."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .free_words import FreeWord, check_rank, reduce
from .kernels import substitute


@dataclass(frozen=True)
class Endo:
    images: tuple[FreeWord, ...]

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, w: Sequence[int]) -> FreeWord:
        return apply(self, w)

    def to_json(self) -> list[list[int]]:
        return [list(img) for img in self.images]


def identity(rank: int) -> Endo:
    return Endo(tuple((i,) for i in range(1, rank + 1)))


def from_images(images: Iterable[Sequence[int]], rank: int | None = None) -> Endo:
    imgs = tuple(reduce(img) for img in images)
    n = len(imgs) if rank is None else rank
    if len(imgs) != n:
        raise ValueError(f"expected {n} basis images, got {len(imgs)}")
    for img in imgs:
        check_rank(img, n)
    return Endo(imgs)


def from_sparse(rank: int, changes: dict[int, Sequence[int]]) -> Endo:
    """Endo fixing every basis letter except those listed in ``changes``."""
    imgs = [(i,) for i in range(1, rank + 1)]
    for i, img in changes.items():
        if not 1 <= i <= rank:
            raise ValueError(f"basis index {i} outside 1..{rank}")
        imgs[i - 1] = reduce(img)
    return from_images(imgs, rank)


def apply(f: Endo, w: Sequence[int]) -> FreeWord:
    check_rank(w, f.rank)
    return substitute(f.images, tuple(w))


def compose(f: Endo, g: Endo) -> Endo:
    """The map w ↦ f(g(w))."""
    if f.rank != g.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {g.rank}")
    return Endo(tuple(substitute(f.images, img) for img in g.images))


def abelianization(f: Endo) -> list[list[int]]:
    """Matrix whose (i, j) entry is the exponent sum of x_{i+1} in f(x_{j+1})."""
    n = f.rank
    mat = [[0] * n for _ in range(n)]
    for j, img in enumerate(f.images):
        for x in img:
            mat[abs(x) - 1][j] += 1 if x > 0 else -1
    return mat


def is_IA(f: Endo) -> bool:
    n = f.rank
    mat = abelianization(f)
    return all(mat[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def is_identity_on_basis(f: Endo) -> bool:
    return all(img == (i,) for i, img in enumerate(f.images, start=1))


def first_moved_letter(f: Endo) -> int | None:
    """Smallest basis index whose image is not the letter itself."""
    for i, img in enumerate(f.images, start=1):
        if img != (i,):
            return i
    return None
