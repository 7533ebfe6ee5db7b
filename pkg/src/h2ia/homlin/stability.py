"""Coverage of H-generators over n+1 letters by relabelled generators over n letters."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..relations import H_FAMILIES, RelInstance, enumerate_instances, family


@dataclass
class StabilityReport:
    n: int
    total: dict[str, int] = field(default_factory=dict)
    covered: dict[str, int] = field(default_factory=dict)
    witnesses: list[RelInstance] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses and self.total == self.covered


def compress(params: tuple[int, ...]) -> tuple[int, ...]:
    """Relabel indices to 1..k in order of first appearance, keeping signs."""
    label: dict[int, int] = {}
    for p in params:
        label.setdefault(abs(p), len(label) + 1)
    return tuple(label[abs(p)] * (1 if p > 0 else -1) for p in params)


def stability_report(n: int, families=H_FAMILIES, max_witnesses: int = 5) -> StabilityReport:
    report = StabilityReport(n)
    for name in families:
        fam = family(name)
        small = {inst.params for inst in enumerate_instances(name, pool_size=n)}
        total = covered = 0
        for inst in enumerate_instances(name, pool_size=n + 1):
            total += 1
            image = compress(inst.params)
            if max(map(abs, image)) <= n and fam.canonical(image) in small:
                covered += 1
            elif len(report.witnesses) < max_witnesses:
                report.witnesses.append(inst)
        report.total[name] = total
        report.covered[name] = covered
    return report


def stability_orbit_check(n: int) -> bool:
    return stability_report(n).ok


def uncovered_witness(n: int) -> RelInstance | None:
    """An instance over n+1 letters that no relabelled instance over n letters reaches."""
    report = stability_report(n, max_witnesses=1)
    return report.witnesses[0] if report.witnesses else None
