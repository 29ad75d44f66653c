"""Law-suite reports and the suite runner."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .gen import GenConfig
from .suite import LawResult, check_law, select


@dataclass
class LawReport:
    """Results keyed by law name.  Merging reports on disjoint law sets is associative."""

    results: dict[str, LawResult] = field(default_factory=dict)
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return all(r.failures == 0 for r in self.results.values())

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.results.values())

    @property
    def failed(self) -> list[str]:
        return sorted(n for n, r in self.results.items() if r.failures)

    def __len__(self) -> int:
        return len(self.results)

    def __getitem__(self, name: str) -> LawResult:
        return self.results[name]

    def merge(self, other: "LawReport") -> "LawReport":
        clash = self.results.keys() & other.results.keys()
        if clash:
            raise ValueError(f"laws reported twice: {sorted(clash)}")
        seed = self.seed if self.seed is not None else other.seed
        return LawReport({**self.results, **other.results}, seed)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "laws": {n: self.results[n].as_dict() for n in sorted(self.results)},
            "failures": self.failures,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        if not self.results:
            return "no laws checked\n"
        width = max(len(n) for n in self.results)
        lines = [f"{'law':<{width}}  {'instances':>9}  {'vacuous':>7}  {'failures':>8}"]
        for n in sorted(self.results):
            r = self.results[n]
            mark = "" if r.failures == 0 else "  FAIL"
            lines.append(f"{n:<{width}}  {r.instances:>9}  {r.vacuous:>7}  {r.failures:>8}{mark}")
        for n in self.failed:
            c = self.results[n].counterexample
            lines.append("")
            lines.append(f"counterexample for {n}: {self.results[n].statement}")
            if c is not None:
                lines.append(f"  context: {c.ctx or '(empty)'}")
                for k in sorted(c.terms):
                    lines.append(f"  {k}: {c.terms[k]}")
                if c.env:
                    lines.append(f"  environment: {c.env}")
                lines.append(f"  {c.kind}: {c.detail}")
        total = sum(r.instances for r in self.results.values())
        lines.append("")
        lines.append(f"{len(self.results)} laws, {total} instances, {self.failures} failures")
        return "\n".join(lines) + "\n"


def _run_one(args: tuple[str, GenConfig]) -> LawResult:
    name, cfg = args
    (lw,) = [lw for lw in select([name]) if lw.name == name]
    return check_law(lw, cfg)


def run_law_suite(cfg: GenConfig | None = None, names: list[str] | None = None, jobs: int = 1) -> LawReport:
    """Check every selected law on ``cfg.instances`` generated instances.

    ``names`` selects laws by full name or by group prefix (``"and"``).
    With ``jobs > 1`` laws run in worker processes; the report does not
    depend on the number of workers.
    """
    cfg = cfg or GenConfig()
    laws = select(names)
    if cfg.instances == 0:
        return LawReport({}, cfg.seed)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [(lw.name, cfg) for lw in laws]))
    else:
        results = [check_law(lw, cfg) for lw in laws]
    report = LawReport({}, cfg.seed)
    for r in results:
        report = report.merge(LawReport({r.name: r}, cfg.seed))
    return report


__all__ = ["LawReport", "run_law_suite"]
