"""Deterministic synthetic roster/publication corpora with planted structure.

Careers are simulated year by year: researchers may exit the system,
transfer between universities, and new entrants arrive at configurable
per-researcher-year rates. Publication counts follow a Poisson law whose
rate is scaled by the university's planted productivity multiplier, so a
quality ordering can be recovered from the generated corpus. Citations
mix a configurable uncited mass with a log-series heavy tail, which
exercises cited-only citation baselines nontrivially.

Randomness comes from numpy's default generator (PCG64) seeded with
``spec.seed``: identical (seed, spec) pairs give byte-identical output
files for this implementation. Reimplementations on other stacks can
reproduce the statistics but not the bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np

from .model import RANKS

AUTHOR_COUNT_WEIGHTS = (
    (1, 0.10), (2, 0.18), (3, 0.20), (4, 0.16), (5, 0.12), (6, 0.08),
    (7, 0.05), (8, 0.04), (9, 0.03), (10, 0.02), (11, 0.01), (12, 0.01),
)
RANK_WEIGHTS = (0.60, 0.25, 0.15)
SALARY_WEIGHTS = {"assistant": 1.0, "associate": 1.4, "full": 2.0}


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic system."""

    seed: int
    n_universities: int
    n_sds: int
    n_researchers: int
    period_start: int
    period_end: int
    hire_rate: float = 0.05
    transfer_rate: float = 0.02
    exit_rate: float = 0.02
    productivity_profile: tuple[float, ...] = ()
    pub_rate: float = 1.2
    uncited_share: float = 0.30
    citation_shape: float = 0.80
    external_author_share: float = 0.25
    positional_share: float = 0.5
    multi_category_share: float = 0.30

    def __post_init__(self) -> None:
        if self.n_universities < 1 or self.n_sds < 1 or self.n_researchers < 1:
            raise ValueError("counts must be positive")
        if self.period_end < self.period_start:
            raise ValueError("period_end must be >= period_start")
        for name in ("hire_rate", "transfer_rate", "exit_rate", "uncited_share",
                     "external_author_share", "positional_share", "multi_category_share"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.transfer_rate > 0 and self.n_universities < 2:
            raise ValueError("transfers are impossible with a single university")
        if not 0.0 < self.citation_shape < 1.0:
            raise ValueError("citation_shape must lie in (0, 1)")
        if self.pub_rate < 0:
            raise ValueError("pub_rate must be >= 0")
        profile = tuple(self.productivity_profile) or (1.0,) * self.n_universities
        if len(profile) != self.n_universities:
            raise ValueError("productivity_profile length must match n_universities")
        if min(profile) <= 0:
            raise ValueError("productivity multipliers must be positive")
        object.__setattr__(self, "productivity_profile", profile)

    @classmethod
    def from_json(cls, path: str | Path) -> "SynthSpec":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if "productivity_profile" in data and data["productivity_profile"] is not None:
            data["productivity_profile"] = tuple(data["productivity_profile"])
        return cls(**data)


@dataclass
class _Researcher:
    index: int
    sds: int
    rank: int
    history: dict[int, int] = field(default_factory=dict)  # year -> university


def _simulate_careers(spec: SynthSpec, rng: np.random.Generator) -> list[_Researcher]:
    researchers = [
        _Researcher(
            index=i,
            sds=int(rng.integers(0, spec.n_sds)),
            rank=int(rng.choice(len(RANKS), p=RANK_WEIGHTS)),
        )
        for i in range(spec.n_researchers)
    ]
    for r in researchers:
        r.history[spec.period_start] = int(rng.integers(0, spec.n_universities))

    active = list(range(spec.n_researchers))
    for year in range(spec.period_start + 1, spec.period_end + 1):
        survivors = []
        exit_draw = rng.random(len(active))
        transfer_draw = rng.random(len(active))
        for k, idx in enumerate(active):
            if exit_draw[k] < spec.exit_rate:
                continue
            r = researchers[idx]
            uni = r.history[year - 1]
            if transfer_draw[k] < spec.transfer_rate:
                shift = int(rng.integers(1, spec.n_universities))
                uni = (uni + shift) % spec.n_universities
            r.history[year] = uni
            survivors.append(idx)
        n_new = int(rng.binomial(len(active), spec.hire_rate)) if active else 0
        for _ in range(n_new):
            r = _Researcher(
                index=len(researchers),
                sds=int(rng.integers(0, spec.n_sds)),
                rank=int(rng.choice(len(RANKS), p=RANK_WEIGHTS)),
            )
            r.history[year] = int(rng.integers(0, spec.n_universities))
            researchers.append(r)
            survivors.append(r.index)
        active = survivors
    return researchers


def generate(spec: SynthSpec, out_dir: str | Path) -> dict[str, Path]:
    """Write roster.csv, publications.csv, authorships.csv, salaries.csv,
    and config.json under ``out_dir``; byte-identical per (seed, spec)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)

    uni_ids = [f"U{i:03d}" for i in range(spec.n_universities)]
    sds_ids = [f"S{i:03d}" for i in range(spec.n_sds)]
    uda_ids = [f"D{i:02d}" for i in range((spec.n_sds + 2) // 3)]
    uda_of_sds = [uda_ids[i // 3] for i in range(spec.n_sds)]

    researchers = _simulate_careers(spec, rng)

    # Same-field colleagues active in each year, for coauthor sampling.
    active_pool: dict[tuple[int, int], list[int]] = {}
    for r in researchers:
        for year in r.history:
            active_pool.setdefault((year, r.sds), []).append(r.index)

    author_counts = np.array([c for c, _ in AUTHOR_COUNT_WEIGHTS])
    author_probs = np.array([p for _, p in AUTHOR_COUNT_WEIGHTS])
    author_probs = author_probs / author_probs.sum()

    pub_rows: list[tuple[str, int, int, str]] = []
    auth_rows: list[tuple[str, int, str, str]] = []
    pub_serial = 0
    for r in researchers:
        rid = f"R{r.index:06d}"
        for year in sorted(r.history):
            uni = r.history[year]
            rate = spec.pub_rate * spec.productivity_profile[uni]
            n_pubs = int(rng.poisson(rate))
            if n_pubs == 0:
                continue
            sizes = rng.choice(author_counts, size=n_pubs, p=author_probs)
            uncited = rng.random(n_pubs) < spec.uncited_share
            cited_counts = rng.logseries(spec.citation_shape, size=n_pubs)
            two_cats = rng.random(n_pubs) < spec.multi_category_share
            for k in range(n_pubs):
                pid = f"P{pub_serial:07d}"
                pub_serial += 1
                citations = 0 if uncited[k] else int(cited_counts[k])
                cats = f"C{r.sds:03d}A"
                if two_cats[k]:
                    cats += f";C{r.sds:03d}B"
                pub_rows.append((pid, year, citations, cats))

                n_authors = int(sizes[k])
                pool = [i for i in active_pool[(year, r.sds)] if i != r.index]
                slots: list[tuple[str, str]] = [(uni_ids[uni], rid)]
                n_co = n_authors - 1
                n_tracked = 0
                if n_co > 0 and pool:
                    ext = rng.random(n_co) < spec.external_author_share
                    n_tracked = min(int(np.count_nonzero(~ext)), len(pool))
                    if n_tracked:
                        picks = rng.choice(len(pool), size=n_tracked, replace=False)
                        for p in sorted(int(x) for x in picks):
                            co = researchers[pool[p]]
                            slots.append((uni_ids[co.history[year]], f"R{co.index:06d}"))
                for _ in range(n_co - n_tracked):
                    if rng.random() < 0.8:
                        slots.append((uni_ids[int(rng.integers(0, spec.n_universities))], ""))
                    else:
                        slots.append(("", ""))
                order = rng.permutation(len(slots))
                for pos, s in enumerate(order, start=1):
                    uni_field, rid_field = slots[int(s)]
                    auth_rows.append((pid, pos, uni_field, rid_field))

    paths = {
        "roster": out / "roster.csv",
        "publications": out / "publications.csv",
        "authorships": out / "authorships.csv",
        "salaries": out / "salaries.csv",
        "config": out / "config.json",
    }

    with open(paths["roster"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["researcher_id", "year", "university_id", "sds_code", "uda_code", "rank"])
        for r in researchers:
            rid = f"R{r.index:06d}"
            for year in sorted(r.history):
                w.writerow([
                    rid, year, uni_ids[r.history[year]], sds_ids[r.sds],
                    uda_of_sds[r.sds], RANKS[r.rank],
                ])

    with open(paths["publications"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["pub_id", "year", "citations", "subject_categories"])
        w.writerows(pub_rows)

    with open(paths["authorships"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["pub_id", "position", "university_id", "researcher_id"])
        w.writerows(auth_rows)

    with open(paths["salaries"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "weight"])
        for rank in RANKS:
            w.writerow([rank, SALARY_WEIGHTS[rank]])

    n_positional = round(spec.n_sds * spec.positional_share)
    config = {
        "period_start": spec.period_start,
        "period_end": spec.period_end,
        "min_service_years": 3,
        "min_group_size": 4,
        "bibliometric_share": 0.5,
        "salary_weights": SALARY_WEIGHTS,
        "credit_scheme": {sds_ids[i]: "positional" for i in range(n_positional)},
    }
    with open(paths["config"], "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths
