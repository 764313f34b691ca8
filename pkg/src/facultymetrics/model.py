"""Domain types, dataset ingestion/validation, and field classification.

The dataset model is columnar: string identifiers are interned into code
tables once at load time and every downstream computation works on
parallel numpy arrays. Loading is two-phase (parse each file, then
cross-reference) so one pass reports every problem in the inputs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

RANKS = ("assistant", "associate", "full")
SCHEMES = ("alphabetical", "positional")

ROSTER_COLUMNS = ("researcher_id", "year", "university_id", "sds_code", "uda_code", "rank")
PUBLICATION_COLUMNS = ("pub_id", "year", "citations", "subject_categories")
AUTHORSHIP_COLUMNS = ("pub_id", "position", "university_id", "researcher_id")
SALARY_COLUMNS = ("rank", "weight")


class ConfigError(ValueError):
    """Raised for malformed or inconsistent assessment configuration."""


@dataclass(frozen=True)
class DataQualityIssue:
    """One validation finding; errors abort downstream computation."""

    severity: str  # "error" | "warning"
    locus: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity.upper()} {self.locus}: {self.message}"


def has_errors(issues: Sequence[DataQualityIssue]) -> bool:
    return any(i.severity == "error" for i in issues)


@dataclass(frozen=True)
class AssessmentConfig:
    """Assessment window and the thresholds/weights that govern the run."""

    period_start: int
    period_end: int
    min_service_years: int = 3
    min_group_size: int = 4
    bibliometric_share: float = 0.5
    salary_weights: Mapping[str, float] = field(
        default_factory=lambda: {"assistant": 1.0, "associate": 1.0, "full": 1.0}
    )
    credit_scheme: Mapping[str, str] = field(default_factory=dict)
    force_equal_credit: bool = False

    def __post_init__(self) -> None:
        if self.period_end < self.period_start:
            raise ConfigError("period_end must be >= period_start")
        if self.min_service_years < 1:
            raise ConfigError("min_service_years must be >= 1")
        if self.min_group_size < 1:
            raise ConfigError("min_group_size must be >= 1")
        if not 0.0 < self.bibliometric_share <= 1.0:
            raise ConfigError("bibliometric_share must be in (0, 1]")
        for rank, weight in self.salary_weights.items():
            if rank not in RANKS:
                raise ConfigError(f"unknown rank in salary_weights: {rank!r}")
            if not weight > 0:
                raise ConfigError(f"salary weight for {rank!r} must be positive")
        for sds, scheme in self.credit_scheme.items():
            if scheme not in SCHEMES:
                raise ConfigError(f"unknown credit scheme {scheme!r} for SDS {sds!r}")
        object.__setattr__(self, "salary_weights", dict(self.salary_weights))
        object.__setattr__(self, "credit_scheme", dict(self.credit_scheme))

    @property
    def period(self) -> tuple[int, int]:
        return (self.period_start, self.period_end)

    def scheme_for(self, sds_code: str) -> str:
        """Credit scheme for a field; unlisted fields split credit equally."""
        if self.force_equal_credit:
            return "alphabetical"
        return self.credit_scheme.get(sds_code, "alphabetical")

    def normalized_salary_weight(self, rank: str) -> float:
        """Salary weight rescaled so the assistant rank is the reference 1.0."""
        try:
            base = self.salary_weights["assistant"]
            return self.salary_weights[rank] / base
        except KeyError as exc:
            raise ConfigError(f"missing salary weight for rank {exc.args[0]!r}") from exc

    def to_dict(self) -> dict:
        return {
            "period_start": self.period_start,
            "period_end": self.period_end,
            "min_service_years": self.min_service_years,
            "min_group_size": self.min_group_size,
            "bibliometric_share": self.bibliometric_share,
            "salary_weights": dict(sorted(self.salary_weights.items())),
            "credit_scheme": dict(sorted(self.credit_scheme.items())),
            "force_equal_credit": self.force_equal_credit,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AssessmentConfig":
        known = {
            "period_start", "period_end", "min_service_years", "min_group_size",
            "bibliometric_share", "salary_weights", "credit_scheme", "force_equal_credit",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "period_start" not in data or "period_end" not in data:
            raise ConfigError("config must define period_start and period_end")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "AssessmentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(data)


class RosterEntry(NamedTuple):
    """One researcher-year affiliation; the unit of career history."""

    researcher_id: str
    year: int
    university_id: str
    sds_code: str
    uda_code: str
    rank: str


class AuthorSlot(NamedTuple):
    """One position in a publication's author list.

    university_id/researcher_id are None for external or untracked authors.
    """

    position: int
    university_id: str | None
    researcher_id: str | None


class Publication(NamedTuple):
    pub_id: str
    year: int
    citations: int
    subject_categories: tuple[str, ...]
    authors: tuple[AuthorSlot, ...]


@dataclass(frozen=True)
class Dataset:
    """Immutable columnar snapshot of roster, publications, and authorships.

    Arrays are grouped and sorted: roster by (researcher, year),
    authorships by (publication, position). Code ``-1`` marks an absent
    optional reference.
    """

    config: AssessmentConfig
    researchers: tuple[str, ...]
    universities: tuple[str, ...]
    sds_codes: tuple[str, ...]
    uda_codes: tuple[str, ...]
    categories: tuple[str, ...]
    pub_ids: tuple[str, ...]

    roster_res: np.ndarray
    roster_year: np.ndarray
    roster_uni: np.ndarray
    roster_sds: np.ndarray
    roster_uda: np.ndarray
    roster_rank: np.ndarray
    roster_offsets: np.ndarray  # researcher code -> slice into roster arrays

    pub_year: np.ndarray
    pub_citations: np.ndarray
    pub_cat_offsets: np.ndarray
    pub_cat_codes: np.ndarray

    auth_pub: np.ndarray
    auth_pos: np.ndarray
    auth_uni: np.ndarray
    auth_res: np.ndarray
    auth_offsets: np.ndarray  # publication code -> slice into auth arrays

    def __post_init__(self) -> None:
        for name in (
            "roster_res", "roster_year", "roster_uni", "roster_sds", "roster_uda",
            "roster_rank", "roster_offsets", "pub_year", "pub_citations",
            "pub_cat_offsets", "pub_cat_codes", "auth_pub", "auth_pos",
            "auth_uni", "auth_res", "auth_offsets",
        ):
            getattr(self, name).flags.writeable = False

    @property
    def n_researchers(self) -> int:
        return len(self.researchers)

    @property
    def n_publications(self) -> int:
        return len(self.pub_ids)

    def roster_slice(self, res_code: int) -> slice:
        return slice(int(self.roster_offsets[res_code]), int(self.roster_offsets[res_code + 1]))

    def roster_entries(self, researcher_id: str) -> tuple[RosterEntry, ...]:
        code = self.researcher_code(researcher_id)
        sl = self.roster_slice(code)
        return tuple(
            RosterEntry(
                researcher_id,
                int(self.roster_year[i]),
                self.universities[self.roster_uni[i]],
                self.sds_codes[self.roster_sds[i]],
                self.uda_codes[self.roster_uda[i]],
                RANKS[self.roster_rank[i]],
            )
            for i in range(sl.start, sl.stop)
        )

    def researcher_code(self, researcher_id: str) -> int:
        from bisect import bisect_left

        i = bisect_left(self.researchers, researcher_id)
        if i == len(self.researchers) or self.researchers[i] != researcher_id:
            raise KeyError(researcher_id)
        return i

    def publication_code(self, pub_id: str) -> int:
        from bisect import bisect_left

        i = bisect_left(self.pub_ids, pub_id)
        if i == len(self.pub_ids) or self.pub_ids[i] != pub_id:
            raise KeyError(pub_id)
        return i

    def publication(self, code: int) -> Publication:
        cats = tuple(
            self.categories[c]
            for c in self.pub_cat_codes[self.pub_cat_offsets[code]:self.pub_cat_offsets[code + 1]]
        )
        sl = slice(int(self.auth_offsets[code]), int(self.auth_offsets[code + 1]))
        authors = tuple(
            AuthorSlot(
                int(self.auth_pos[i]),
                self.universities[self.auth_uni[i]] if self.auth_uni[i] >= 0 else None,
                self.researchers[self.auth_res[i]] if self.auth_res[i] >= 0 else None,
            )
            for i in range(sl.start, sl.stop)
        )
        return Publication(
            self.pub_ids[code], int(self.pub_year[code]), int(self.pub_citations[code]),
            cats, authors,
        )

    def iter_publications(self) -> Iterator[Publication]:
        for code in range(self.n_publications):
            yield self.publication(code)


@dataclass(frozen=True)
class LoadResult:
    dataset: Dataset
    issues: tuple[DataQualityIssue, ...]

    @property
    def ok(self) -> bool:
        return not has_errors(self.issues)


def _open_source(source) -> tuple[io.TextIOBase, str, bool]:
    if hasattr(source, "read"):
        return source, getattr(source, "name", "<stream>"), False
    path = Path(source)
    return open(path, "r", encoding="utf-8", newline=""), path.name, True


def _read_rows(source, expected_columns, issues):
    """Parse a CSV into dict rows; returns None if the header is unusable."""
    fh, name, close = _open_source(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            issues.append(DataQualityIssue("error", name, "file is empty (missing header)"))
            return None, name
        header = [h.strip() for h in header]
        missing = [c for c in expected_columns if c not in header]
        if missing:
            issues.append(
                DataQualityIssue(
                    "error", name, f"missing column(s): {', '.join(missing)}"
                )
            )
            return None, name
        idx = [header.index(c) for c in expected_columns]
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            if len(raw) < len(header):
                issues.append(
                    DataQualityIssue("error", f"{name}:{lineno}", "row has too few fields")
                )
                continue
            rows.append((lineno, [raw[i].strip() for i in idx]))
        return rows, name
    finally:
        if close:
            fh.close()


def _parse_int(text: str, what: str, locus: str, issues) -> int | None:
    try:
        return int(text)
    except ValueError:
        issues.append(DataQualityIssue("error", locus, f"{what} is not an integer: {text!r}"))
        return None


def load_salary_weights(source, issues: list | None = None) -> dict[str, float]:
    """Read a rank,weight CSV into a salary-weights mapping."""
    own = issues if issues is not None else []
    rows, name = _read_rows(source, SALARY_COLUMNS, own)
    weights: dict[str, float] = {}
    if rows is None:
        if issues is None:
            raise ConfigError(f"unreadable salary file: {own[-1].message}")
        return weights
    for lineno, (rank, weight_text) in rows:
        locus = f"{name}:{lineno}"
        if rank not in RANKS:
            own.append(DataQualityIssue("error", locus, f"unknown rank {rank!r}"))
            continue
        try:
            weight = float(weight_text)
        except ValueError:
            own.append(DataQualityIssue("error", locus, f"weight is not a number: {weight_text!r}"))
            continue
        if weight <= 0:
            own.append(DataQualityIssue("error", locus, "salary weight must be positive"))
            continue
        if rank in weights:
            own.append(DataQualityIssue("error", locus, f"duplicate rank {rank!r}"))
            continue
        weights[rank] = weight
    if issues is None and has_errors(own):
        raise ConfigError("; ".join(str(i) for i in own if i.severity == "error"))
    return weights


def load_dataset(
    roster_source,
    publication_source,
    authorship_source,
    config: AssessmentConfig,
) -> LoadResult:
    """Parse and cross-validate the three input files into a Dataset.

    All data-quality findings are collected; rows that violate an
    invariant are dropped so the returned dataset is always internally
    consistent, but downstream computation should be refused whenever an
    error-severity issue is present.
    """
    issues: list[DataQualityIssue] = []

    roster_rows, roster_name = _read_rows(roster_source, ROSTER_COLUMNS, issues)
    pub_rows, pub_name = _read_rows(publication_source, PUBLICATION_COLUMNS, issues)
    auth_rows, auth_name = _read_rows(authorship_source, AUTHORSHIP_COLUMNS, issues)

    roster: list[tuple[str, int, str, str, str, int]] = []
    seen_res_year: set[tuple[str, int]] = set()
    if roster_rows is not None:
        for lineno, (rid, year_t, uni, sds, uda, rank) in roster_rows:
            locus = f"{roster_name}:{lineno}"
            if not rid or not uni or not sds or not uda:
                issues.append(DataQualityIssue("error", locus, "empty identifier field"))
                continue
            year = _parse_int(year_t, "year", locus, issues)
            if year is None:
                continue
            if rank not in RANKS:
                issues.append(
                    DataQualityIssue("error", locus, f"unknown rank {rank!r} (expected one of {', '.join(RANKS)})")
                )
                continue
            if year > config.period_end:
                issues.append(
                    DataQualityIssue(
                        "error", locus,
                        f"roster year {year} lies after the assessment period end {config.period_end}",
                    )
                )
                continue
            key = (rid, year)
            if key in seen_res_year:
                issues.append(
                    DataQualityIssue("error", locus, f"duplicate roster entry for ({rid}, {year})")
                )
                continue
            seen_res_year.add(key)
            roster.append((rid, year, uni, sds, uda, RANKS.index(rank)))

    pubs: dict[str, tuple[int, int, tuple[str, ...]]] = {}
    if pub_rows is not None:
        for lineno, (pid, year_t, cit_t, cats_t) in pub_rows:
            locus = f"{pub_name}:{lineno}"
            if not pid:
                issues.append(DataQualityIssue("error", locus, "empty pub_id"))
                continue
            year = _parse_int(year_t, "year", locus, issues)
            citations = _parse_int(cit_t, "citations", locus, issues)
            if year is None or citations is None:
                continue
            if citations < 0:
                issues.append(DataQualityIssue("error", locus, "citations must be >= 0"))
                continue
            cats = tuple(sorted({c.strip() for c in cats_t.split(";") if c.strip()}))
            if not cats:
                issues.append(DataQualityIssue("error", locus, "publication has no subject categories"))
                continue
            if pid in pubs:
                issues.append(DataQualityIssue("error", locus, f"duplicate pub_id {pid!r}"))
                continue
            pubs[pid] = (year, citations, cats)

    slots: dict[str, list[tuple[int, int, str, str]]] = {pid: [] for pid in pubs}
    tracked_ids = {rid for rid, *_ in roster}
    if auth_rows is not None:
        for lineno, (pid, pos_t, uni, rid) in auth_rows:
            locus = f"{auth_name}:{lineno}"
            if pid not in pubs:
                issues.append(DataQualityIssue("error", locus, f"authorship references unknown pub_id {pid!r}"))
                continue
            pos = _parse_int(pos_t, "position", locus, issues)
            if pos is None:
                continue
            if pos < 1:
                issues.append(DataQualityIssue("error", locus, "author position must be >= 1"))
                continue
            if rid and rid not in tracked_ids:
                issues.append(
                    DataQualityIssue("error", locus, f"authorship references researcher {rid!r} absent from the roster")
                )
                rid = ""
            slots[pid].append((pos, lineno, uni, rid))

    # Cross-reference: author positions must be exactly 1..n per publication.
    kept_pub_ids = []
    for pid in sorted(pubs):
        plist = slots[pid]
        if not plist:
            issues.append(DataQualityIssue("error", pub_name + f":pub {pid}", "publication has no authors"))
            continue
        positions = sorted(p for p, *_ in plist)
        if positions != list(range(1, len(plist) + 1)):
            issues.append(
                DataQualityIssue(
                    "error", auth_name + f":pub {pid}",
                    f"author positions {positions} are not contiguous 1..{len(plist)}",
                )
            )
            continue
        linked = [rid for _, _, _, rid in plist if rid]
        if len(linked) != len(set(linked)):
            issues.append(
                DataQualityIssue(
                    "warning", auth_name + f":pub {pid}",
                    "a researcher appears more than once in the author list",
                )
            )
        kept_pub_ids.append(pid)

    dataset = _build_dataset(config, roster, pubs, slots, kept_pub_ids)
    return LoadResult(dataset, tuple(issues))


def _build_dataset(config, roster, pubs, slots, kept_pub_ids) -> Dataset:
    researchers = tuple(sorted({r[0] for r in roster}))
    res_code = {r: i for i, r in enumerate(researchers)}

    uni_names: set[str] = {r[2] for r in roster}
    sds_names: set[str] = {r[3] for r in roster}
    uda_names: set[str] = {r[4] for r in roster}
    cat_names: set[str] = set()
    for pid in kept_pub_ids:
        cat_names.update(pubs[pid][2])
        for _, _, uni, _ in slots[pid]:
            if uni:
                uni_names.add(uni)
    universities = tuple(sorted(uni_names))
    sds_codes = tuple(sorted(sds_names))
    uda_codes = tuple(sorted(uda_names))
    categories = tuple(sorted(cat_names))
    uni_code = {u: i for i, u in enumerate(universities)}
    sds_code = {s: i for i, s in enumerate(sds_codes)}
    uda_code = {u: i for i, u in enumerate(uda_codes)}
    cat_code = {c: i for i, c in enumerate(categories)}

    roster_sorted = sorted(roster, key=lambda r: (r[0], r[1]))
    n_roster = len(roster_sorted)
    roster_res = np.fromiter((res_code[r[0]] for r in roster_sorted), np.int32, n_roster)
    roster_year = np.fromiter((r[1] for r in roster_sorted), np.int32, n_roster)
    roster_uni = np.fromiter((uni_code[r[2]] for r in roster_sorted), np.int32, n_roster)
    roster_sds = np.fromiter((sds_code[r[3]] for r in roster_sorted), np.int32, n_roster)
    roster_uda = np.fromiter((uda_code[r[4]] for r in roster_sorted), np.int32, n_roster)
    roster_rank = np.fromiter((r[5] for r in roster_sorted), np.int8, n_roster)
    roster_offsets = np.zeros(len(researchers) + 1, dtype=np.int64)
    np.add.at(roster_offsets, roster_res + 1, 1)
    roster_offsets = np.cumsum(roster_offsets)

    pub_ids = tuple(kept_pub_ids)
    pub_code = {p: i for i, p in enumerate(pub_ids)}
    n_pubs = len(pub_ids)
    pub_year = np.fromiter((pubs[p][0] for p in pub_ids), np.int32, n_pubs)
    pub_citations = np.fromiter((pubs[p][1] for p in pub_ids), np.int64, n_pubs)
    cat_counts = np.fromiter((len(pubs[p][2]) for p in pub_ids), np.int64, n_pubs)
    pub_cat_offsets = np.concatenate(([0], np.cumsum(cat_counts)))
    pub_cat_codes = np.fromiter(
        (cat_code[c] for p in pub_ids for c in pubs[p][2]), np.int32, int(pub_cat_offsets[-1])
    )

    flat_slots = []
    for p in pub_ids:
        for pos, _, uni, rid in sorted(slots[p]):
            flat_slots.append(
                (
                    pub_code[p],
                    pos,
                    uni_code[uni] if uni else -1,
                    res_code[rid] if rid else -1,
                )
            )
    n_slots = len(flat_slots)
    auth_pub = np.fromiter((s[0] for s in flat_slots), np.int32, n_slots)
    auth_pos = np.fromiter((s[1] for s in flat_slots), np.int32, n_slots)
    auth_uni = np.fromiter((s[2] for s in flat_slots), np.int32, n_slots)
    auth_res = np.fromiter((s[3] for s in flat_slots), np.int32, n_slots)
    auth_offsets = np.zeros(n_pubs + 1, dtype=np.int64)
    np.add.at(auth_offsets, auth_pub + 1, 1)
    auth_offsets = np.cumsum(auth_offsets)

    return Dataset(
        config=config,
        researchers=researchers,
        universities=universities,
        sds_codes=sds_codes,
        uda_codes=uda_codes,
        categories=categories,
        pub_ids=pub_ids,
        roster_res=roster_res,
        roster_year=roster_year,
        roster_uni=roster_uni,
        roster_sds=roster_sds,
        roster_uda=roster_uda,
        roster_rank=roster_rank,
        roster_offsets=roster_offsets,
        pub_year=pub_year,
        pub_citations=pub_citations,
        pub_cat_offsets=pub_cat_offsets,
        pub_cat_codes=pub_cat_codes,
        auth_pub=auth_pub,
        auth_pos=auth_pos,
        auth_uni=auth_uni,
        auth_res=auth_res,
        auth_offsets=auth_offsets,
    )


@dataclass(frozen=True)
class Assignments:
    """Per-researcher attributes derived from in-period roster years.

    A professor belongs to the field of their most recent roster year
    inside the period (field changes are rare; last observation wins).
    Code ``-1`` marks researchers with no roster year in the period; they
    are not evaluable.
    """

    sds: np.ndarray
    uda: np.ndarray
    rank: np.ndarray
    first_year: np.ndarray
    last_year: np.ndarray
    years_in_period: np.ndarray


def assignments(dataset: Dataset) -> Assignments:
    start, end = dataset.config.period
    n = dataset.n_researchers
    sds = np.full(n, -1, dtype=np.int32)
    uda = np.full(n, -1, dtype=np.int32)
    rank = np.full(n, -1, dtype=np.int8)
    first_year = np.full(n, -1, dtype=np.int32)
    last_year = np.full(n, -1, dtype=np.int32)
    years = np.zeros(n, dtype=np.int32)

    in_period = (dataset.roster_year >= start) & (dataset.roster_year <= end)
    idx = np.flatnonzero(in_period)
    if idx.size:
        res = dataset.roster_res[idx]
        # roster is sorted by (researcher, year): the last in-period row per
        # researcher is the assignment row.
        counts = np.bincount(res, minlength=n)
        years[:] = counts
        last_idx_per_res = np.full(n, -1, dtype=np.int64)
        last_idx_per_res[res] = idx  # later rows overwrite earlier ones
        first_idx_per_res = np.full(n, -1, dtype=np.int64)
        first_idx_per_res[res[::-1]] = idx[::-1]
        has = last_idx_per_res >= 0
        sds[has] = dataset.roster_sds[last_idx_per_res[has]]
        uda[has] = dataset.roster_uda[last_idx_per_res[has]]
        rank[has] = dataset.roster_rank[last_idx_per_res[has]]
        last_year[has] = dataset.roster_year[last_idx_per_res[has]]
        first_year[has] = dataset.roster_year[first_idx_per_res[has]]
    return Assignments(sds, uda, rank, first_year, last_year, years)


def classify_bibliometric_sds(
    dataset: Dataset, config: AssessmentConfig | None = None
) -> tuple[frozenset[str], tuple[DataQualityIssue, ...]]:
    """Fields where enough professors published to trust publication counts.

    A field qualifies when (professors with at least one in-period
    publication) / (professors with at least one in-period roster year)
    reaches the configured share; the boundary is inclusive. Professors
    are counted nationally, across universities.
    """
    config = config or dataset.config
    issues: list[DataQualityIssue] = []
    assign = assignments(dataset)

    start, end = config.period_start, config.period_end
    pub_in_period = (dataset.pub_year >= start) & (dataset.pub_year <= end)
    linked = dataset.auth_res >= 0
    slot_in_period = pub_in_period[dataset.auth_pub] & linked
    publishers = np.zeros(dataset.n_researchers, dtype=bool)
    publishers[dataset.auth_res[slot_in_period]] = True

    evaluable = assign.sds >= 0
    n_sds = len(dataset.sds_codes)
    totals = np.bincount(assign.sds[evaluable], minlength=n_sds)
    pubbed = np.bincount(assign.sds[evaluable & publishers], minlength=n_sds)

    qualifying = []
    for code, name in enumerate(dataset.sds_codes):
        if totals[code] == 0:
            issues.append(
                DataQualityIssue(
                    "warning", f"sds {name}",
                    "no professors in the assessment period; excluded from classification",
                )
            )
            continue
        if pubbed[code] / totals[code] >= config.bibliometric_share:
            qualifying.append(name)
    return frozenset(qualifying), tuple(issues)


def restrict_to_bibliometric(
    dataset: Dataset,
    bibliometric: frozenset[str] | None = None,
) -> tuple[Dataset, tuple[DataQualityIssue, ...]]:
    """Drop professors outside the qualifying fields.

    Keeps the full career history of every retained professor. Author
    slots of dropped professors stay in place (author counts and
    affiliations must stay truthful for credit splitting) but lose their
    researcher link; publications left with no tracked author are
    removed. Idempotent.
    """
    issues: list[DataQualityIssue] = []
    if bibliometric is None:
        bibliometric, issues_cls = classify_bibliometric_sds(dataset)
        issues.extend(issues_cls)

    assign = assignments(dataset)
    bib_mask = np.zeros(len(dataset.sds_codes) + 1, dtype=bool)
    for i, name in enumerate(dataset.sds_codes):
        bib_mask[i] = name in bibliometric
    keep_res = bib_mask[assign.sds]  # sds == -1 indexes the trailing False
    if not keep_res.any():
        issues.append(
            DataQualityIssue("warning", "dataset", "no field qualifies as bibliometric; dataset is empty")
        )

    n_new = int(keep_res.sum())
    res_map = np.full(dataset.n_researchers, -1, dtype=np.int64)
    res_map[keep_res] = np.arange(n_new)
    researchers = tuple(
        rid for rid, keep in zip(dataset.researchers, keep_res) if keep
    )

    m = keep_res[dataset.roster_res]
    roster_res = res_map[dataset.roster_res[m]].astype(np.int32)
    roster_offsets = np.zeros(n_new + 1, dtype=np.int64)
    np.add.at(roster_offsets, roster_res + 1, 1)

    pub_keep = np.zeros(dataset.n_publications, dtype=bool)
    linked = dataset.auth_res >= 0
    linked_kept = linked.copy()
    linked_kept[linked] = keep_res[dataset.auth_res[linked]]
    pub_keep[dataset.auth_pub[linked_kept]] = True

    n_pubs_new = int(pub_keep.sum())
    pub_map = np.full(dataset.n_publications, -1, dtype=np.int64)
    pub_map[pub_keep] = np.arange(n_pubs_new)
    pub_ids = tuple(pid for pid, keep in zip(dataset.pub_ids, pub_keep) if keep)

    cat_counts = np.diff(dataset.pub_cat_offsets)
    cat_row_keep = np.repeat(pub_keep, cat_counts)
    pub_cat_offsets = np.concatenate(([0], np.cumsum(cat_counts[pub_keep])))

    slot_keep = pub_keep[dataset.auth_pub]
    auth_res_old = dataset.auth_res[slot_keep]
    auth_res = np.where(auth_res_old >= 0, res_map[auth_res_old], -1).astype(np.int32)
    auth_pub = pub_map[dataset.auth_pub[slot_keep]].astype(np.int32)
    auth_offsets = np.zeros(n_pubs_new + 1, dtype=np.int64)
    np.add.at(auth_offsets, auth_pub + 1, 1)

    restricted = Dataset(
        config=dataset.config,
        researchers=researchers,
        universities=dataset.universities,
        sds_codes=dataset.sds_codes,
        uda_codes=dataset.uda_codes,
        categories=dataset.categories,
        pub_ids=pub_ids,
        roster_res=roster_res,
        roster_year=dataset.roster_year[m].copy(),
        roster_uni=dataset.roster_uni[m].copy(),
        roster_sds=dataset.roster_sds[m].copy(),
        roster_uda=dataset.roster_uda[m].copy(),
        roster_rank=dataset.roster_rank[m].copy(),
        roster_offsets=np.cumsum(roster_offsets),
        pub_year=dataset.pub_year[pub_keep].copy(),
        pub_citations=dataset.pub_citations[pub_keep].copy(),
        pub_cat_offsets=pub_cat_offsets,
        pub_cat_codes=dataset.pub_cat_codes[cat_row_keep].copy(),
        auth_pub=auth_pub,
        auth_pos=dataset.auth_pos[slot_keep].copy(),
        auth_uni=dataset.auth_uni[slot_keep].copy(),
        auth_res=auth_res,
        auth_offsets=np.cumsum(auth_offsets),
    )
    return restricted, tuple(issues)
