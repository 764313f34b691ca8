"""Recruitment, turnover, and overall mobility effectiveness per university.

Twelve indicators, four per dimension:

* internal perspective: each recruit (leaver) is compared against the
  mean salary-normalized productivity of the hiring (losing)
  university's own incumbents in the same field, pooled across ranks;
* external perspective: against the mean raw productivity of all
  professors nationwide in the same field and academic rank (single-rank
  pools need no salary normalization).

The x1.1-style indicators average the ratios; the x1.2-style indicators
take the share of people strictly better (recruits) or strictly worse
(leavers) than the benchmark. Overall mobility is the count-weighted
average of the recruitment and turnover values.

Zero denominators use a smallest-positive substitution: the lowest
strictly positive value of the comparison distribution is added to both
sides of the ratio. When the whole distribution is zero the person's
term is not computable and is excluded from the mean, with a note on the
university's report row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .model import RANKS, AssessmentConfig, Dataset, DataQualityIssue
from .mobility import CareerEvent, UniversityCohorts, build_cohorts, derive_events
from .scoring import ScoreTable, build_scores, percentile_rank

INDICATOR_FIELDS = (
    "r11", "r12", "r21", "r22",
    "t11", "t12", "t21", "t22",
    "m11", "m12", "m21", "m22",
)

TOTAL_ROW_ID = "TOTAL"


@dataclass(frozen=True)
class InternalAverage:
    """Mean salary-normalized productivity of one university's incumbents
    in one field (all ranks pooled)."""

    university_id: str
    sds_code: str
    value: float
    n: int


@dataclass(frozen=True)
class ExternalAverage:
    """Mean raw productivity of all professors of one field and rank."""

    sds_code: str
    rank: str
    value: float
    n: int


@dataclass(frozen=True)
class EffectivenessReport:
    university_id: str
    n_recruits: int
    n_leavers: int
    r11: float | None
    r12: float | None
    r21: float | None
    r22: float | None
    t11: float | None
    t12: float | None
    t21: float | None
    t22: float | None
    m11: float | None
    m12: float | None
    m21: float | None
    m22: float | None
    percentiles: Mapping[str, int | None]
    eligible: bool
    notes: tuple[str, ...] = ()

    def value(self, name: str) -> float | None:
        if name not in INDICATOR_FIELDS:
            raise KeyError(name)
        return getattr(self, name)


@dataclass(frozen=True)
class FullReport:
    rows: tuple[EffectivenessReport, ...]
    total: EffectivenessReport | None
    issues: tuple[DataQualityIssue, ...]


class _InternalPools:
    """Per (university, field) incumbent productivity pools."""

    def __init__(self, cohorts, scores: ScoreTable):
        self.values: dict[tuple[str, str], list[tuple[str, float]]] = {}
        dataset = scores.dataset
        for uni, cohort in cohorts.items():
            for rid in cohort.incumbents:
                code = scores.code(rid)
                if not scores.evaluable[code]:
                    continue
                sds = dataset.sds_codes[scores.sds[code]]
                self.values.setdefault((uni, sds), []).append(
                    (rid, float(scores.fss_norm[code]))
                )

    def stats(
        self, university_id: str, sds_code: str, exclude: str | None = None
    ) -> tuple[float, float | None, int] | None:
        """(mean, smallest positive, size) of the pool, or None if empty."""
        pool = self.values.get((university_id, sds_code))
        if not pool:
            return None
        vals = [v for rid, v in pool if rid != exclude]
        if not vals:
            return None
        positive = [v for v in vals if v > 0]
        return (sum(vals) / len(vals), min(positive) if positive else None, len(vals))


class _ExternalPools:
    """National (field, rank) raw-productivity pools."""

    def __init__(self, scores: ScoreTable):
        dataset = scores.dataset
        acc: dict[tuple[str, str], list[float]] = {}
        for code, rid in enumerate(dataset.researchers):
            if not scores.evaluable[code]:
                continue
            key = (dataset.sds_codes[scores.sds[code]], RANKS[scores.rank[code]])
            acc.setdefault(key, []).append(float(scores.fss[code]))
        self.stats_by_key: dict[tuple[str, str], tuple[float, float | None, int]] = {}
        for key, vals in acc.items():
            positive = [v for v in vals if v > 0]
            self.stats_by_key[key] = (
                sum(vals) / len(vals),
                min(positive) if positive else None,
                len(vals),
            )

    def stats(self, sds_code: str, rank: str) -> tuple[float, float | None, int] | None:
        return self.stats_by_key.get((sds_code, rank))


def internal_average(
    university_id: str,
    sds_code: str,
    cohorts: Mapping[str, UniversityCohorts],
    scores: ScoreTable,
    exclude: str | None = None,
) -> InternalAverage | None:
    """Salary-normalized incumbent mean; for leaver evaluation the leaver
    is excluded from their own pool."""
    pools = _InternalPools(cohorts, scores)
    stats = pools.stats(university_id, sds_code, exclude)
    if stats is None:
        return None
    mean, _, n = stats
    return InternalAverage(university_id, sds_code, mean, n)


def external_average(sds_code: str, rank: str, scores: ScoreTable) -> ExternalAverage | None:
    stats = _ExternalPools(scores).stats(sds_code, rank)
    if stats is None:
        return None
    mean, _, n = stats
    return ExternalAverage(sds_code, rank, mean, n)


def substitute_degenerate(
    numerator: float, denominator: float, distribution: Sequence[float]
) -> float | None:
    """Zero-denominator fallback for the ratio indicators.

    The smallest strictly positive value of the comparison distribution
    is assigned to the denominator and added to the numerator. Returns
    None when the distribution holds no positive value at all (the term
    is not computable).
    """
    if denominator != 0:
        raise ValueError("substitution applies only to a zero denominator")
    positive = [v for v in distribution if v > 0]
    if not positive:
        return None
    eps = min(positive)
    return (numerator + eps) / eps


def _ratio(numerator: float, denominator: float, min_positive: float | None) -> float | None:
    if denominator > 0:
        return numerator / denominator
    if min_positive is None:
        return None
    return (numerator + min_positive) / min_positive


def _mean(terms: list[float]) -> float | None:
    return sum(terms) / len(terms) if terms else None


@dataclass
class _Terms:
    """Per-person indicator terms pooled while walking universities."""

    t11: list[float] = field(default_factory=list)
    t12: list[float] = field(default_factory=list)
    t21: list[float] = field(default_factory=list)
    t22: list[float] = field(default_factory=list)

    def extend(self, other: "_Terms") -> None:
        self.t11.extend(other.t11)
        self.t12.extend(other.t12)
        self.t21.extend(other.t21)
        self.t22.extend(other.t22)

    def means(self) -> tuple[float | None, float | None, float | None, float | None]:
        return (_mean(self.t11), _mean(self.t12), _mean(self.t21), _mean(self.t22))


def _recruit_terms(
    university_id: str,
    recruits: Mapping[str, CareerEvent],
    scores: ScoreTable,
    internal: _InternalPools,
    external: _ExternalPools,
) -> tuple[_Terms, list[str]]:
    dataset = scores.dataset
    terms = _Terms()
    notes: list[str] = []
    for rid in sorted(recruits):
        event = recruits[rid]
        code = scores.code(rid)
        sds = dataset.sds_codes[scores.sds[code]]
        norm_j = float(scores.fss_norm[code])
        raw_j = float(scores.fss[code])

        stats = internal.stats(university_id, sds)
        if stats is None:
            notes.append(f"recruit {rid}: no incumbent pool for {sds} at {university_id}")
        else:
            ibar, min_pos, _ = stats
            ratio = _ratio(norm_j, ibar, min_pos)
            if ratio is None:
                notes.append(
                    f"recruit {rid}: incumbent pool for {sds} at {university_id} is all "
                    "zero; internal ratio not computable"
                )
            else:
                terms.t11.append(ratio)
            terms.t12.append(1.0 if norm_j > ibar else 0.0)

        ext = external.stats(sds, event.rank_at_event)
        if ext is None:
            notes.append(
                f"recruit {rid}: no national pool for {sds}/{event.rank_at_event}"
            )
        else:
            ebar, min_pos, _ = ext
            ratio = _ratio(raw_j, ebar, min_pos)
            if ratio is None:
                notes.append(
                    f"recruit {rid}: national pool for {sds}/{event.rank_at_event} is "
                    "all zero; external ratio not computable"
                )
            else:
                terms.t21.append(ratio)
            terms.t22.append(1.0 if raw_j > ebar else 0.0)
    return terms, notes


def _leaver_terms(
    university_id: str,
    leavers: Mapping[str, CareerEvent],
    scores: ScoreTable,
    internal: _InternalPools,
    external: _ExternalPools,
) -> tuple[_Terms, list[str]]:
    dataset = scores.dataset
    terms = _Terms()
    notes: list[str] = []
    for rid in sorted(leavers):
        event = leavers[rid]
        code = scores.code(rid)
        sds = dataset.sds_codes[scores.sds[code]]
        norm_j = float(scores.fss_norm[code])
        raw_j = float(scores.fss[code])

        stats = internal.stats(university_id, sds, exclude=rid)
        if stats is None:
            notes.append(f"leaver {rid}: no incumbent pool for {sds} at {university_id}")
        else:
            ibar, min_pos, _ = stats
            ratio = _ratio(ibar, norm_j, min_pos)
            if ratio is None:
                notes.append(
                    f"leaver {rid}: zero productivity against an all-zero incumbent "
                    f"pool for {sds} at {university_id}; internal ratio not computable"
                )
            else:
                terms.t11.append(ratio)
            terms.t12.append(1.0 if norm_j < ibar else 0.0)

        ext = external.stats(sds, event.rank_at_event)
        if ext is None:
            notes.append(
                f"leaver {rid}: no national pool for {sds}/{event.rank_at_event}"
            )
        else:
            ebar, min_pos, _ = ext
            ratio = _ratio(ebar, raw_j, min_pos)
            if ratio is None:
                notes.append(
                    f"leaver {rid}: zero productivity against an all-zero national "
                    f"pool for {sds}/{event.rank_at_event}; external ratio not computable"
                )
            else:
                terms.t21.append(ratio)
            terms.t22.append(1.0 if raw_j < ebar else 0.0)
    return terms, notes


def recruitment_effectiveness(
    university_id: str,
    cohorts: Mapping[str, UniversityCohorts],
    scores: ScoreTable,
) -> tuple[float | None, float | None, float | None, float | None]:
    terms, _ = _recruit_terms(
        university_id, cohorts[university_id].recruits, scores,
        _InternalPools(cohorts, scores), _ExternalPools(scores),
    )
    return terms.means()


def turnover_effectiveness(
    university_id: str,
    cohorts: Mapping[str, UniversityCohorts],
    scores: ScoreTable,
) -> tuple[float | None, float | None, float | None, float | None]:
    terms, _ = _leaver_terms(
        university_id, cohorts[university_id].leavers, scores,
        _InternalPools(cohorts, scores), _ExternalPools(scores),
    )
    return terms.means()


def mobility_effectiveness(
    n_recruits: int,
    n_leavers: int,
    r: Sequence[float | None],
    t: Sequence[float | None],
) -> tuple[float | None, ...]:
    """Count-weighted average of the recruitment and turnover values; an
    undefined side carries zero weight."""
    if n_recruits + n_leavers < 1:
        return (None, None, None, None)
    out = []
    for rv, tv in zip(r, t):
        if rv is None and tv is None:
            out.append(None)
        elif rv is None:
            out.append(tv)
        elif tv is None:
            out.append(rv)
        else:
            out.append((n_recruits * rv + n_leavers * tv) / (n_recruits + n_leavers))
    return tuple(out)


def full_report(
    dataset: Dataset,
    config: AssessmentConfig | None = None,
    *,
    scores: ScoreTable | None = None,
    cohorts: Mapping[str, UniversityCohorts] | None = None,
) -> FullReport:
    """All twelve indicators for every eligible university, with
    percentile ranks over the eligible set, plus the nationally pooled
    totals row."""
    config = config or dataset.config
    issues: list[DataQualityIssue] = []
    if scores is None:
        scores = build_scores(dataset, config)
        issues.extend(scores.issues)
    if cohorts is None:
        events, ev_issues = derive_events(dataset, config.period)
        issues.extend(ev_issues)
        cohorts, co_issues = build_cohorts(events, dataset, config)
        issues.extend(co_issues)

    internal = _InternalPools(cohorts, scores)
    external = _ExternalPools(scores)

    rows: list[EffectivenessReport] = []
    pooled_recruit = _Terms()
    pooled_leaver = _Terms()
    total_recruits = 0
    total_leavers = 0

    for uni in sorted(cohorts):
        cohort = cohorts[uni]
        r_terms, r_notes = _recruit_terms(uni, cohort.recruits, scores, internal, external)
        l_terms, l_notes = _leaver_terms(uni, cohort.leavers, scores, internal, external)
        pooled_recruit.extend(r_terms)
        pooled_leaver.extend(l_terms)
        total_recruits += len(cohort.recruits)
        total_leavers += len(cohort.leavers)
        for note in r_notes + l_notes:
            issues.append(DataQualityIssue("warning", f"university {uni}", note))
        if not cohort.eligible:
            continue
        r = r_terms.means()
        t = l_terms.means()
        m = mobility_effectiveness(len(cohort.recruits), len(cohort.leavers), r, t)
        rows.append(
            EffectivenessReport(
                university_id=uni,
                n_recruits=len(cohort.recruits),
                n_leavers=len(cohort.leavers),
                r11=r[0], r12=r[1], r21=r[2], r22=r[3],
                t11=t[0], t12=t[1], t21=t[2], t22=t[3],
                m11=m[0], m12=m[1], m21=m[2], m22=m[3],
                percentiles={},
                eligible=True,
                notes=tuple(r_notes + l_notes),
            )
        )

    # Percentile ranks per indicator over the eligible universities.
    ranked_rows = []
    per_field: dict[str, dict[str, int]] = {}
    for name in INDICATOR_FIELDS:
        values = [(row.university_id, row.value(name)) for row in rows if row.value(name) is not None]
        if len(values) >= 2:
            pcts = percentile_rank([v for _, v in values])
            per_field[name] = {uid: p for (uid, _), p in zip(values, pcts)}
        else:
            per_field[name] = {}
    for row in rows:
        pct = {name: per_field[name].get(row.university_id) for name in INDICATOR_FIELDS}
        ranked_rows.append(
            EffectivenessReport(
                university_id=row.university_id,
                n_recruits=row.n_recruits,
                n_leavers=row.n_leavers,
                r11=row.r11, r12=row.r12, r21=row.r21, r22=row.r22,
                t11=row.t11, t12=row.t12, t21=row.t21, t22=row.t22,
                m11=row.m11, m12=row.m12, m21=row.m21, m22=row.m22,
                percentiles=pct,
                eligible=True,
                notes=row.notes,
            )
        )

    total = None
    if total_recruits + total_leavers > 0:
        r = pooled_recruit.means()
        t = pooled_leaver.means()
        m = mobility_effectiveness(total_recruits, total_leavers, r, t)
        total = EffectivenessReport(
            university_id=TOTAL_ROW_ID,
            n_recruits=total_recruits,
            n_leavers=total_leavers,
            r11=r[0], r12=r[1], r21=r[2], r22=r[3],
            t11=t[0], t12=t[1], t21=t[2], t22=t[3],
            m11=m[0], m12=m[1], m21=m[2], m22=m[3],
            percentiles={name: None for name in INDICATOR_FIELDS},
            eligible=True,
        )
    if not ranked_rows:
        issues.append(
            DataQualityIssue("warning", "report", "no university meets the eligibility thresholds")
        )
    return FullReport(tuple(ranked_rows), total, tuple(issues))
