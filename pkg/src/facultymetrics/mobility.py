"""Career events from yearly rosters, university cohorts, mobility summary.

Events are derived by comparing consecutive roster years per researcher:
a first appearance after the roster's opening year is a new entrant, a
university change between presence years is a transfer, and a presence
that ends before the window closes is a system exit. System exits are
excluded from turnover (retirements cannot be told apart from other
departures in roster data); turnover counts outbound transfers only.

Gap handling: one missing year at the same university is bridged as
continuous service; one missing year across different universities is
treated as a transfer; longer gaps split the career into an exit and a
re-entry. All three cases carry warnings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .model import (
    RANKS,
    AssessmentConfig,
    Dataset,
    DataQualityIssue,
    assignments,
)

NEW_ENTRANT = "new_entrant"
TRANSFER = "transfer"
SYSTEM_EXIT = "system_exit"


@dataclass(frozen=True)
class CareerEvent:
    """A typed hire / transfer / system-exit; year is the first year of
    the new state."""

    researcher_id: str
    kind: str
    year: int
    origin_university: str | None
    destination_university: str | None
    rank_at_event: str

    def __post_init__(self) -> None:
        if self.kind == NEW_ENTRANT:
            ok = self.origin_university is None and self.destination_university is not None
        elif self.kind == SYSTEM_EXIT:
            ok = self.origin_university is not None and self.destination_university is None
        elif self.kind == TRANSFER:
            ok = (
                self.origin_university is not None
                and self.destination_university is not None
                and self.origin_university != self.destination_university
            )
        else:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if not ok:
            raise ValueError(f"inconsistent endpoints for {self.kind} event")


@dataclass(frozen=True)
class UniversityCohorts:
    """Recruits, leavers, and the incumbent snapshot for one university.

    recruits/leavers map researcher_id to the qualifying career event.
    Incumbents are the professors on the roster in the window's opening
    year; recruits exclude incumbents so the two sets stay disjoint.
    """

    university_id: str
    incumbents: frozenset[str]
    recruits: Mapping[str, CareerEvent]
    leavers: Mapping[str, CareerEvent]
    eligible: bool


@dataclass(frozen=True)
class MobilitySummary:
    """Per-discipline counts of incumbents, recruits, turnover (percent
    of incumbents in parentheses in reports)."""

    uda_code: str
    incumbents: int
    recruits: int
    recruits_pct: float
    turnover: int
    turnover_pct: float
    total_mobility: int
    total_pct: float


def derive_events(
    dataset: Dataset, period: tuple[int, int] | None = None
) -> tuple[tuple[CareerEvent, ...], tuple[DataQualityIssue, ...]]:
    """Scan each researcher's roster history into typed career events."""
    start, end = period or dataset.config.period
    issues: list[DataQualityIssue] = []
    events: list[CareerEvent] = []
    if dataset.roster_year.size == 0:
        return (), ()
    roster_min = int(dataset.roster_year.min())

    for code, rid in enumerate(dataset.researchers):
        sl = dataset.roster_slice(code)
        years = dataset.roster_year[sl]
        unis = dataset.roster_uni[sl]
        ranks = dataset.roster_rank[sl]
        n = years.shape[0]

        if int(years[0]) > roster_min:
            events.append(
                CareerEvent(
                    rid, NEW_ENTRANT, int(years[0]), None,
                    dataset.universities[unis[0]], RANKS[ranks[0]],
                )
            )
        n_transfers = 0
        for i in range(1, n):
            y_prev, y_next = int(years[i - 1]), int(years[i])
            missing = y_next - y_prev - 1
            same_uni = unis[i] == unis[i - 1]
            if missing == 0:
                if not same_uni:
                    events.append(
                        CareerEvent(
                            rid, TRANSFER, y_next,
                            dataset.universities[unis[i - 1]],
                            dataset.universities[unis[i]],
                            RANKS[ranks[i]],
                        )
                    )
                    n_transfers += 1
            elif missing == 1 and same_uni:
                issues.append(
                    DataQualityIssue(
                        "warning", f"researcher {rid}",
                        f"one-year roster gap at {dataset.universities[unis[i]]} "
                        f"({y_prev}->{y_next}) bridged as continuous service",
                    )
                )
            elif missing == 1:
                issues.append(
                    DataQualityIssue(
                        "warning", f"researcher {rid}",
                        f"one-year roster gap across universities ({y_prev}->{y_next}) "
                        "treated as a transfer",
                    )
                )
                events.append(
                    CareerEvent(
                        rid, TRANSFER, y_next,
                        dataset.universities[unis[i - 1]],
                        dataset.universities[unis[i]],
                        RANKS[ranks[i]],
                    )
                )
                n_transfers += 1
            else:
                issues.append(
                    DataQualityIssue(
                        "warning", f"researcher {rid}",
                        f"{missing}-year roster gap ({y_prev}->{y_next}) treated as a "
                        "system exit followed by a new entry",
                    )
                )
                events.append(
                    CareerEvent(
                        rid, SYSTEM_EXIT, y_prev + 1,
                        dataset.universities[unis[i - 1]], None, RANKS[ranks[i - 1]],
                    )
                )
                events.append(
                    CareerEvent(
                        rid, NEW_ENTRANT, y_next, None,
                        dataset.universities[unis[i]], RANKS[ranks[i]],
                    )
                )
        if int(years[-1]) < end:
            events.append(
                CareerEvent(
                    rid, SYSTEM_EXIT, int(years[-1]) + 1,
                    dataset.universities[unis[-1]], None, RANKS[ranks[-1]],
                )
            )
        if n_transfers >= 2:
            issues.append(
                DataQualityIssue(
                    "warning", f"researcher {rid}",
                    f"{n_transfers} transfers in the history; appears in the leaver set "
                    "of several universities",
                )
            )
    return tuple(events), tuple(issues)


def _service_from(dataset: Dataset, code: int, from_year: int, end: int) -> int:
    sl = dataset.roster_slice(code)
    years = dataset.roster_year[sl]
    return int(np.count_nonzero((years >= from_year) & (years <= end)))


def build_cohorts(
    events: tuple[CareerEvent, ...],
    dataset: Dataset,
    config: AssessmentConfig | None = None,
) -> tuple[dict[str, UniversityCohorts], tuple[DataQualityIssue, ...]]:
    """Assemble per-university recruit/leaver/incumbent cohorts.

    Recruits are new entrants plus inbound transfers whose event falls in
    the window and who then stay on the roster for the configured minimum
    number of years (counted system-wide through the window's end).
    Leavers are outbound transfers in the window; system exits never
    count. Eligibility requires the configured minimum on all three sets.
    """
    config = config or dataset.config
    start, end = config.period
    issues: list[DataQualityIssue] = []

    incumbents: dict[str, set[str]] = {}
    snap = dataset.roster_year == start
    for i in np.flatnonzero(snap):
        uni = dataset.universities[dataset.roster_uni[i]]
        incumbents.setdefault(uni, set()).add(dataset.researchers[dataset.roster_res[i]])

    recruits: dict[str, dict[str, CareerEvent]] = {}
    leavers: dict[str, dict[str, CareerEvent]] = {}
    for event in events:
        if not (start <= event.year <= end):
            continue
        if event.kind in (NEW_ENTRANT, TRANSFER):
            uni = event.destination_university
            code = dataset.researcher_code(event.researcher_id)
            service = _service_from(dataset, code, event.year, end)
            if service >= config.min_service_years:
                if event.researcher_id in incumbents.get(uni, ()):
                    issues.append(
                        DataQualityIssue(
                            "warning", f"researcher {event.researcher_id}",
                            f"arrival at {uni} in {event.year} ignored as a recruitment: "
                            "already an incumbent there",
                        )
                    )
                elif event.researcher_id in recruits.get(uni, {}):
                    issues.append(
                        DataQualityIssue(
                            "warning", f"researcher {event.researcher_id}",
                            f"repeated arrival at {uni} in {event.year}; first arrival kept",
                        )
                    )
                else:
                    recruits.setdefault(uni, {})[event.researcher_id] = event
        if event.kind == TRANSFER:
            uni = event.origin_university
            if event.researcher_id in leavers.get(uni, {}):
                issues.append(
                    DataQualityIssue(
                        "warning", f"researcher {event.researcher_id}",
                        f"repeated departure from {uni}; first departure kept",
                    )
                )
            else:
                leavers.setdefault(uni, {})[event.researcher_id] = event

    names = sorted(set(incumbents) | set(recruits) | set(leavers))
    cohorts = {}
    for uni in names:
        inc = frozenset(incumbents.get(uni, ()))
        rec = recruits.get(uni, {})
        lea = leavers.get(uni, {})
        eligible = (
            len(rec) >= config.min_group_size
            and len(lea) >= config.min_group_size
            and len(inc) >= config.min_group_size
        )
        cohorts[uni] = UniversityCohorts(uni, inc, dict(rec), dict(lea), eligible)
    return cohorts, tuple(issues)


def summarize_mobility(
    cohorts: Mapping[str, UniversityCohorts], dataset: Dataset
) -> tuple[MobilitySummary, ...]:
    """Count incumbents, recruits, and turnover per discipline (UDA).

    Recruit and leaver counts are researcher-university instances (one
    professor recruited by two universities counts twice); percentages
    are relative to the discipline's incumbents.
    """
    assign = assignments(dataset)
    uda_of = {}
    for rid in dataset.researchers:
        code = dataset.researcher_code(rid)
        if assign.uda[code] >= 0:
            uda_of[rid] = dataset.uda_codes[assign.uda[code]]

    inc_count: dict[str, int] = {}
    rec_count: dict[str, int] = {}
    lea_count: dict[str, int] = {}
    for cohort in cohorts.values():
        for rid in cohort.incumbents:
            inc_count[uda_of[rid]] = inc_count.get(uda_of[rid], 0) + 1
        for rid in cohort.recruits:
            rec_count[uda_of[rid]] = rec_count.get(uda_of[rid], 0) + 1
        for rid in cohort.leavers:
            lea_count[uda_of[rid]] = lea_count.get(uda_of[rid], 0) + 1

    rows = []
    for uda in sorted(set(inc_count) | set(rec_count) | set(lea_count)):
        inc = inc_count.get(uda, 0)
        rec = rec_count.get(uda, 0)
        lea = lea_count.get(uda, 0)
        pct = lambda x: 100.0 * x / inc if inc else 0.0  # noqa: E731
        rows.append(
            MobilitySummary(
                uda_code=uda,
                incumbents=inc,
                recruits=rec,
                recruits_pct=pct(rec),
                turnover=lea,
                turnover_pct=pct(lea),
                total_mobility=rec + lea,
                total_pct=pct(rec + lea),
            )
        )
    return tuple(rows)
