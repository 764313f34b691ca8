"""Citation baselines, per-researcher productivity, and rank scaling.

Productivity of a researcher is their yearly average of citation-scaled,
co-authorship-fractionalized publication output:

    productivity = (1/t) * sum over publications of (c_i / c_bar_i) * f_i

where t is years of service inside the assessment window, c_i the
citations of publication i, c_bar_i the mean citations of *cited*
publications of the same year and subject category, and f_i the
researcher's fractional credit for publication i.

Baselines are corpus-relative: c_bar is computed from the ingested
publication set, which stands in for the national citation distribution
of each (year, category) stratum.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _kernels, credit
from .model import (
    RANKS,
    AssessmentConfig,
    ConfigError,
    Dataset,
    DataQualityIssue,
    Publication,
    assignments,
)

Baselines = Mapping[tuple[int, str], float]


def compute_baselines(dataset: Dataset, config: AssessmentConfig | None = None) -> dict[tuple[int, str], float]:
    """Mean citations of cited publications per (year, category) stratum.

    Uncited publications do not contribute; a stratum with no cited
    publication has no baseline.
    """
    config = config or dataset.config
    start, end = config.period_start, config.period_end
    out: dict[tuple[int, str], float] = {}
    sums: dict[tuple[int, int], tuple[int, int]] = {}
    for p in range(dataset.n_publications):
        year = int(dataset.pub_year[p])
        cit = int(dataset.pub_citations[p])
        if cit <= 0 or not (start <= year <= end):
            continue
        for c in dataset.pub_cat_codes[dataset.pub_cat_offsets[p]:dataset.pub_cat_offsets[p + 1]]:
            key = (year, int(c))
            s, n = sums.get(key, (0, 0))
            sums[key] = (s + cit, n + 1)
    for (year, c), (s, n) in sums.items():
        out[(year, dataset.categories[c])] = s / n
    return out


def scaled_citation(publication: Publication, baselines: Baselines) -> float:
    """Citations over the mean baseline of the publication's categories.

    Multi-category publications use the arithmetic mean of their
    categories' baselines; categories lacking a baseline are ignored.
    Returns 0 for uncited publications.
    """
    if publication.citations == 0:
        return 0.0
    values = [
        baselines[(publication.year, cat)]
        for cat in publication.subject_categories
        if (publication.year, cat) in baselines
    ]
    # A cited publication populates each of its own strata, so a baseline
    # must exist for every category.
    assert values, f"no baseline for cited publication {publication.pub_id}"
    return publication.citations / (sum(values) / len(values))


def service_years(dataset: Dataset, researcher_id: str, period: tuple[int, int] | None = None) -> int:
    """Distinct roster years inside the window, across all universities."""
    start, end = period or dataset.config.period
    code = dataset.researcher_code(researcher_id)
    sl = dataset.roster_slice(code)
    years = dataset.roster_year[sl]
    return int(np.count_nonzero((years >= start) & (years <= end)))


def compute_fss(
    dataset: Dataset,
    researcher_id: str,
    baselines: Baselines | None = None,
    config: AssessmentConfig | None = None,
) -> float:
    """Reference per-researcher productivity (the vectorized pipeline in
    :func:`build_scores` must agree with this)."""
    config = config or dataset.config
    if baselines is None:
        baselines = compute_baselines(dataset, config)
    t = service_years(dataset, researcher_id, config.period)
    if t < 1:
        raise ValueError(f"researcher {researcher_id} has no service years in the period")
    code = dataset.researcher_code(researcher_id)
    assign = assignments(dataset)
    scheme = config.scheme_for(dataset.sds_codes[assign.sds[code]])
    total = 0.0
    start, end = config.period
    for slot_idx in np.flatnonzero(dataset.auth_res == code):
        pub = dataset.publication(int(dataset.auth_pub[slot_idx]))
        if not (start <= pub.year <= end):
            continue
        vector, _ = credit.credit_for(pub, scheme)
        weight = vector.weights[int(dataset.auth_pos[slot_idx]) - 1]
        total += scaled_citation(pub, baselines) * weight
    return total / t


def salary_normalize(fss: float, rank: str, salary_weights: Mapping[str, float]) -> float:
    """Divide by the rank's salary weight, assistant rank pinned to 1.0.

    Rescaling every weight by one constant therefore never changes the
    result.
    """
    try:
        ref = salary_weights["assistant"]
        weight = salary_weights[rank]
    except KeyError as exc:
        raise ConfigError(f"missing salary weight for rank {exc.args[0]!r}") from exc
    return fss / (weight / ref)


def percentile_rank(values: Sequence[float]) -> list[int]:
    """Integer 0-100 percentiles, worst to best, for one comparison pool.

    Each value's position is the share of the pool ranked at or below it,
    with tied values all taking the best position of their block:
    ``m = n_below + n_tied - 1`` out of ``N - 1``. The 0-100 value is
    rounded to an integer with a 0.4 threshold (fractions >= 0.4 round
    up), computed in exact integer arithmetic.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if n < 2:
        raise ValueError("percentile ranking needs a pool of at least 2 values")
    if any(v != v or v in (float("inf"), float("-inf")) for v in vals):
        raise ValueError("percentile ranking requires finite values")
    ordered = sorted(vals)
    d = n - 1
    return [(1000 * (bisect_right(ordered, v) - 1) + 6 * d) // (10 * d) for v in vals]


def fss_ratio(value: float, pool_values: Sequence[float]) -> float | None:
    """Value over the mean of its comparison pool.

    A pool whose mean is zero means every member is zero: a zero value is
    at parity (ratio 0 treated as the defined result for fss 0); a
    positive value against an all-zero pool falls back to the
    smallest-positive substitution, or None when no positive value exists
    anywhere in the pool.
    """
    pool = [float(v) for v in pool_values]
    if not pool:
        raise ValueError("comparison pool is empty")
    mean = sum(pool) / len(pool)
    if mean > 0:
        return value / mean
    if value == 0:
        return 0.0
    positive = [v for v in pool if v > 0]
    if not positive:
        return None
    eps = min(positive)
    return (value + eps) / eps


@dataclass(frozen=True)
class ProductivityRecord:
    """One researcher's productivity and rank-scaled comparisons."""

    researcher_id: str
    sds_code: str
    uda_code: str
    rank: str
    t: int
    fss: float
    fss_salary_norm: float
    percentile: int | None
    fss_ratio: float | None


@dataclass(frozen=True)
class ScoreTable:
    """Vectorized per-researcher productivity for one dataset.

    Arrays are aligned with ``dataset.researchers``; researchers without
    an in-period roster year are not evaluable and carry ``evaluable ==
    False``.
    """

    dataset: Dataset
    evaluable: np.ndarray
    sds: np.ndarray
    uda: np.ndarray
    rank: np.ndarray
    t: np.ndarray
    fss: np.ndarray
    fss_norm: np.ndarray
    percentile: np.ndarray  # -1 encodes "pool too small"
    ratio: np.ndarray
    issues: tuple[DataQualityIssue, ...]

    def code(self, researcher_id: str) -> int:
        return self.dataset.researcher_code(researcher_id)

    def record(self, researcher_id: str) -> ProductivityRecord:
        i = self.code(researcher_id)
        if not self.evaluable[i]:
            raise ValueError(f"researcher {researcher_id} is not evaluable in the period")
        pct = int(self.percentile[i])
        return ProductivityRecord(
            researcher_id=researcher_id,
            sds_code=self.dataset.sds_codes[self.sds[i]],
            uda_code=self.dataset.uda_codes[self.uda[i]],
            rank=RANKS[self.rank[i]],
            t=int(self.t[i]),
            fss=float(self.fss[i]),
            fss_salary_norm=float(self.fss_norm[i]),
            percentile=pct if pct >= 0 else None,
            fss_ratio=float(self.ratio[i]),
        )

    def records(self) -> list[ProductivityRecord]:
        return [
            self.record(rid)
            for rid, ok in zip(self.dataset.researchers, self.evaluable)
            if ok
        ]


def build_scores(dataset: Dataset, config: AssessmentConfig | None = None) -> ScoreTable:
    """Compute productivity for every evaluable researcher in one pass."""
    config = config or dataset.config
    start, end = config.period
    issues: list[DataQualityIssue] = []
    assign = assignments(dataset)
    n_res = dataset.n_researchers
    n_pubs = dataset.n_publications

    # --- citation baselines and per-publication scaled citations ---
    pub_in_period = (dataset.pub_year >= start) & (dataset.pub_year <= end)
    cited = dataset.pub_citations > 0
    cat_counts = np.diff(dataset.pub_cat_offsets)
    pub_of_cat = np.repeat(np.arange(n_pubs, dtype=np.int64), cat_counts)
    n_cats = max(len(dataset.categories), 1)
    stratum = (dataset.pub_year[pub_of_cat].astype(np.int64) * n_cats
               + dataset.pub_cat_codes)
    if stratum.size:
        stratum_min = int(stratum.min())
        stratum -= stratum_min
        n_strata = int(stratum.max()) + 1
        contributing = (pub_in_period & cited)[pub_of_cat]
        sums = np.bincount(
            stratum[contributing],
            weights=dataset.pub_citations[pub_of_cat[contributing]].astype(np.float64),
            minlength=n_strata,
        )
        counts = np.bincount(stratum[contributing], minlength=n_strata)
        c_bar = np.divide(sums, counts, out=np.zeros(n_strata), where=counts > 0)

        # Mean of category baselines per publication (over its own strata).
        cat_base = c_bar[stratum]
        cat_has = counts[stratum] > 0
        base_sum = np.bincount(pub_of_cat[cat_has], weights=cat_base[cat_has], minlength=n_pubs)
        base_cnt = np.bincount(pub_of_cat[cat_has], minlength=n_pubs)
        scaled = np.zeros(n_pubs, dtype=np.float64)
        use = pub_in_period & cited
        assert np.all(base_cnt[use] > 0), "cited publication lacks a baseline stratum"
        scaled[use] = dataset.pub_citations[use] / (base_sum[use] / base_cnt[use])
    else:
        scaled = np.zeros(n_pubs, dtype=np.float64)

    # --- credit weights per author slot ---
    author_counts = np.diff(dataset.auth_offsets)
    equal_flat = (
        _kernels.equal_credit_weights(author_counts)
        if n_pubs
        else np.empty(0, dtype=np.float64)
    )

    scheme_positional = np.zeros(n_res, dtype=bool)
    if not config.force_equal_credit:
        for code_, name in enumerate(dataset.sds_codes):
            if config.scheme_for(name) == "positional":
                scheme_positional |= (assign.sds == code_)

    if n_pubs and scheme_positional.any():
        first_uni = dataset.auth_uni[dataset.auth_offsets[:-1]]
        last_uni = dataset.auth_uni[dataset.auth_offsets[1:] - 1]
        modes = np.where(
            (first_uni < 0) | (last_uni < 0),
            _kernels.MODE_EQUAL,
            np.where(first_uni == last_uni, _kernels.MODE_INTRA, _kernels.MODE_EXTRA),
        ).astype(np.uint8)
        single = author_counts == 1
        positional_flat = _kernels.positional_credit_weights(author_counts, modes)

        # Warn once per publication where the fallback actually bit someone.
        linked = dataset.auth_res >= 0
        uses_positional = np.zeros(n_pubs, dtype=bool)
        lin_idx = np.flatnonzero(linked & pub_in_period[dataset.auth_pub])
        pos_res = scheme_positional[dataset.auth_res[lin_idx]]
        uses_positional[dataset.auth_pub[lin_idx[pos_res]]] = True
        for p in np.flatnonzero((modes == _kernels.MODE_EQUAL) & ~single & uses_positional):
            issues.append(
                DataQualityIssue(
                    "warning",
                    f"pub {dataset.pub_ids[p]}",
                    "first or last author affiliation missing; positional credit fell back to equal split",
                )
            )
    else:
        positional_flat = equal_flat

    # --- accumulate weighted scaled citations per researcher ---
    linked = dataset.auth_res >= 0
    active = linked & pub_in_period[dataset.auth_pub]
    idx = np.flatnonzero(active)
    res_of_slot = dataset.auth_res[idx]
    w = np.where(scheme_positional[res_of_slot], positional_flat[idx], equal_flat[idx])
    contrib = scaled[dataset.auth_pub[idx]] * w
    sums = (
        _kernels.segment_sum(res_of_slot.astype(np.int64), contrib, n_res)
        if idx.size
        else np.zeros(n_res)
    )

    evaluable = assign.years_in_period > 0
    t = assign.years_in_period.astype(np.int64)
    fss = np.zeros(n_res, dtype=np.float64)
    fss[evaluable] = sums[evaluable] / t[evaluable]

    # --- salary normalization ---
    rank_weight = np.ones(len(RANKS), dtype=np.float64)
    needed = {RANKS[r] for r in np.unique(assign.rank[evaluable])} if evaluable.any() else set()
    for rank_name in sorted(needed):
        rank_weight[RANKS.index(rank_name)] = config.normalized_salary_weight(rank_name)
    fss_norm = np.zeros(n_res, dtype=np.float64)
    fss_norm[evaluable] = fss[evaluable] / rank_weight[assign.rank[evaluable]]

    # --- national (field, rank) pools: percentile and ratio ---
    percentile = np.full(n_res, -1, dtype=np.int64)
    ratio = np.full(n_res, np.nan, dtype=np.float64)
    if evaluable.any():
        pool_key = assign.sds.astype(np.int64) * len(RANKS) + assign.rank
        for key in np.unique(pool_key[evaluable]):
            members = np.flatnonzero(evaluable & (pool_key == key))
            pool = fss[members]
            mean = float(pool.mean())
            if mean > 0:
                ratio[members] = pool / mean
            else:
                ratio[members] = 0.0
            if members.size >= 2:
                percentile[members] = percentile_rank(pool.tolist())
    return ScoreTable(
        dataset=dataset,
        evaluable=evaluable,
        sds=assign.sds,
        uda=assign.uda,
        rank=assign.rank,
        t=t,
        fss=fss,
        fss_norm=fss_norm,
        percentile=percentile,
        ratio=ratio,
        issues=tuple(issues),
    )


def university_productivity(dataset: Dataset, scores: ScoreTable) -> dict[str, float]:
    """Mean productivity ratio over each university's in-period professors.

    A professor with roster years at several universities counts toward
    each of them, with the same system-level ratio.
    """
    start, end = dataset.config.period
    in_period = (dataset.roster_year >= start) & (dataset.roster_year <= end)
    pairs = np.unique(
        np.stack(
            [dataset.roster_uni[in_period], dataset.roster_res[in_period]], axis=1
        ),
        axis=0,
    ) if in_period.any() else np.empty((0, 2), dtype=np.int64)
    out: dict[str, float] = {}
    if pairs.size == 0:
        return out
    ratios = scores.ratio[pairs[:, 1]]
    sums = np.bincount(pairs[:, 0], weights=ratios, minlength=len(dataset.universities))
    counts = np.bincount(pairs[:, 0], minlength=len(dataset.universities))
    for u in np.flatnonzero(counts):
        out[dataset.universities[u]] = float(sums[u] / counts[u])
    return out
