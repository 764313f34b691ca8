"""Independent brute-force reference for the whole computation.

Implements every formula literally with dictionaries and loops, parsing
the CSV files on its own. Shares no code with the package under test;
used to cross-check productivity values and all twelve effectiveness
indicators on fixtures.
"""

import csv
from collections import defaultdict
from fractions import Fraction


def _read(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def oracle_percentile(values):
    """floor(100*m/(N-1) + 0.6) with m = pool members at or below, minus
    one; exact rational arithmetic."""
    n = len(values)
    out = []
    for v in values:
        m = sum(1 for w in values if w <= v) - 1
        x = Fraction(100 * m, n - 1) + Fraction(3, 5)
        out.append(x.numerator // x.denominator)
    return out


def oracle_midranks(values):
    out = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        out.append(less + (equal + 1) / 2)
    return out


def oracle_spearman(x, y):
    pairs = [
        (a, b)
        for a, b in zip(x, y)
        if a is not None and b is not None and a == a and b == b
    ]
    if len(pairs) < 3:
        return None
    rx = oracle_midranks([a for a, _ in pairs])
    ry = oracle_midranks([b for _, b in pairs])
    n = len(pairs)
    mx = sum(rx) / n
    my = sum(ry) / n
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    if sxx == 0 or syy == 0:
        return None
    return sxy / (sxx * syy) ** 0.5


def _position_weights(affiliations):
    """Positional split from the author lists' first/last affiliation."""
    n = len(affiliations)
    if n == 1:
        return [1.0]
    first, last = affiliations[0], affiliations[-1]
    if first is None or last is None:
        return [1.0 / n] * n
    w = [0.0] * n
    if first == last:
        w[0] += 0.40
        w[-1] += 0.40
        for i in range(1, n - 1):
            w[i] += 0.20 / (n - 2)
    else:
        w[0] += 0.30
        w[-1] += 0.30
        w[1] += 0.15
        w[-2] += 0.15
        for i in range(2, n - 2):
            w[i] += 0.10 / (n - 4)
    s = sum(w)
    return [v / s for v in w]


class OracleResult:
    pass


def compute(roster_path, pubs_path, auths_path, config):
    """Full literal recomputation; returns an object with plain dicts."""
    start = config["period_start"]
    end = config["period_end"]
    min_service = config.get("min_service_years", 3)
    min_group = config.get("min_group_size", 4)
    share = config.get("bibliometric_share", 0.5)
    weights = config.get("salary_weights", {"assistant": 1.0})
    schemes = config.get("credit_scheme", {})

    careers = defaultdict(dict)
    for row in _read(roster_path):
        careers[row["researcher_id"]][int(row["year"])] = (
            row["university_id"], row["sds_code"], row["uda_code"], row["rank"],
        )

    pubs = {}
    for row in _read(pubs_path):
        pubs[row["pub_id"]] = {
            "year": int(row["year"]),
            "citations": int(row["citations"]),
            "cats": [c for c in row["subject_categories"].split(";") if c],
            "authors": [],
        }
    for row in _read(auths_path):
        pubs[row["pub_id"]]["authors"].append(
            (int(row["position"]), row["university_id"] or None, row["researcher_id"] or None)
        )
    for pub in pubs.values():
        pub["authors"].sort()

    def in_period_years(rid):
        return sorted(y for y in careers[rid] if start <= y <= end)

    def assigned(rid):
        years = in_period_years(rid)
        if not years:
            return None
        uni, sds, uda, rank = careers[rid][years[-1]]
        return sds, uda, rank

    # --- bibliometric fields, professor-level restriction ---
    publishers = set()
    for pub in pubs.values():
        if start <= pub["year"] <= end:
            for _, _, rid in pub["authors"]:
                if rid:
                    publishers.add(rid)
    members = defaultdict(set)
    for rid in careers:
        info = assigned(rid)
        if info:
            members[info[0]].add(rid)
    bibliometric = {
        sds
        for sds, group in members.items()
        if sum(1 for r in group if r in publishers) / len(group) >= share
    }
    kept = {rid for rid in careers if (a := assigned(rid)) and a[0] in bibliometric}

    kept_pubs = {
        pid: pub
        for pid, pub in pubs.items()
        if any(rid in kept for _, _, rid in pub["authors"])
    }

    # --- baselines over the restricted corpus ---
    strata = defaultdict(list)
    for pub in kept_pubs.values():
        if start <= pub["year"] <= end and pub["citations"] > 0:
            for cat in pub["cats"]:
                strata[(pub["year"], cat)].append(pub["citations"])
    baselines = {key: sum(v) / len(v) for key, v in strata.items()}

    def scaled(pub):
        if pub["citations"] == 0:
            return 0.0
        vals = [baselines[(pub["year"], c)] for c in pub["cats"] if (pub["year"], c) in baselines]
        return pub["citations"] / (sum(vals) / len(vals))

    # --- productivity ---
    fss = {}
    t_of = {}
    for rid in sorted(kept):
        t = len(in_period_years(rid))
        t_of[rid] = t
        total = 0.0
        scheme = schemes.get(assigned(rid)[0], "alphabetical")
        if config.get("force_equal_credit"):
            scheme = "alphabetical"
        for pub in kept_pubs.values():
            if not (start <= pub["year"] <= end):
                continue
            for pos, _, author in pub["authors"]:
                if author != rid:
                    continue
                n = len(pub["authors"])
                if scheme == "positional":
                    w = _position_weights([u for _, u, _ in pub["authors"]])[pos - 1]
                else:
                    w = (1.0 / n) / (n * (1.0 / n))
                total += scaled(pub) * w
        fss[rid] = total / t

    def norm(rid):
        rank = assigned(rid)[2]
        return fss[rid] / (weights[rank] / weights["assistant"])

    # --- events ---
    roster_min = min(y for rid in kept for y in careers[rid]) if kept else None
    events = []
    for rid in sorted(kept):
        years = sorted(careers[rid])
        unis = [careers[rid][y][0] for y in years]
        ranks = [careers[rid][y][3] for y in years]
        if years[0] > roster_min:
            events.append(("new_entrant", rid, years[0], None, unis[0], ranks[0]))
        for i in range(1, len(years)):
            missing = years[i] - years[i - 1] - 1
            if missing == 0:
                if unis[i] != unis[i - 1]:
                    events.append(("transfer", rid, years[i], unis[i - 1], unis[i], ranks[i]))
            elif missing == 1 and unis[i] == unis[i - 1]:
                pass
            elif missing == 1:
                events.append(("transfer", rid, years[i], unis[i - 1], unis[i], ranks[i]))
            else:
                events.append(("system_exit", rid, years[i - 1] + 1, unis[i - 1], None, ranks[i - 1]))
                events.append(("new_entrant", rid, years[i], None, unis[i], ranks[i]))
        if years[-1] < end:
            events.append(("system_exit", rid, years[-1] + 1, unis[-1], None, ranks[-1]))

    # --- cohorts ---
    incumbents = defaultdict(set)
    for rid in kept:
        if start in careers[rid]:
            incumbents[careers[rid][start][0]].add(rid)
    recruits = defaultdict(dict)  # uni -> rid -> event rank
    leavers = defaultdict(dict)
    for kind, rid, year, origin, dest, rank in events:
        if not (start <= year <= end):
            continue
        if kind in ("new_entrant", "transfer"):
            service = len([y for y in in_period_years(rid) if y >= year])
            if service >= min_service and rid not in incumbents[dest] and rid not in recruits[dest]:
                recruits[dest][rid] = rank
        if kind == "transfer" and rid not in leavers[origin]:
            leavers[origin][rid] = rank

    universities = sorted(set(incumbents) | set(recruits) | set(leavers))

    # --- comparison pools ---
    internal = defaultdict(list)  # (uni, sds) -> [(rid, norm)]
    for uni in universities:
        for rid in incumbents[uni]:
            internal[(uni, assigned(rid)[0])].append((rid, norm(rid)))
    external = defaultdict(list)  # (sds, rank) -> [fss]
    for rid in kept:
        sds, _, rank = assigned(rid)
        external[(sds, rank)].append(fss[rid])

    def pool_stats(values):
        mean = sum(values) / len(values)
        positive = [v for v in values if v > 0]
        return mean, (min(positive) if positive else None)

    def ratio(num, den, eps):
        if den > 0:
            return num / den
        if eps is None:
            return None
        return (num + eps) / eps

    reports = {}
    pooled = defaultdict(list)
    terms_by_uni = {}
    for uni in universities:
        terms = defaultdict(list)
        terms_by_uni[uni] = terms
        for rid, rank_event in sorted(recruits[uni].items()):
            sds = assigned(rid)[0]
            pool = [v for _, v in internal[(uni, sds)]]
            if pool:
                ibar, eps = pool_stats(pool)
                r = ratio(norm(rid), ibar, eps)
                if r is not None:
                    terms["r11"].append(r)
                terms["r12"].append(1.0 if norm(rid) > ibar else 0.0)
            ext = external.get((sds, rank_event))
            if ext:
                ebar, eps = pool_stats(ext)
                r = ratio(fss[rid], ebar, eps)
                if r is not None:
                    terms["r21"].append(r)
                terms["r22"].append(1.0 if fss[rid] > ebar else 0.0)
        for rid, rank_event in sorted(leavers[uni].items()):
            sds = assigned(rid)[0]
            pool = [v for other, v in internal[(uni, sds)] if other != rid]
            if pool:
                ibar, eps = pool_stats(pool)
                r = ratio(ibar, norm(rid), eps)
                if r is not None:
                    terms["t11"].append(r)
                terms["t12"].append(1.0 if norm(rid) < ibar else 0.0)
            ext = external.get((sds, rank_event))
            if ext:
                ebar, eps = pool_stats(ext)
                r = ratio(ebar, fss[rid], eps)
                if r is not None:
                    terms["t21"].append(r)
                terms["t22"].append(1.0 if fss[rid] < ebar else 0.0)

        n_r, n_l = len(recruits[uni]), len(leavers[uni])
        report = {
            "N": n_r,
            "P": n_l,
            "eligible": (
                n_r >= min_group and n_l >= min_group and len(incumbents[uni]) >= min_group
            ),
        }
        for key in ("r11", "r12", "r21", "r22", "t11", "t12", "t21", "t22"):
            report[key] = sum(terms[key]) / len(terms[key]) if terms[key] else None
            pooled[key].extend(terms[key])
        for mk, rk, tk in (
            ("m11", "r11", "t11"), ("m12", "r12", "t12"),
            ("m21", "r21", "t21"), ("m22", "r22", "t22"),
        ):
            rv, tv = report[rk], report[tk]
            if rv is None and tv is None:
                report[mk] = None
            elif rv is None:
                report[mk] = tv
            elif tv is None:
                report[mk] = rv
            else:
                report[mk] = (n_r * rv + n_l * tv) / (n_r + n_l)
        reports[uni] = report

    total = {
        "N": sum(len(recruits[u]) for u in universities),
        "P": sum(len(leavers[u]) for u in universities),
    }
    for key, values in pooled.items():
        total[key] = sum(values) / len(values) if values else None
    for mk, rk, tk in (
        ("m11", "r11", "t11"), ("m12", "r12", "t12"),
        ("m21", "r21", "t21"), ("m22", "r22", "t22"),
    ):
        rv, tv = total.get(rk), total.get(tk)
        if rv is None and tv is None:
            total[mk] = None
        elif rv is None:
            total[mk] = tv
        elif tv is None:
            total[mk] = rv
        else:
            total[mk] = (total["N"] * rv + total["P"] * tv) / (total["N"] + total["P"])

    productivity = {}
    for uni in universities:
        profs = {
            rid for rid in kept
            if any(careers[rid][y][0] == uni for y in in_period_years(rid))
        }
        if profs:
            ratios = []
            for rid in profs:
                sds, _, rank = assigned(rid)
                mean = sum(external[(sds, rank)]) / len(external[(sds, rank)])
                ratios.append(fss[rid] / mean if mean > 0 else 0.0)
            productivity[uni] = sum(ratios) / len(ratios)

    result = OracleResult()
    result.terms_by_uni = {u: dict(t) for u, t in terms_by_uni.items()}
    result.bibliometric = bibliometric
    result.kept = kept
    result.fss = fss
    result.t = t_of
    result.norm = {rid: norm(rid) for rid in kept}
    result.incumbents = dict(incumbents)
    result.recruits = {u: set(recruits[u]) for u in universities}
    result.leavers = {u: set(leavers[u]) for u in universities}
    result.reports = reports
    result.total = total
    result.productivity = productivity
    return result
