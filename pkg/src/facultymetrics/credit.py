"""Fractional co-authorship credit.

Two schemes are supported. Fields whose authors list alphabetically
split credit equally (1/n). Fields where byline order signals the
contribution (life sciences practice) use a positional split that
depends on whether the first and last author share a university:

* shared (intra-mural): 40% to the first author, 40% to the last, the
  remaining 20% divided among the middle authors;
* not shared (extra-mural): 30% to the first and last authors, 15% to
  the second and second-to-last, the remaining 10% divided among the
  rest.

For short author lists the named roles can coincide or a residual share
can have no recipients; shares landing on one author are summed and the
vector is renormalized so the weights always total 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import AuthorSlot, DataQualityIssue, Publication


@dataclass(frozen=True)
class CreditVector:
    """Per-author fractions for one publication; weights sum to 1."""

    pub_id: str
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise ValueError("credit vector must have at least one weight")
        total = sum(self.weights)
        if abs(total - 1.0) > 1e-12 or min(self.weights) < 0 or max(self.weights) > 1:
            raise ValueError(f"invalid credit vector for {self.pub_id}: sum={total}")


def equal_fractions(n_authors: int, pub_id: str = "") -> CreditVector:
    """Equal 1/n split used by alphabetically-ordered fields."""
    if n_authors < 1:
        raise ValueError("a publication must have at least one author")
    w = _kernels.equal_credit_weights(np.array([n_authors], dtype=np.int64))
    return CreditVector(pub_id, tuple(w))


def positional_mode(authors: tuple[AuthorSlot, ...]) -> int:
    """Pick the positional split for an author list.

    Returns a kernel mode: intra-mural when the first and last author
    share a university, extra-mural when both affiliations are known and
    differ, equal-split fallback when either affiliation is missing.
    Single-author lists are the trivial equal case.
    """
    if len(authors) == 1:
        return _kernels.MODE_EQUAL
    first, last = authors[0], authors[-1]
    if first.university_id is None or last.university_id is None:
        return _kernels.MODE_EQUAL
    if first.university_id == last.university_id:
        return _kernels.MODE_INTRA
    return _kernels.MODE_EXTRA


def positional_fractions(
    authors: tuple[AuthorSlot, ...], pub_id: str = ""
) -> tuple[CreditVector, DataQualityIssue | None]:
    """Position-weighted split; falls back to 1/n when the intra/extra
    test cannot be decided (missing affiliation on first or last author)."""
    n = len(authors)
    if n < 1:
        raise ValueError("a publication must have at least one author")
    mode = positional_mode(authors)
    issue = None
    if mode == _kernels.MODE_EQUAL and n > 1:
        issue = DataQualityIssue(
            "warning",
            f"pub {pub_id}" if pub_id else "publication",
            "first or last author affiliation missing; positional credit fell back to equal split",
        )
    w = _kernels.positional_credit_weights(
        np.array([n], dtype=np.int64), np.array([mode], dtype=np.uint8)
    )
    return CreditVector(pub_id, tuple(w)), issue


def credit_for(
    publication: Publication, scheme: str
) -> tuple[CreditVector, DataQualityIssue | None]:
    """Dispatch on the field's scheme ('alphabetical' or 'positional')."""
    if scheme == "alphabetical":
        return equal_fractions(len(publication.authors), publication.pub_id), None
    if scheme == "positional":
        return positional_fractions(publication.authors, publication.pub_id)
    raise ValueError(f"unknown credit scheme {scheme!r}")
