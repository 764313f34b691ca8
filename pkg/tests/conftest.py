import csv
from pathlib import Path

import pytest

from facultymetrics.model import AssessmentConfig, load_dataset


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_inputs(directory: Path, roster, pubs, auths):
    directory.mkdir(parents=True, exist_ok=True)
    return (
        write_csv(
            directory / "roster.csv",
            ["researcher_id", "year", "university_id", "sds_code", "uda_code", "rank"],
            roster,
        ),
        write_csv(
            directory / "publications.csv",
            ["pub_id", "year", "citations", "subject_categories"],
            pubs,
        ),
        write_csv(
            directory / "authorships.csv",
            ["pub_id", "position", "university_id", "researcher_id"],
            auths,
        ),
    )


def load_inputs(directory: Path, roster, pubs, auths, config=None):
    paths = write_inputs(directory, roster, pubs, auths)
    config = config or AssessmentConfig(period_start=2008, period_end=2012)
    return load_dataset(*paths, config)


@pytest.fixture
def default_config():
    return AssessmentConfig(period_start=2008, period_end=2012)
