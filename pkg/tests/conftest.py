from pathlib import Path

import pytest

from medgraph.standards import Indicator, Sex, StandardDataset, XUnit, parse_standard_table

DATA_DIR = Path(__file__).parent / "data"


def load_fixture(name: str, **meta) -> StandardDataset:
    return parse_standard_table((DATA_DIR / name).read_text(), **meta)


@pytest.fixture(scope="session")
def girls() -> StandardDataset:
    return load_fixture(
        "wfl-girls.csv",
        id="wfl-girls",
        indicator=Indicator.WEIGHT_FOR_HEIGHT,
        sex=Sex.FEMALE,
        x_unit=XUnit.LENGTH_CM,
        x_label="Length (cm)",
        y_label="Weight (kg)",
    )


@pytest.fixture(scope="session")
def boys() -> StandardDataset:
    return load_fixture(
        "wfl-boys.csv",
        id="wfl-boys",
        indicator=Indicator.WEIGHT_FOR_HEIGHT,
        sex=Sex.MALE,
        x_unit=XUnit.LENGTH_CM,
        x_label="Length (cm)",
        y_label="Weight (kg)",
    )
