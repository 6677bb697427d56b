from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parent.parent / "src" / "chowdr" / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def lib():
    from chowdr.geometry.library import library

    return library()
