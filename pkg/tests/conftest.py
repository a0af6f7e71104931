import pytest

from locaray import SutModel, TestArray

# Printer example: layout(2) size(2) color(2) duplex(3).
PRINTER_MODEL = SutModel((2, 2, 2, 3))

# 10-row array that locates any single faulty pair of factor values.
PRINTER_LOCATING_ROWS = [
    [0, 0, 0, 0],
    [0, 0, 0, 2],
    [0, 0, 1, 1],
    [0, 1, 1, 0],
    [0, 1, 1, 2],
    [1, 0, 0, 0],
    [1, 0, 0, 1],
    [1, 0, 1, 2],
    [1, 1, 0, 0],
    [1, 1, 1, 1],
]

# 6-row array covering every pair of factor values but not locating.
PRINTER_COVERING_ROWS = [
    [0, 0, 0, 0],
    [0, 0, 1, 1],
    [0, 1, 1, 2],
    [1, 0, 0, 2],
    [1, 1, 0, 1],
    [1, 1, 1, 0],
]


@pytest.fixture
def printer_model():
    return PRINTER_MODEL


@pytest.fixture
def printer_locating():
    return TestArray(PRINTER_MODEL, PRINTER_LOCATING_ROWS)


@pytest.fixture
def printer_covering():
    return TestArray(PRINTER_MODEL, PRINTER_COVERING_ROWS)
