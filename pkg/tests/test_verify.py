import pytest

from locaray import (
    Interaction,
    SutModel,
    TestArray,
    enumerate_interactions,
    locate_fault,
    rho,
    verify,
)

FAULTY_PAIR = Interaction(((1, 1), (2, 1)))  # (size=A5, color=No)


def test_ten_row_printer_array_is_locating(printer_locating):
    report = verify(printer_locating, 2)
    assert report.is_covering
    assert report.is_locating_exact1
    assert report.is_locating_1bar
    assert report.uncovered == []
    assert report.collisions == []
    assert report.collision_count == 0


def test_six_row_printer_array_covers_but_does_not_locate(printer_covering):
    report = verify(printer_covering, 2)
    assert report.is_covering
    assert not report.is_locating_exact1
    assert not report.is_locating_1bar
    assert report.uncovered == []
    # pinned by brute force: 24 interactions share covering rows, 36 pairs
    assert report.collision_count == 36
    assert len(report.collisions) == 36
    # the known example: (size=A4, duplex=OneSide) ~ (color=Yes, duplex=OneSide) on row 1
    known = (Interaction(((1, 0), (3, 0))), Interaction(((2, 0), (3, 0))), frozenset({1}))
    assert known in report.collisions


def test_collision_pairs_are_canonically_ordered(printer_covering):
    for a, b, rows in verify(printer_covering, 2).collisions:
        assert a < b
        assert rho(printer_covering, a) == rho(printer_covering, b) == rows


def test_empty_array_fails_both_conditions():
    report = verify(TestArray(SutModel((2, 2, 2)), []), 2)
    assert not report.is_covering
    assert not report.is_locating_1bar
    assert len(report.uncovered) == 12
    # every pair of (equally) uncovered interactions counts as a collision
    assert report.collision_count == 12 * 11 // 2
    assert not report.is_locating_exact1


def test_uncovered_pairs_count_as_collisions_too():
    # one row over (2,2): three of four strength-1 interactions differ, but
    # the two uncovered value assignments share an empty row set
    arr = TestArray(SutModel((2, 2)), [[0, 0]])
    report = verify(arr, 1)
    assert [i.pairs for i in report.uncovered] == [((0, 1),), ((1, 1),)]
    assert report.collision_count >= 1
    empties = [(a, b) for a, b, rows in report.collisions if not rows]
    assert (Interaction(((0, 1),)), Interaction(((1, 1),))) in empties


def test_report_invariants_on_samples(printer_locating, printer_covering):
    samples = [
        (printer_locating, 2),
        (printer_covering, 2),
        (TestArray(SutModel((2, 2, 2)), []), 2),
        (TestArray(SutModel((2, 2)), [[0, 0], [0, 0]]), 1),
    ]
    for arr, t in samples:
        report = verify(arr, t)
        assert report.is_locating_1bar == (not report.uncovered and report.collision_count == 0)
        if report.is_locating_1bar:
            assert report.is_covering


def test_strength_out_of_range(printer_locating):
    with pytest.raises(ValueError):
        verify(printer_locating, 0)
    with pytest.raises(ValueError):
        verify(printer_locating, 5)


def test_collision_list_truncation(printer_covering):
    report = verify(printer_covering, 2, max_collision_pairs=5)
    assert len(report.collisions) == 5
    assert report.collision_count == 36
    assert report.collisions_truncated


# --- fault localization -------------------------------------------------------


def test_locate_fault_finds_the_faulty_pair(printer_locating):
    assert locate_fault(printer_locating, {4, 5, 10}, 2) == [FAULTY_PAIR]


def test_locate_fault_empty_set_means_no_fault(printer_locating):
    assert locate_fault(printer_locating, set(), 2) == []


def test_locate_fault_unmatched_set(printer_locating):
    # no strength-2 interaction of the printer array covers exactly row 1
    assert locate_fault(printer_locating, {1}, 2) == []


def test_locate_fault_rejects_bad_row_index(printer_locating):
    with pytest.raises(ValueError):
        locate_fault(printer_locating, {0}, 2)
    with pytest.raises(ValueError):
        locate_fault(printer_locating, {11}, 2)


def test_locate_fault_inverts_rho_on_locating_array(printer_locating):
    # feeding back the covering rows of any interaction singles it out
    for interaction in enumerate_interactions(printer_locating.model, 2):
        failing = rho(printer_locating, interaction)
        assert locate_fault(printer_locating, failing, 2) == [interaction]


def test_locate_fault_may_be_ambiguous_on_non_locating_array(printer_covering):
    # on the covering-only array a failing set can match several interactions
    ambiguous = locate_fault(printer_covering, {3}, 2)
    assert len(ambiguous) >= 2
