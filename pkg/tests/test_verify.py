import pytest

from walklab import verify


def test_default_battery_passes():
    results = verify.run_battery()
    failed = [r.name for r in results if not r.passed]
    assert failed == []
    assert {r.group for r in results} == set(verify.DEFAULT_GROUPS)


def test_only_filters_groups():
    results = verify.run_battery(only=["ballot"])
    assert {r.group for r in results} == {"ballot"}
    assert [r.name for r in results] == verify.check_names("ballot")


@pytest.mark.parametrize("name", ["reflection", "u2n", "linear-system", "u3d-sequence"])
def test_injected_fault_is_named(name):
    results = verify.run_battery(inject_fault=name)
    assert [r.name for r in results if not r.passed] == [name]


def test_unknown_group_rejected():
    with pytest.raises(ValueError):
        verify.run_battery(only=["astrology"])
