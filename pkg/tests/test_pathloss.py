import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metascene.errors import SchemaError, UnknownMaterialError
from metascene.metadata import (
    LinkRecord,
    MaterialTable,
    PathLossParams,
    corrected_rssi,
    rssi_to_distance,
)

DEFAULTS = PathLossParams()


def test_reference_distance():
    # rssi equal to p0 maps to d0 exactly
    assert rssi_to_distance(-40.0, DEFAULTS) == pytest.approx(1.0)


def test_analytic_point():
    # 10^((-40 + 60) / 20) = 10
    assert rssi_to_distance(-60.0, DEFAULTS) == pytest.approx(10.0)


def test_clamped_to_d_max():
    # unclamped would be 10^4 m
    assert rssi_to_distance(-120.0, DEFAULTS) == 30.0


def test_clamped_to_d_min():
    assert rssi_to_distance(0.0, DEFAULTS) == DEFAULTS.d_min_m


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-140.0, max_value=0.0, allow_nan=False))
def test_monotone_non_increasing_and_bounded(rssi):
    d = rssi_to_distance(rssi, DEFAULTS)
    assert DEFAULTS.d_min_m <= d <= DEFAULTS.d_max_m
    assert rssi_to_distance(rssi - 1.0, DEFAULTS) >= d


def _link(rssi, walls=()):
    return LinkRecord(sensor_id="S", gateway_id="G", rssi_dbm=rssi, wall_materials=tuple(walls))


MATERIALS = MaterialTable(entries={"concrete": 12.0, "glass": 3.0})


def test_corrected_rssi_identity_without_walls():
    assert corrected_rssi(_link(-70.0), MATERIALS) == -70.0
    assert corrected_rssi(_link(-70.0), MaterialTable()) == -70.0


def test_corrected_rssi_single_wall():
    assert corrected_rssi(_link(-70.0, ["concrete"]), MATERIALS) == pytest.approx(-58.0)


def test_corrected_rssi_multiple_walls():
    assert corrected_rssi(_link(-70.0, ["concrete", "glass"]), MATERIALS) == pytest.approx(-55.0)


def test_unknown_material():
    with pytest.raises(UnknownMaterialError):
        corrected_rssi(_link(-70.0, ["adamantium"]), MATERIALS)


def test_params_validation():
    with pytest.raises(SchemaError):
        PathLossParams(d_min_m=5.0, d_max_m=1.0).validate()
    with pytest.raises(SchemaError):
        PathLossParams(exponent_n=0.0).validate()
