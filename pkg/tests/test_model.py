"""Core domain type validation and the tabular render round trip."""

from datetime import datetime

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from traphub.errors import (
    MalformedTimestamp,
    MissingField,
    OutOfRange,
    TraphubError,
)
from traphub.model import (
    BBox,
    GeoPoint,
    TrapReading,
    render_reading,
    validate_reading,
)

TABLE1_ROW = {
    "Timestamp": "01-06-23 8:00",
    "Counts": "8",
    "Temperature": "24.61",
    "Humidity": "66.2",
    "Lat": "39.30149",
    "Long": "22.33027",
    "Name": "100",
}


def test_validate_table1_first_row():
    r = validate_reading(TABLE1_ROW)
    assert r.timestamp == datetime(2023, 6, 1, 8, 0)
    assert r.counts == 8
    assert r.temperature == 24.61
    assert r.humidity == 66.2
    assert r.lat == 39.30149
    assert r.long == 22.33027
    assert r.device == "100"


def test_zero_counts_is_legal():
    r = validate_reading({**TABLE1_ROW, "Counts": "0"})
    assert r.counts == 0


@pytest.mark.parametrize(
    "field,value,error",
    [
        ("Humidity", "130", OutOfRange),
        ("Humidity", "-1", OutOfRange),
        ("Counts", "-3", OutOfRange),
        ("Counts", "2.5", OutOfRange),
        ("Temperature", "99", OutOfRange),
        ("Temperature", "-60", OutOfRange),
        ("Lat", "95", OutOfRange),
        ("Long", "190", OutOfRange),
        ("Temperature", "abc", OutOfRange),
        ("Humidity", "inf", OutOfRange),
        ("Timestamp", "13-13-23 8:00", MalformedTimestamp),
        ("Timestamp", "yesterday", MalformedTimestamp),
    ],
)
def test_bad_values_name_the_field(field, value, error):
    with pytest.raises(error) as info:
        validate_reading({**TABLE1_ROW, field: value})
    assert info.value.field == field


@pytest.mark.parametrize("field", list(TABLE1_ROW))
def test_missing_field_named(field):
    raw = dict(TABLE1_ROW)
    del raw[field]
    with pytest.raises(MissingField) as info:
        validate_reading(raw)
    assert info.value.field == field


def test_reading_rejects_second_precision():
    with pytest.raises(MalformedTimestamp):
        TrapReading(datetime(2023, 6, 1, 8, 0, 30), 1, 25.0, 60.0, 39.3, 22.3, "100")


def test_geopoint_ranges():
    GeoPoint(90.0, 180.0)
    GeoPoint(-90.0, -180.0)
    with pytest.raises(OutOfRange):
        GeoPoint(90.1, 0.0)
    with pytest.raises(OutOfRange):
        GeoPoint(0.0, -180.5)


def test_bbox_invariants():
    box = BBox(39.0, 40.0, 22.0, 23.0)
    assert box.contains(39.5, 22.5)
    assert not box.contains(38.9, 22.5)
    with pytest.raises(OutOfRange):
        BBox(40.0, 39.0, 22.0, 23.0)


def test_render_reproduces_canonical_table1_values():
    rendered = render_reading(validate_reading(TABLE1_ROW))
    assert rendered == TABLE1_ROW


valid_readings = st.builds(
    TrapReading,
    timestamp=st.datetimes(
        min_value=datetime(2000, 1, 1), max_value=datetime(2099, 12, 31, 23, 59)
    ).map(lambda t: t.replace(second=0, microsecond=0)),
    counts=st.integers(min_value=0, max_value=100_000),
    temperature=st.floats(min_value=-50, max_value=60, allow_nan=False),
    humidity=st.floats(min_value=0, max_value=100, allow_nan=False),
    lat=st.floats(min_value=-90, max_value=90, allow_nan=False),
    long=st.floats(min_value=-180, max_value=180, allow_nan=False),
    device=st.text(
        alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd")), min_size=1, max_size=8
    ),
)


@given(valid_readings)
@settings(max_examples=200)
def test_render_validate_round_trip(reading):
    assert validate_reading(render_reading(reading)) == reading


@given(
    st.dictionaries(
        st.sampled_from(list(TABLE1_ROW)), st.text(max_size=12), max_size=7
    )
)
@settings(max_examples=200)
def test_validation_is_total(raw):
    try:
        validate_reading({**TABLE1_ROW, **raw})
    except TraphubError as exc:
        assert exc.field is not None
