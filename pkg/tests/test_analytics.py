"""Tabular analytics: examples, edge cases, and brute-force oracle equivalence."""

import random
from collections import defaultdict
from datetime import date, datetime, timedelta

import pytest

from helpers import hourly_series, mk
from traphub.errors import (
    EmptyInput,
    InsufficientData,
    NoCommonDays,
    NoQualifyingWeeks,
)
from traphub.analytics import (
    Bucket,
    Granularity,
    aggregate_counts,
    binned_response,
    circadian_matrix,
    correlation_matrix,
    extremes,
    hourly_outliers,
    hourly_profile,
    region_weekly_stats,
    similarity_report,
    temp_distribution,
    top_n_daily_mean,
)
from traphub.model import BBox, Metric

BOX = BBox(30.0, 50.0, 10.0, 30.0)


class TestExtremes:
    def test_single_reading_is_both(self):
        report = extremes([mk("2023-06-01T08:00", 5)], Granularity.HOUR)
        assert report.highest.total == report.lowest.total == 5
        assert report.highest.device == "100"

    def test_daily_sums(self):
        # A: 30 in one day (15+15), B: 12 in one day
        rows = [mk("2023-06-01T08:00", 15, "A"), mk("2023-06-01T09:00", 15, "A")]
        rows += [mk("2023-06-01T08:00", 12, "B", lat=40.0)]
        report = extremes(rows, Granularity.DAY)
        assert report.highest.device == "A" and report.highest.total == 30
        assert report.lowest.device == "B" and report.lowest.total == 12
        assert report.lowest.position.lat == 40.0

    def test_tie_earlier_day_wins(self):
        rows = hourly_series("A", "2023-06-05", [30], hour=8)
        rows += hourly_series("A", "2023-06-01", [30], hour=9)
        report = extremes(rows, Granularity.DAY)
        assert report.highest.period_start == datetime(2023, 6, 1)

    def test_tie_period_then_smaller_device(self):
        rows = [mk("2023-06-01T08:00", 30, "B"), mk("2023-06-01T08:00", 30, "A")]
        report = extremes(rows, Granularity.HOUR)
        assert report.highest.device == "A"
        # earlier period beats device id
        rows = [mk("2023-06-01T08:00", 30, "B"), mk("2023-06-01T09:00", 30, "A")]
        assert extremes(rows, Granularity.HOUR).highest.device == "B"

    def test_weekly_granularity(self):
        # Mon 2023-06-05 and Sun 2023-06-11 share an ISO week
        rows = [mk("2023-06-05T08:00", 10, "A"), mk("2023-06-11T08:00", 15, "A")]
        rows += [mk("2023-06-12T08:00", 7, "A")]  # next ISO week
        report = extremes(rows, Granularity.WEEK)
        assert report.highest.total == 25
        assert report.highest.period_start == datetime(2023, 6, 5)
        assert report.lowest.total == 7

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            extremes([], Granularity.DAY)


class TestTempDistribution:
    def test_five_numbers(self):
        rows = [mk(f"2023-06-01T0{h}:00", 0, temperature=t) for h, t in enumerate([1, 2, 3, 4, 5])]
        summary = temp_distribution(rows)["100"]
        assert summary == {"min": 1, "q1": 2, "median": 3, "q3": 4, "max": 5}

    def test_interpolated(self):
        rows = [mk(f"2023-06-01T0{h}:00", 0, temperature=t) for h, t in enumerate([10, 20, 30, 40])]
        summary = temp_distribution(rows)["100"]
        assert summary["q1"] == 17.5 and summary["median"] == 25.0 and summary["q3"] == 32.5

    def test_constant(self):
        rows = [mk(f"2023-06-01T0{h}:00", 0, temperature=9.5) for h in range(3)]
        assert set(temp_distribution(rows)["100"].values()) == {9.5}


class TestAggregate:
    def test_24_hourly_rows_one_daily_bucket(self):
        rows = hourly_series("A", "2023-06-01T00:00", [1] * 24)
        series = aggregate_counts(rows, Bucket.DAILY)["A"]
        assert series == [(datetime(2023, 6, 1), 24)]

    def test_iso_week_bucket(self):
        rows = [mk("2023-06-05T08:00", 2, "A"), mk("2023-06-11T23:00", 3, "A")]
        series = aggregate_counts(rows, Bucket.WEEKLY)["A"]
        assert series == [(datetime(2023, 6, 5), 5)]

    def test_zero_fill_between_buckets(self):
        rows = [mk("2023-06-01T08:00", 2, "A"), mk("2023-06-04T08:00", 3, "A")]
        series = aggregate_counts(rows, Bucket.DAILY)["A"]
        assert [v for _, v in series] == [2, 0, 0, 3]

    def test_empty_range_emits_zeros(self):
        rows = [mk("2023-06-10T08:00", 2, "A")]
        series = aggregate_counts(
            rows, Bucket.DAILY, start=datetime(2023, 6, 1), end=datetime(2023, 6, 4)
        )["A"]
        assert series == [
            (datetime(2023, 6, 1), 0),
            (datetime(2023, 6, 2), 0),
            (datetime(2023, 6, 3), 0),
        ]

    def test_hourly_buckets(self):
        rows = [mk("2023-06-01T08:00", 2, "A"), mk("2023-06-01T10:00", 3, "A")]
        series = aggregate_counts(rows, Bucket.HOURLY)["A"]
        assert [v for _, v in series] == [2, 0, 3]


class TestTopN:
    def test_ranking(self):
        rows = hourly_series("A", "2023-06-01", [10, 10, 10], hour=8)
        rows += hourly_series("B", "2023-06-01", [5, 5], hour=8)
        assert top_n_daily_mean(rows, 10) == [("A", 10.0), ("B", 5.0)]

    def test_n_truncates(self):
        rows = hourly_series("A", "2023-06-01", [10], hour=8)
        rows += hourly_series("B", "2023-06-01", [5], hour=8)
        assert len(top_n_daily_mean(rows, 1)) == 1

    def test_equal_means_id_order(self):
        rows = hourly_series("B", "2023-06-01", [5], hour=8)
        rows += hourly_series("A", "2023-06-01", [5], hour=9)
        assert [d for d, _ in top_n_daily_mean(rows, 5)] == ["A", "B"]

    def test_mean_over_days_with_data_only(self):
        rows = [mk("2023-06-01T08:00", 10, "A"), mk("2023-06-05T08:00", 20, "A")]
        assert top_n_daily_mean(rows, 1) == [("A", 15.0)]


class TestCircadian:
    def test_single_cell(self):
        matrix = circadian_matrix([mk("2023-06-03T05:00", 7)], Metric.COUNTS)
        assert matrix.cols == (date(2023, 6, 3),)
        assert matrix.cells[5][0] == 7
        assert sum(v is not None for row in matrix.cells for v in row) == 1

    def test_counts_sum_temperature_mean(self):
        rows = [
            mk("2023-06-03T05:00", 3, temperature=20.0),
            mk("2023-06-03T05:00", 4, "101", temperature=30.0),
        ]
        counts = circadian_matrix(rows, Metric.COUNTS)
        assert counts.cells[5][0] == 7
        temp = circadian_matrix(rows, Metric.TEMPERATURE)
        assert temp.cells[5][0] == 25.0

    def test_scale_hints(self):
        rows = [mk("2023-06-03T05:00", 3)]
        assert circadian_matrix(rows, Metric.HUMIDITY).scale_hint == (0.0, 100.0)
        assert circadian_matrix(rows, Metric.TEMPERATURE).scale_hint == (0.0, 60.0)
        assert circadian_matrix(rows, Metric.COUNTS).scale_hint == (3.0, 3.0)

    def test_cell_sum_equals_total_counts(self):
        rng = random.Random(5)
        rows = [
            mk(datetime(2023, 6, 1) + timedelta(hours=rng.randrange(96)), rng.randrange(9),
               str(100 + rng.randrange(3)))
            for _ in range(120)
        ]
        matrix = circadian_matrix(rows, Metric.COUNTS)
        total = sum(v for row in matrix.cells for v in row if v is not None)
        assert total == sum(r.counts for r in rows)

    def test_continuous_day_axis(self):
        rows = [mk("2023-06-01T05:00", 1), mk("2023-06-04T05:00", 1)]
        matrix = circadian_matrix(rows, Metric.COUNTS)
        assert len(matrix.cols) == 4  # gap days present as all-null columns
        assert all(matrix.cells[h][1] is None for h in range(24))


class TestHourlyProfile:
    def test_single_hour(self):
        profile = hourly_profile([mk("2023-06-01T07:00", 4, temperature=21.0, humidity=70.0)])
        assert profile.n[7] == 1 and profile.mean_counts[7] == 4.0
        assert profile.mean_temperature[7] == 21.0
        assert sum(profile.n) == 1
        assert profile.mean_counts[8] is None

    def test_uniform_is_flat(self):
        rows = hourly_series("A", "2023-06-01T00:00", [2] * 48)
        profile = hourly_profile(rows)
        assert set(profile.mean_counts) == {2.0}
        assert set(profile.n) == {2}


class TestRegionWeekly:
    def test_qualifying_week_stats(self):
        rows = [
            mk("2023-06-05T08:00", 100, temperature=20.0, humidity=50.0),
            mk("2023-06-06T08:00", 51, temperature=30.0, humidity=70.0),
        ]
        stats = region_weekly_stats(rows, BOX, min_weekly=100)
        assert stats["temperature"]["mean"] == 25.0
        assert stats["temperature"]["std"] == pytest.approx(7.0710678, abs=1e-6)
        assert stats["humidity"]["mean"] == 60.0
        assert stats["qualifying_weeks"] == 1

    def test_no_qualifying_weeks(self):
        rows = [mk("2023-06-05T08:00", 100)]
        with pytest.raises(NoQualifyingWeeks):
            region_weekly_stats(rows, BOX, min_weekly=100)  # strictly-more-than rule

    def test_threshold_zero_uses_all_rows(self):
        rows = [mk("2023-06-05T08:00", 1, temperature=20.0), mk("2023-06-06T08:00", 1, temperature=24.0)]
        stats = region_weekly_stats(rows, BOX, min_weekly=0)
        assert stats["temperature"]["mean"] == 22.0
        assert stats["n_rows"] == 2

    def test_bbox_filters_first(self):
        inside = [mk("2023-06-05T08:00", 500, temperature=20.0)]
        outside = [mk("2023-06-05T09:00", 500, "200", lat=55.0, temperature=40.0)]
        stats = region_weekly_stats(inside + outside, BOX, min_weekly=100)
        assert stats["temperature"]["mean"] == 20.0


class TestHourlyOutliers:
    def test_spike_flagged_with_z(self):
        rows = hourly_series("213", "2023-06-01", [5] * 29 + [50], hour=21)
        events = hourly_outliers(rows, "213", {21}, k=3.0)
        assert len(events) == 1
        event = events[0]
        assert event.counts == 50
        assert event.hour == 21
        assert event.z_score == pytest.approx(5.2947, abs=0.01)
        assert event.hour_mean == pytest.approx(6.5)
        assert event.timestamp == datetime(2023, 6, 30, 21, 0)

    def test_constant_series_no_events(self):
        rows = hourly_series("213", "2023-06-01", [5] * 10, hour=21)
        assert hourly_outliers(rows, "213", {21}) == []

    def test_k_zero_flags_strictly_above_mean(self):
        rows = hourly_series("213", "2023-06-01", [1, 2, 3], hour=21)
        events = hourly_outliers(rows, "213", {21}, k=0.0)
        assert [e.counts for e in events] == [3]  # mean 2: only 3 is strictly above

    def test_hours_independent(self):
        rows = hourly_series("213", "2023-06-01", [5] * 29 + [50], hour=21)
        rows += hourly_series("213", "2023-06-01", [5] * 30, hour=22)
        events = hourly_outliers(rows, "213", {21, 22})
        assert [e.hour for e in events] == [21]

    def test_insufficient_data(self):
        rows = hourly_series("213", "2023-06-01", [5, 6], hour=21)
        with pytest.raises(InsufficientData) as info:
            hourly_outliers(rows, "213", {21})
        assert info.value.hour == 21
        with pytest.raises(InsufficientData):
            hourly_outliers(rows, "999", {21})

    def test_order_invariance(self):
        rows = hourly_series("213", "2023-06-01", [5] * 20 + [40, 5, 41], hour=3)
        shuffled = rows[:]
        random.Random(1).shuffle(shuffled)
        assert hourly_outliers(rows, "213", {3}) == hourly_outliers(shuffled, "213", {3})

    def test_sorted_by_timestamp(self):
        rows = hourly_series("213", "2023-06-01", [50] + [5] * 20 + [50], hour=3)
        events = hourly_outliers(rows, "213", {3})
        assert [e.timestamp for e in events] == sorted(e.timestamp for e in events)


class TestSimilarity:
    def _pair(self, counts_a, counts_b):
        a = hourly_series("213", "2023-06-01", counts_a, hour=8)
        b = hourly_series("217", "2023-06-01", counts_b, hour=9)
        return a, b

    def test_identical_series(self):
        a, b = self._pair([1, 5, 2, 8], [1, 5, 2, 8])
        report = similarity_report(a, b)
        assert report.pearson_r == pytest.approx(1.0, abs=1e-12)
        assert report.t_test.statistic == 0.0
        assert report.t_test.p_value == 1.0
        assert report.n_days == 4

    def test_hand_example(self):
        a, b = self._pair([1, 2, 3], [4, 5, 6])
        report = similarity_report(a, b)
        assert report.t_test.statistic == pytest.approx(-3.674, abs=1e-3)
        assert report.t_test.df == (4,)
        assert report.t_test.p_value == pytest.approx(0.0213, abs=1e-3)

    def test_constant_equal_series(self):
        a, b = self._pair([3, 3, 3], [3, 3, 3])
        report = similarity_report(a, b)
        assert report.pearson_r is None
        assert report.t_test.statistic == 0.0 and report.t_test.p_value == 1.0

    def test_no_common_days(self):
        a = hourly_series("213", "2023-06-01", [1, 2], hour=8)
        b = hourly_series("217", "2023-07-01", [1, 2], hour=8)
        with pytest.raises(NoCommonDays):
            similarity_report(a, b)

    def test_spectrum_is_mean_removed_dft_magnitude(self):
        import numpy as np

        a, b = self._pair([1, 2, 3, 4], [4, 3, 2, 1])
        report = similarity_report(a, b)
        expected = np.abs(np.fft.rfft(np.array([1, 2, 3, 4]) - 2.5))
        assert list(report.spectrum_a) == pytest.approx(list(expected), abs=1e-12)
        assert report.spectrum_a[0] == pytest.approx(0.0, abs=1e-12)  # mean removed


class TestCorrelationMatrix:
    def test_diagonal_and_symmetry(self):
        rows = hourly_series("A", "2023-06-01T00:00", [1, 5, 3, 8])
        rows += hourly_series("B", "2023-06-01T00:00", [2, 10, 6, 16])
        rows += hourly_series("C", "2023-06-01T00:00", [9, 1, 7, 2])
        result = correlation_matrix(rows)
        m = result["matrix"]
        assert result["devices"] == ["A", "B", "C"]
        assert all(m[i][i] == 1.0 for i in range(3))
        assert m[0][1] == pytest.approx(1.0, abs=1e-12)  # B is 2*A
        assert m[0][2] == m[2][0]

    def test_alignment_on_common_hours(self):
        rows = hourly_series("A", "2023-06-01T00:00", [1, 5, 3, 8])
        rows += hourly_series("B", "2023-06-01T02:00", [3, 8, 4, 4])  # overlap hours 2,3
        result = correlation_matrix(rows)
        assert result["matrix"][0][1] == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_cells_none(self):
        rows = hourly_series("A", "2023-06-01T00:00", [1, 1, 1])
        rows += hourly_series("B", "2023-06-01T00:00", [1, 2, 3])
        assert correlation_matrix(rows)["matrix"][0][1] is None


class TestBinnedResponse:
    def test_single_temperature_bin(self):
        rows = [mk("2023-06-01T08:00", 4, temperature=25.0)]
        response = binned_response(rows, Metric.TEMPERATURE)
        assert response.bin_labels == ("<10", "10-20", "20-30", ">=30")
        assert response.n == (0, 0, 1, 0)
        assert response.mean_counts == (None, None, 4.0, None)

    def test_two_bins(self):
        rows = [
            mk("2023-06-01T08:00", 1, temperature=5.0),
            mk("2023-06-01T09:00", 3, temperature=15.0),
        ]
        response = binned_response(rows, Metric.TEMPERATURE)
        assert response.mean_counts[0] == 1.0 and response.mean_counts[1] == 3.0

    def test_humidity_100_falls_in_top_bin(self):
        rows = [mk("2023-06-01T08:00", 9, humidity=100.0)]
        response = binned_response(rows, Metric.HUMIDITY)
        assert response.bin_labels[-1] == "90-100"
        assert response.n[-1] == 1 and response.mean_counts[-1] == 9.0

    def test_boundary_goes_to_upper_bin(self):
        rows = [mk("2023-06-01T08:00", 2, temperature=20.0)]
        response = binned_response(rows, Metric.TEMPERATURE)
        assert response.n == (0, 0, 1, 0)


# -- brute-force oracle equivalence ------------------------------------------------


def _random_dataset(rng: random.Random, max_rows: int = 500):
    devices = [str(100 + i) for i in range(rng.randint(1, 6))]
    positions = {d: (39.0 + rng.random(), 22.0 + rng.random()) for d in devices}
    base = datetime(2023, 6, 1)
    rows = []
    for _ in range(rng.randint(1, max_rows)):
        device = rng.choice(devices)
        ts = base + timedelta(hours=rng.randrange(24 * 20))
        lat, long = positions[device]
        rows.append(
            mk(ts, rng.randrange(0, 40), device,
               temperature=round(rng.uniform(5, 45), 2),
               humidity=round(rng.uniform(10, 100), 1), lat=lat, long=long)
        )
    # one reading per (device, timestamp): drop duplicates like the store would
    seen = {}
    for r in rows:
        seen[(r.device, r.timestamp)] = r
    return sorted(seen.values(), key=lambda r: (r.device, r.timestamp))


def _oracle_daily(rows):
    out = defaultdict(lambda: defaultdict(int))
    for r in rows:
        out[r.device][r.timestamp.date()] += r.counts
    return out


def _oracle_top(rows, n):
    ranked = []
    for device, days in _oracle_daily(rows).items():
        ranked.append((device, sum(days.values()) / len(days)))
    ranked.sort(key=lambda p: (-p[1], p[0]))
    return ranked[:n]


def _oracle_profile_counts(rows):
    out = []
    for hour in range(24):
        sample = [r.counts for r in rows if r.timestamp.hour == hour]
        out.append(sum(sample) / len(sample) if sample else None)
    return out


def _oracle_extremes_day(rows):
    flat = [
        (device, day, total)
        for device, days in _oracle_daily(rows).items()
        for day, total in days.items()
    ]
    ranked = sorted(flat, key=lambda c: (-c[2], c[1], c[0]))
    low = sorted(flat, key=lambda c: (c[2], c[1], c[0]))
    return ranked[0], low[0]


def _oracle_heat(rows, box):
    weights = defaultdict(int)
    for r in rows:
        if box.lat_min <= r.lat <= box.lat_max and box.long_min <= r.long <= box.long_max:
            weights[(r.lat, r.long)] += r.counts
    return dict(weights)


@pytest.mark.parametrize("seed", range(40))
def test_oracle_equivalence(seed):
    rng = random.Random(seed)
    rows = _random_dataset(rng, max_rows=160)

    daily = aggregate_counts(rows, Bucket.DAILY)
    oracle = _oracle_daily(rows)
    for device, series in daily.items():
        for when, total in series:
            assert total == oracle[device].get(when.date(), 0)
        assert sum(v for _, v in series) == sum(oracle[device].values())

    n = rng.randint(1, 5)
    assert top_n_daily_mean(rows, n) == pytest.approx(_oracle_top(rows, n))

    profile = hourly_profile(rows)
    expected = _oracle_profile_counts(rows)
    for got, want in zip(profile.mean_counts, expected):
        if want is None:
            assert got is None
        else:
            assert got == pytest.approx(want)

    high, low = _oracle_extremes_day(rows)
    report = extremes(rows, Granularity.DAY)
    assert (report.highest.device, report.highest.period_start.date(), report.highest.total) == high
    assert (report.lowest.device, report.lowest.period_start.date(), report.lowest.total) == low

    box = BBox(39.0, 39.5, 22.0, 22.5)
    got = {(p.lat, p.long): w for p, w in heat_points_list(rows, box)}
    assert got == _oracle_heat(rows, box)

    matrix = circadian_matrix(rows, Metric.COUNTS)
    total = sum(v for row in matrix.cells for v in row if v is not None)
    assert total == sum(r.counts for r in rows)


def heat_points_list(rows, box):
    from traphub.analytics import heat_points

    return heat_points(rows, box)
