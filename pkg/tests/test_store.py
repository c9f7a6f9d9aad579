"""Store behavior: idempotency, filters, durability, commands, snapshots."""

import random
import threading
from datetime import datetime

import pytest

from helpers import TABLE1_CSV, mk
from traphub.errors import StorageFailure, UnknownDevice, UnknownRecording
from traphub.ingest import parse_recording_filename, parse_tabular
from traphub.model import BBox, DeviceKind, RecordingKind
from traphub.store import CommandKind, ReadingFilter, Store


@pytest.fixture
def table1_readings():
    readings, _ = parse_tabular(TABLE1_CSV)
    return readings


class TestReadings:
    def test_reinsert_is_idempotent(self, table1_readings):
        store = Store()
        store.insert_readings(table1_readings)
        store.insert_readings(table1_readings)
        assert store.reading_count() == 4

    def test_last_writer_wins(self, table1_readings):
        store = Store()
        store.insert_readings(table1_readings)
        updated = mk("2023-06-01T08:00", 99)
        store.insert_readings([updated])
        rows = store.query_readings(ReadingFilter(devices=frozenset({"100"})))
        assert [r.counts for r in rows][0] == 99
        assert store.reading_count() == 4

    def test_device_catalog(self):
        store = Store()
        store.insert_readings([mk("2023-06-01T08:00", 1, "100"), mk("2023-06-01T08:00", 1, "149")])
        catalog = store.devices()
        assert [d.device for d in catalog] == ["100", "149"]
        assert all(d.kind is DeviceKind.EFUNNEL for d in catalog)
        assert catalog[0].last_position is not None

    def test_insert_empty(self):
        assert Store().insert_readings([]) == 0

    def test_nocturnal_hours_filter(self):
        store = Store()
        store.insert_readings([mk(f"2023-06-01T{h:02d}:00", h) for h in range(24)])
        nocturnal = frozenset({21, 22, 23, 0, 1, 2, 3, 4})
        rows = store.query_readings(ReadingFilter(hours_of_day=nocturnal))
        assert {r.hour for r in rows} == nocturnal

    def test_empty_filter_returns_all_sorted(self, table1_readings):
        store = Store()
        store.insert_readings(list(reversed(table1_readings)))
        store.insert_readings([mk("2023-06-01T07:00", 1, "099")])
        rows = store.query_readings()
        assert rows == sorted(rows, key=lambda r: (r.device, r.timestamp))
        assert len(rows) == 5

    def test_excluding_bbox(self, table1_readings):
        store = Store()
        store.insert_readings(table1_readings)
        rows = store.query_readings(ReadingFilter(bbox=BBox(0.0, 1.0, 0.0, 1.0)))
        assert rows == []

    def test_time_range_half_open(self, table1_readings):
        store = Store()
        store.insert_readings(table1_readings)
        rows = store.query_readings(
            ReadingFilter(time_range=(datetime(2023, 6, 1, 8), datetime(2023, 6, 1, 10)))
        )
        assert [r.timestamp.hour for r in rows] == [8, 9]

    def test_bad_time_range(self):
        with pytest.raises(StorageFailure):
            ReadingFilter(time_range=(datetime(2023, 6, 2), datetime(2023, 6, 1)))

    def test_filter_oracle_equivalence(self):
        rng = random.Random(11)
        store = Store()
        rows = [
            mk(
                datetime(2023, 6, 1 + rng.randrange(20), rng.randrange(24)),
                rng.randrange(10),
                str(100 + rng.randrange(5)),
                lat=39.0 + rng.random(),
                long=22.0 + rng.random(),
            )
            for _ in range(300)
        ]
        dedup = {(r.device, r.timestamp): r for r in rows}
        store.insert_readings(rows)
        for _ in range(50):
            devices = (
                frozenset(rng.sample(["100", "101", "102", "103", "104"], rng.randint(1, 3)))
                if rng.random() < 0.5
                else None
            )
            lo = datetime(2023, 6, 1 + rng.randrange(10))
            hi = datetime(2023, 6, 11 + rng.randrange(10))
            time_range = (lo, hi) if rng.random() < 0.5 else None
            bbox = (
                BBox(39.0, 39.0 + rng.random(), 22.0, 22.0 + rng.random())
                if rng.random() < 0.5
                else None
            )
            hours = (
                frozenset(rng.sample(range(24), rng.randint(1, 8)))
                if rng.random() < 0.5
                else None
            )
            got = store.query_readings(
                ReadingFilter(devices=devices, time_range=time_range, bbox=bbox, hours_of_day=hours)
            )
            want = [
                r
                for r in dedup.values()
                if (devices is None or r.device in devices)
                and (time_range is None or lo <= r.timestamp < hi)
                and (
                    bbox is None
                    or (bbox.lat_min <= r.lat <= bbox.lat_max
                        and bbox.long_min <= r.long <= bbox.long_max)
                )
                and (hours is None or r.timestamp.hour in hours)
            ]
            want.sort(key=lambda r: (r.device, r.timestamp))
            assert got == want


VIBRATION_NAMES = [
    "F_20230812193118_1.mp3",
    "F_20230813080000_2.mp3",
    "F_20230814090000_3.wav",
]


class TestRecordings:
    def _register(self, store, names, device="700"):
        ids = []
        for i, name in enumerate(names):
            asset = parse_recording_filename(name, RecordingKind.VIBRATION)
            from dataclasses import replace

            asset = replace(asset, device=device)
            ids.append(store.register_recording(asset, f"payload-{i}".encode()))
        return ids

    def test_list_newest_first(self):
        store = Store()
        self._register(store, VIBRATION_NAMES)
        listed = store.list_recordings(device="700")
        assert [a.filename for _, a in listed] == list(reversed(VIBRATION_NAMES))

    def test_list_for_missing_device_empty(self):
        assert Store().list_recordings(device="nope") == []

    def test_payload_round_trip(self):
        store = Store()
        ids = self._register(store, VIBRATION_NAMES[:1])
        assert store.get_payload(ids[0]) == b"payload-0"

    def test_unknown_recording(self):
        with pytest.raises(UnknownRecording):
            Store().get_recording("nope")

    def test_reregister_overwrites(self):
        store = Store()
        ids1 = self._register(store, VIBRATION_NAMES[:1])
        ids2 = self._register(store, VIBRATION_NAMES[:1])
        assert ids1 == ids2
        assert len(store.list_recordings()) == 1

    def test_kind_filter_and_time_range(self):
        store = Store()
        self._register(store, VIBRATION_NAMES)
        within = store.list_recordings(
            kind=RecordingKind.VIBRATION,
            time_range=(datetime(2023, 8, 13), datetime(2023, 8, 14)),
        )
        assert [a.filename for _, a in within] == ["F_20230813080000_2.mp3"]
        assert store.list_recordings(kind=RecordingKind.WINGBEAT) == []

    def test_kind_conflict_rejected(self):
        store = Store()
        self._register(store, VIBRATION_NAMES[:1], device="700")
        with pytest.raises(StorageFailure):
            store.insert_readings([mk("2023-06-01T08:00", 1, "700")])


class TestCommands:
    def _store_with_device(self):
        store = Store()
        store.insert_readings([mk("2023-06-01T08:00", 1, "100")])
        return store

    def test_exactly_once(self):
        store = self._store_with_device()
        store.enqueue_command("100", CommandKind.SET_DETECTION_THRESHOLD, {"value": 0.7})
        first = store.poll_commands("100")
        assert len(first) == 1
        assert first[0].payload == {"value": 0.7}
        assert store.poll_commands("100") == []

    def test_unknown_device(self):
        store = self._store_with_device()
        with pytest.raises(UnknownDevice):
            store.enqueue_command("999", CommandKind.POWER_ON)
        with pytest.raises(UnknownDevice):
            store.poll_commands("999")

    def test_issue_order(self):
        store = self._store_with_device()
        for kind in (CommandKind.POWER_ON, CommandKind.SET_SCHEDULE, CommandKind.POWER_OFF):
            store.enqueue_command("100", kind)
        polled = store.poll_commands("100")
        assert [c.command for c in polled] == [
            CommandKind.POWER_ON,
            CommandKind.SET_SCHEDULE,
            CommandKind.POWER_OFF,
        ]
        assert [c.command_id for c in polled] == sorted(c.command_id for c in polled)


class TestDurability:
    def test_replay_restores_everything(self, tmp_path, table1_readings):
        data = tmp_path / "data"
        store = Store(data)
        store.insert_readings(table1_readings)
        asset = parse_recording_filename(VIBRATION_NAMES[0], RecordingKind.VIBRATION)
        asset_id = store.register_recording(asset, b"blob")
        delivered_id = store.enqueue_command("100", CommandKind.POWER_OFF)
        pending_id = store.enqueue_command("100", CommandKind.POWER_ON)
        assert [c.command_id for c in store.poll_commands("100")] == [delivered_id, pending_id]
        third_id = store.enqueue_command("100", CommandKind.SET_TIMEZONE, {"offset": 120})
        store.close()

        reopened = Store(data)
        assert reopened.query_readings() == store.query_readings()
        assert reopened.get_payload(asset_id) == b"blob"
        assert reopened.get_recording(asset_id).filename == VIBRATION_NAMES[0]
        pending = reopened.poll_commands("100")
        assert [c.command_id for c in pending] == [third_id]
        reopened.close()

    def test_log_has_versioned_header(self, tmp_path):
        store = Store(tmp_path / "data")
        store.insert_readings([mk("2023-06-01T08:00", 1)])
        store.close()
        first_line = (tmp_path / "data" / "store.log").read_text().splitlines()[0]
        assert '"traphub-log"' in first_line and '"version":1' in first_line


class TestSnapshots:
    def test_queries_never_see_torn_batches(self):
        store = Store()
        batch_size = 48
        stop = threading.Event()
        errors = []

        def writer():
            day = 1
            while not stop.is_set() and day <= 25:
                batch = [mk(datetime(2023, 6, day, h), 1, "100") for h in range(24)]
                batch += [mk(datetime(2023, 7, day, h), 1, "100") for h in range(24)]
                store.insert_readings(batch)
                day += 1

        def reader():
            while not stop.is_set():
                n = len(store.query_readings())
                if n % batch_size != 0:
                    errors.append(n)
                    return

        threads = [threading.Thread(target=writer)] + [
            threading.Thread(target=reader) for _ in range(3)
        ]
        for t in threads:
            t.start()
        threads[0].join()
        stop.set()
        for t in threads[1:]:
            t.join()
        assert errors == []
        assert store.reading_count() == 25 * batch_size
