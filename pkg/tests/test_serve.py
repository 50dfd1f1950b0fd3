import json
import threading

import pytest

from plantchart import device
from plantchart.encoder import EncodingMode
from plantchart.motion import CAIRNSCREEN, PLANTFORM, PLANTSCREEN
from plantchart.serve import (
    Broker,
    FileFeed,
    ForecastService,
    device_targets,
    run_service,
)
from plantchart.series import load_series


def payload_for(anchors=(8, 12, 17)):
    start, peak, end = anchors
    samples = []
    for hour in range(start, end + 1):
        if hour <= peak:
            rate = (hour - start) / (peak - start) if peak > start else 1.0
        else:
            rate = (end - hour) / (end - peak)
        samples.append({"hour": hour, "rate": rate})
    return json.dumps({"samples": samples})


class TestDeviceTargets:
    def test_hour_aligned_spread(self):
        series = load_series(payload_for((10, 12, 14)))
        targets = device_targets(series, [0, 4, 10, 4, 0])
        assert targets == [0, 0, 0, 4, 10, 4, 0, 0, 0, 0]

    def test_evening_hour_with_zero_position_is_dropped(self):
        series = load_series(payload_for((10, 14, 18)))
        positions = [0, 4, 4, 5, 10, 5, 4, 3, 0]
        targets = device_targets(series, positions)
        assert len(targets) == 10
        assert targets[2:] == positions[:-1]

    def test_evening_hour_with_nonzero_position_is_an_error(self):
        series = load_series(payload_for((10, 14, 18)))
        positions = [0, 4, 4, 5, 10, 5, 4, 3, 1]
        with pytest.raises(ValueError):
            device_targets(series, positions)


class TestForecastService:
    def test_one_payload_executes_one_plan(self):
        service = ForecastService(PLANTFORM, tick=0.05)
        assert service.handle_payload(payload_for())
        assert service.displayed == 1
        positions = device.leaf_positions(service.controller)
        assert positions == [0, 4, 4, 5, 10, 5, 5, 4, 3, 0]
        assert "set_target" in service.event_log_ndjson()

    def test_malformed_payload_rejected_service_stays_up(self):
        service = ForecastService(PLANTFORM, tick=0.05)
        assert not service.handle_payload("{not json")
        assert service.rejected
        assert service.handle_payload(payload_for())
        assert service.displayed == 1

    def test_back_to_back_payloads_transition_from_previous_state(self):
        service = ForecastService(PLANTFORM, tick=0.05)
        service.handle_payload(payload_for((8, 12, 17)))
        first_log_len = len(service.controller.event_log)
        service.handle_payload(payload_for((10, 16, 17)))
        # physical profile: direct transition, no wipe to zero in between
        new_events = service.controller.event_log[first_log_len:]
        targets = [
            dict(e.detail)["target_step"] for e in new_events if e.kind == "set_target"
        ]
        assert targets  # something moved
        positions = device.leaf_positions(service.controller)
        assert positions == device_targets(
            load_series(payload_for((10, 16, 17))),
            [0, 3, 4, 4, 5, 6, 10, 0],
        )

    def test_screen_profile_resets_between_payloads(self):
        service = ForecastService(PLANTSCREEN, tick=0.5)
        service.handle_payload(payload_for((8, 12, 17)))
        before = len(service.controller.event_log)
        service.handle_payload(payload_for((10, 16, 17)))
        new_events = service.controller.event_log[before:]
        sets = [dict(e.detail) for e in new_events if e.kind == "set_target"]
        wipe, show = sets[:10], sets[10:]
        # the transition opens with an all-zero pass over every leaf
        assert all(d["target_step"] == 0 for d in wipe)
        assert sorted(d["leaf"] for d in wipe) == list(range(10))
        assert any(d["target_step"] > 0 for d in show)

    def test_multi_variation_payload_displays_each_in_turn(self):
        doc = {
            "samples": [
                {"hour": 8, "rate": 0.0},
                {"hour": 9, "rate": 0.6},
                {"hour": 10, "rate": 0.2},
                {"hour": 11, "rate": 0.8},
                {"hour": 12, "rate": 0.0},
            ]
        }
        service = ForecastService(PLANTFORM, tick=0.05)
        assert service.handle_payload(json.dumps(doc))
        assert service.displayed == 2

    def test_absolute_mode_service(self):
        service = ForecastService(CAIRNSCREEN, EncodingMode.ABSOLUTE_LINEAR, tick=0.5)
        assert service.handle_payload(payload_for((8, 12, 17)))
        positions = device.leaf_positions(service.controller)
        assert positions[4] == 10  # the peak rate is 1.0 either way


class TestFeeds:
    def test_file_feed_reads_whole_lines_in_order(self, tmp_path):
        path = tmp_path / "feed.ndjson"
        path.write_text(payload_for((8, 12, 17)) + "\n" + payload_for((9, 11, 13)) + "\n")
        feed = FileFeed(path)
        assert json.loads(feed.poll())["samples"][0]["hour"] == 8
        assert json.loads(feed.poll())["samples"][0]["hour"] == 9
        assert feed.poll() is None

    def test_file_feed_skips_incomplete_trailing_line(self, tmp_path):
        path = tmp_path / "feed.ndjson"
        path.write_text(payload_for() + "\n" + '{"partial":')
        feed = FileFeed(path)
        assert feed.poll() is not None
        assert feed.poll() is None
        with path.open("a") as handle:
            handle.write(' 1}\n')
        assert feed.poll() is not None

    def test_broker_routes_by_topic(self):
        broker = Broker()
        feed = broker.subscribe("plantform/forecast")
        assert broker.publish("plantform/forecast", "x") == 1
        assert broker.publish("other/topic", "y") == 0
        assert feed.poll() == "x"
        assert feed.poll() is None

    def test_run_service_over_a_broker(self):
        broker = Broker()
        feed = broker.subscribe("plantform/forecast")
        broker.publish("plantform/forecast", payload_for())
        broker.publish("plantform/forecast", "garbage")
        service = ForecastService(PLANTFORM, tick=0.1)
        accepted = run_service(service, feed, max_messages=2, poll_timeout=0.01)
        assert accepted == 1
        assert service.displayed == 1
        assert len(service.rejected) == 1

    def test_run_service_stops_when_idle(self, tmp_path):
        path = tmp_path / "feed.ndjson"
        path.write_text(payload_for() + "\n")
        service = ForecastService(PLANTFORM, tick=0.1)
        accepted = run_service(
            service, FileFeed(path), poll_timeout=0.01, max_idle_polls=2
        )
        assert accepted == 1

    def test_threaded_publisher(self):
        broker = Broker()
        feed = broker.subscribe("plantform/forecast")

        def publish_later():
            broker.publish("plantform/forecast", payload_for((12, 14, 15)))

        timer = threading.Timer(0.05, publish_later)
        timer.start()
        service = ForecastService(PLANTFORM, tick=0.1)
        accepted = run_service(service, feed, max_messages=1, poll_timeout=0.05)
        timer.join()
        assert accepted == 1
