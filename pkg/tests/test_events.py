from __future__ import annotations

import pytest

from navstick.docs import DocumentError
from navstick.events import (
    AudioEvent,
    EventLog,
    decode_line,
    encode_event,
    header_line,
    parse_log,
    validate_log,
)
from navstick.geometry import Vec2


def test_speech_line_shape():
    e = AudioEvent(482, "speech", "start", "Chomper 4", Vec2(3, 4), "chomper-4", 5)
    line = encode_event(e)
    assert '"payload":"Chomper 4"' in line
    assert '"x":3.000000' in line and '"y":4.000000' in line
    assert '"channel":"speech"' in line


def test_roundtrip():
    e = AudioEvent(7, "nav_tone", "start", 440.0, Vec2(-1.25, 0.5), None, 9)
    assert decode_line(encode_event(e)) == e
    g = EventLog()
    g.game(3, "enemy_defeated", {"entity": "chomper-1"})
    rec = decode_line(encode_event(g.records[0]))
    assert rec == g.records[0]


def test_stop_without_ref_refused():
    e = AudioEvent(8, "speech", "stop", "X", Vec2(0, 0), None, 10, ref=None)
    with pytest.raises(DocumentError):
        encode_event(e)


def test_nav_tone_frequency_pinned():
    bad = AudioEvent(1, "nav_tone", "start", 500.0, Vec2(0, 0), None, 1)
    with pytest.raises(DocumentError):
        encode_event(bad)
    for hz in (440.0, 1320.0):
        encode_event(AudioEvent(1, "nav_tone", "start", hz, Vec2(0, 0), None, 1))


def test_validate_empty_log():
    assert validate_log([]) == []
    assert validate_log([header_line()]) == []


def test_validate_pairing_and_exclusivity():
    log = EventLog()
    a = log.audio(1, "speech", "start", "A", Vec2(0, 0), "a")
    log.audio(5, "speech", "stop", "A", Vec2(0, 0), "a", ref=a.event_id)
    b = log.audio(6, "speech", "start", "B", Vec2(0, 0), "b")
    log.audio(9, "speech", "stop", "B", Vec2(0, 0), "b", ref=b.event_id)
    assert validate_log(log.lines()) == []

    # hand-corrupt: two overlapping speech starts
    lines = log.lines()
    overlapping = [
        lines[0],
        lines[1],
        lines[3].replace('"event_id":3', '"event_id":2'),
    ]
    report = validate_log(overlapping)
    assert any("overlapping speech" in v for v in report)


def test_validate_unterminated_start():
    log = EventLog()
    log.audio(1, "ambient", "start", "ambient:door", Vec2(0, 0), "d")
    report = validate_log(log.lines())
    assert any("never stopped" in v for v in report)


def test_validate_monotone_ids():
    log = EventLog()
    a = log.audio(1, "fx", "start", "squeak", Vec2(0, 0), None)
    log.audio(1, "fx", "stop", "squeak", Vec2(0, 0), None, ref=a.event_id)
    lines = log.lines()
    swapped = [lines[0], lines[2].replace('"ref":1', '"ref":2'), lines[1]]
    report = validate_log(swapped)
    assert report  # both order and pairing complaints are fine


def test_parse_log_roundtrip():
    log = EventLog()
    s = log.audio(1, "speech", "start", "Key", Vec2(4.2, 3.8), "key-1")
    log.game(2, "menu_step", {"index": 0})
    log.audio(3, "speech", "stop", "Key", Vec2(4.2, 3.8), "key-1", ref=s.event_id)
    parsed = parse_log(log.text())
    assert parsed == log.records
