from __future__ import annotations

import json
import random

import pytest

from ctt.errors import (
    DuplicateBoxId,
    EmptyInput,
    HistogramLengthMismatch,
    MalformedTimestamp,
    NegativeMass,
    OutOfBounds,
    StyleCoverageError,
)
from ctt.ingest import (
    SubtitleFormat,
    load_stopwords,
    normalize_tokens,
    parse_frame_signatures,
    parse_slide_ocr,
    parse_style_spans,
    parse_transcript,
    porter_stem,
)
from ctt.ingest.frames import serialize_frame_signatures
from ctt.ingest.styles import CourseStyle, serialize_style_spans
from ctt.ingest.subtitles import serialize_transcript

SRT_TWO_CUES = b"""1
00:00:01,000 --> 00:00:03,000
hello

2
00:00:03,000 --> 00:00:05,000
world
"""


# ── stemmer goldens (hand-verified against the published rules) ──────

@pytest.mark.parametrize(
    "word,stem",
    [
        ("caresses", "caress"),
        ("ponies", "poni"),
        ("ties", "ti"),
        ("cats", "cat"),
        ("feed", "feed"),
        ("plastered", "plaster"),
        ("motoring", "motor"),
        ("sing", "sing"),
        ("hopping", "hop"),
        ("falling", "fall"),
        ("filing", "file"),
        ("happy", "happi"),
        ("sky", "sky"),
        ("relational", "relat"),
        ("conditional", "condit"),
        ("rational", "ration"),
        ("valenci", "valenc"),
        ("controll", "control"),
        ("generalization", "gener"),
        ("oscillators", "oscil"),
        ("tables", "tabl"),
        ("table", "tabl"),
        ("variance", "varianc"),
        ("analysis", "analysi"),
        ("hashing", "hash"),
        ("hash", "hash"),
        ("intro", "intro"),
        ("the", "the"),
        ("adoption", "adopt"),
    ],
)
def test_porter_goldens(word, stem):
    assert porter_stem(word) == stem


# ── transcripts ─────────────────────────────────────────────────────

def test_parse_srt_two_cues():
    segments = parse_transcript(SRT_TWO_CUES, SubtitleFormat.SRT)
    assert len(segments) == 2
    assert (segments[0].start_ms, segments[0].end_ms, segments[0].text) == (
        1000,
        3000,
        "hello",
    )
    assert (segments[1].start_ms, segments[1].end_ms, segments[1].text) == (
        3000,
        5000,
        "world",
    )
    assert [s.index for s in segments] == [0, 1]


def test_parse_vtt_zero_cues_is_empty_input():
    with pytest.raises(EmptyInput):
        parse_transcript(b"WEBVTT\n\n", SubtitleFormat.VTT)


def test_parse_vtt_basic():
    vtt = b"WEBVTT\n\n00:00:01.500 --> 00:00:02.500\nhi there\n"
    segments = parse_transcript(vtt, SubtitleFormat.VTT)
    assert segments[0].start_ms == 1500
    assert segments[0].end_ms == 2500
    assert segments[0].text == "hi there"


def test_srt_out_of_order_cues_sorted():
    # Sort oracle: shuffle cue blocks on disk, expect start_ms order back.
    rng = random.Random(7)
    cues = [(1000 * i, 1000 * i + 900, f"w{i}") for i in range(1, 9)]
    shuffled = cues[:]
    rng.shuffle(shuffled)
    blocks = []
    for n, (s, e, t) in enumerate(shuffled, start=1):
        blocks.append(
            f"{n}\n"
            f"00:00:{s // 1000:02d},{s % 1000:03d} --> "
            f"00:00:{e // 1000:02d},{e % 1000:03d}\n{t}\n"
        )
    segments = parse_transcript("\n".join(blocks).encode(), SubtitleFormat.SRT)
    assert [s.start_ms for s in segments] == sorted(c[0] for c in cues)
    assert [s.text for s in segments] == [c[2] for c in sorted(cues)]


def test_overlapping_cues_merge_with_space():
    srt = (
        b"1\n00:00:01,000 --> 00:00:04,000\nfirst\n\n"
        b"2\n00:00:02,000 --> 00:00:05,000\nsecond\n"
    )
    segments = parse_transcript(srt, SubtitleFormat.SRT)
    assert len(segments) == 1
    assert segments[0].text == "first second"
    assert (segments[0].start_ms, segments[0].end_ms) == (1000, 5000)


def test_malformed_timestamp():
    with pytest.raises(MalformedTimestamp):
        parse_transcript(b"1\n00:xx:01,000 --> 00:00:03,000\nhi\n", SubtitleFormat.SRT)


def test_plain_json_round_trip_identity():
    segments = parse_transcript(SRT_TWO_CUES, SubtitleFormat.SRT)
    blob = serialize_transcript(segments)
    again = parse_transcript(blob, SubtitleFormat.PLAIN_TIMED_JSON)
    assert again == segments
    assert serialize_transcript(again) == blob


# ── frame signatures ────────────────────────────────────────────────

def _sig_file(rows, bins=4):
    lines = [json.dumps({"histogram_bins": bins, "frame_w": 640, "frame_h": 480})]
    lines += [json.dumps(r) for r in rows]
    return "\n".join(lines).encode()


def _row(i, hist, edge=0.5):
    return {
        "frame_index": i,
        "timestamp_ms": 1000 * (i + 1),
        "histogram": hist,
        "edge_density": edge,
    }


def test_parse_frame_signatures_ok():
    data = _sig_file([_row(i, [0.25, 0.25, 0.25, 0.25]) for i in range(3)])
    sigs = parse_frame_signatures(data)
    assert len(sigs) == 3
    assert all(abs(sum(s.histogram) - 1.0) <= 1e-9 for s in sigs)


def test_histogram_sum_out_of_tolerance_rejected():
    data = _sig_file([_row(0, [0.2, 0.2, 0.25, 0.25])])  # sums to 0.9
    with pytest.raises(NegativeMass):
        parse_frame_signatures(data)


def test_histogram_within_tolerance_renormalized():
    # Renormalization oracle: each bin divided by the raw sum.
    hist = [0.2500001, 0.25, 0.25, 0.2500003]
    raw_sum = sum(hist)
    data = _sig_file([_row(0, hist)])
    sigs = parse_frame_signatures(data)
    assert abs(sum(sigs[0].histogram) - 1.0) <= 1e-9
    for got, raw in zip(sigs[0].histogram, hist):
        assert got == pytest.approx(raw / raw_sum, abs=1e-15)


def test_histogram_length_mismatch():
    data = _sig_file([_row(0, [0.5, 0.5])], bins=4)
    with pytest.raises(HistogramLengthMismatch):
        parse_frame_signatures(data)


def test_negative_bin_mass():
    data = _sig_file([_row(0, [1.2, -0.2, 0.0, 0.0])])
    with pytest.raises(NegativeMass):
        parse_frame_signatures(data)


def test_signature_round_trip():
    data = _sig_file([_row(i, [0.25, 0.25, 0.25, 0.25]) for i in range(2)])
    sigs = parse_frame_signatures(data)
    again = parse_frame_signatures(serialize_frame_signatures(sigs, 640, 480))
    assert again == sigs


# ── slide OCR ───────────────────────────────────────────────────────

def _box(bid, x=10, y=10, w=50, h=20, frame=0):
    return {
        "box_id": bid,
        "x": x,
        "y": y,
        "width": w,
        "height": h,
        "text": "word",
        "font_size": 20,
        "color": [0, 0, 0],
        "style_flags": [],
        "is_handwritten": False,
    }


def test_parse_slide_ocr_ok():
    payload = {"frame_w": 640, "frame_h": 480, "frames": {"0": [_box("a"), _box("b", x=70)]}}
    ocr = parse_slide_ocr(json.dumps(payload).encode())
    assert len(ocr.frames[0]) == 2


def test_duplicate_box_id_rejected():
    payload = {"frame_w": 640, "frame_h": 480, "frames": {"0": [_box("a")], "1": [_box("a")]}}
    with pytest.raises(DuplicateBoxId):
        parse_slide_ocr(json.dumps(payload).encode())


def test_out_of_bounds_box_rejected():
    payload = {"frame_w": 640, "frame_h": 480, "frames": {"0": [_box("a", x=630, w=20)]}}
    with pytest.raises(OutOfBounds):
        parse_slide_ocr(json.dumps(payload).encode())


# ── style spans ─────────────────────────────────────────────────────

def test_style_spans_tile():
    payload = {
        "spans": [
            {"start_ms": 0, "end_ms": 5000, "style": "slides"},
            {"start_ms": 5000, "end_ms": 9000, "style": "talking_head"},
        ]
    }
    spans = parse_style_spans(json.dumps(payload).encode())
    assert spans[0].style is CourseStyle.SLIDES
    assert spans[1].start_ms == spans[0].end_ms
    again = parse_style_spans(serialize_style_spans(spans))
    assert again == spans


def test_style_spans_gap_rejected():
    payload = {
        "spans": [
            {"start_ms": 0, "end_ms": 5000, "style": "slides"},
            {"start_ms": 6000, "end_ms": 9000, "style": "talking_head"},
        ]
    }
    with pytest.raises(StyleCoverageError):
        parse_style_spans(json.dumps(payload).encode())


# ── token normalization ─────────────────────────────────────────────

def test_normalize_tokens_goldens():
    segments = parse_transcript(
        b'{"segments":[{"start_ms":0,"end_ms":3000,"text":"The Hash Tables"}]}',
        SubtitleFormat.PLAIN_TIMED_JSON,
    )
    stopwords, _ = load_stopwords()
    stream = normalize_tokens(segments, stopwords)
    assert [t.surface for t in stream.tokens] == ["the", "hash", "tables"]
    assert [t.stem for t in stream.tokens] == ["the", "hash", "tabl"]
    assert [t.is_stopword for t in stream.tokens] == [True, False, False]


def test_normalize_tokens_empty_text():
    segments = parse_transcript(
        b'{"segments":[{"start_ms":0,"end_ms":1000,"text":"  "}]}',
        SubtitleFormat.PLAIN_TIMED_JSON,
    )
    stopwords, _ = load_stopwords()
    assert len(normalize_tokens(segments, stopwords)) == 0


def test_punctuation_variants_share_stem():
    segments = parse_transcript(
        b'{"segments":[{"start_ms":0,"end_ms":2000,"text":"variance, Variance!"}]}',
        SubtitleFormat.PLAIN_TIMED_JSON,
    )
    stopwords, _ = load_stopwords()
    stream = normalize_tokens(segments, stopwords)
    assert len(stream.tokens) == 2
    assert {t.stem for t in stream.tokens} == {"varianc"}


def test_token_times_inside_segment():
    segments = parse_transcript(SRT_TWO_CUES, SubtitleFormat.SRT)
    stopwords, _ = load_stopwords()
    stream = normalize_tokens(segments, stopwords)
    for tok in stream.tokens:
        owners = [
            s
            for s in segments
            if s.start_ms <= tok.start_ms and tok.end_ms <= s.end_ms
        ]
        assert owners, f"token {tok} escapes every segment"
