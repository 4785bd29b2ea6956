"""Token normalization: lowercase, strip punctuation, stem, time-interpolate."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

from ctt.ingest.stemmer import porter_stem
from ctt.ingest.subtitles import TranscriptSegment

_WORD = re.compile(r"[a-z0-9]+")

_DATA_DIR = Path(__file__).parent / "data"
DEFAULT_STOPWORDS_PATH = _DATA_DIR / "stopwords_en.txt"


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    start_ms: int
    end_ms: int
    is_stopword: bool


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...] = field(default_factory=tuple)
    stopwords_sha256: str = ""
    stemmer_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def content_tokens(self) -> list[Token]:
        return [t for t in self.tokens if not t.is_stopword]

    @property
    def start_ms(self) -> int:
        return self.tokens[0].start_ms if self.tokens else 0

    @property
    def end_ms(self) -> int:
        return self.tokens[-1].end_ms if self.tokens else 0


def load_stopwords(path: Path | None = None) -> tuple[frozenset[str], str]:
    """Load the stopword list and return it with the file's sha256.

    The hash travels into output provenance so a changed list is visible
    in reproducibility checks.
    """
    p = path or DEFAULT_STOPWORDS_PATH
    raw = p.read_bytes()
    words = frozenset(
        w.strip().lower() for w in raw.decode("utf-8").splitlines() if w.strip()
    )
    return words, hashlib.sha256(raw).hexdigest()


def normalize_tokens(
    segments: list[TranscriptSegment],
    stopwords: frozenset[str],
    stemmer_id: str = "porter/1980",
    stopwords_sha256: str = "",
) -> TokenStream:
    """Tokenize segments into a time-aligned stream.

    Tokens are lowercased alphanumeric runs; punctuation is dropped.
    Each token's time span is linearly interpolated from its character
    offsets within the owning segment, so token times always stay inside
    the segment.  Stopwords are flagged, never deleted: downstream
    stages decide whether to skip them.
    """
    if not stopwords:
        raise ValueError("stopword list must be non-empty")
    tokens: list[Token] = []
    for seg in segments:
        lowered = seg.text.lower()
        n = len(lowered)
        if n == 0:
            continue
        dur = seg.end_ms - seg.start_ms
        for m in _WORD.finditer(lowered):
            surface = m.group(0)
            start = seg.start_ms + (m.start() * dur) // n
            end = seg.start_ms + (m.end() * dur) // n
            if end <= start:
                end = start + 1 if start + 1 <= seg.end_ms else seg.end_ms
            tokens.append(
                Token(
                    surface=surface,
                    stem=porter_stem(surface),
                    start_ms=start,
                    end_ms=min(end, seg.end_ms),
                    is_stopword=surface in stopwords,
                )
            )
    return TokenStream(
        tokens=tuple(tokens),
        stopwords_sha256=stopwords_sha256,
        stemmer_id=stemmer_id,
    )
