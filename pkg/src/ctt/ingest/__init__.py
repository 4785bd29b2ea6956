"""Input parsing: subtitles, frame signatures, slide OCR, style labels, tokens."""

from ctt.ingest.frames import FrameSignature, parse_frame_signatures
from ctt.ingest.slides import SlideOcr, TextBox, parse_slide_ocr
from ctt.ingest.stemmer import porter_stem
from ctt.ingest.styles import StyleSpan, parse_style_spans
from ctt.ingest.subtitles import SubtitleFormat, TranscriptSegment, parse_transcript
from ctt.ingest.tokens import Token, TokenStream, load_stopwords, normalize_tokens

__all__ = [
    "FrameSignature",
    "SlideOcr",
    "StyleSpan",
    "SubtitleFormat",
    "TextBox",
    "Token",
    "TokenStream",
    "TranscriptSegment",
    "load_stopwords",
    "normalize_tokens",
    "parse_frame_signatures",
    "parse_slide_ocr",
    "parse_style_spans",
    "parse_transcript",
    "porter_stem",
]
