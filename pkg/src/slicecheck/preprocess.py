"""English social-media text normalization.

Masks user mentions and URLs, spells emoji out as words, lowercases
everything except the mask tokens and collapses whitespace::

    >>> preprocess_text("@bob Look 👀 https://x.io")
    'USER look eyes HTML'

Colon shortcodes such as ``:hundred-points:`` are expanded the same way
as the emoji they name.  Hashtags and numerals pass through unchanged.
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources

_SHORTNAME_RE = re.compile(r"[A-Za-z0-9-]+\Z")
_TOKEN_RE = re.compile(r"\S+\Z")

_URL_RE = re.compile(
    r"(?:\b[a-z][a-z0-9+.\-]*://|\bwww\.)\S+",
    re.IGNORECASE,
)
_URL_TRAILING = ".,!?"
_MENTION_RE = re.compile(r"(?<![\w@])@\w+")
_SHORTCODE_RE = re.compile(r":([A-Za-z0-9_+\-]+):")
_WS_RE = re.compile(r"\s+")

# Pictographic blocks used to tally emoji the table does not know.
_EMOJI_RANGES = (
    (0x1F000, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
)


@lru_cache(maxsize=1)
def default_emoji_table() -> Mapping[str, str]:
    """Embedded emoji table: codepoint sequence -> hyphenated shortname."""
    table: dict[str, str] = {}
    text = resources.files("slicecheck").joinpath("data/emoji.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        codes, name = line.split("\t")
        table["".join(chr(int(c, 16)) for c in codes.split())] = name
    return table


@dataclass(frozen=True)
class NormalizationRules:
    mention_token: str = "USER"
    url_token: str = "HTML"
    emoji_table: Mapping[str, str] = field(default_factory=default_emoji_table, repr=False)
    lowercase: bool = True

    def __post_init__(self) -> None:
        for tok in (self.mention_token, self.url_token):
            if not _TOKEN_RE.match(tok or ""):
                raise ValueError(f"mask token {tok!r} must be a single whitespace-free token")
        bad = [n for n in self.emoji_table.values() if not _SHORTNAME_RE.match(n)]
        if bad:
            raise ValueError(f"invalid emoji shortnames: {bad[:5]}")

    @cached_property
    def _compiled(self) -> _Compiled:
        return _Compiled(self)


class _Compiled:
    def __init__(self, rules: NormalizationRules):
        seqs = sorted(rules.emoji_table, key=len, reverse=True)
        self.emoji_re = re.compile("|".join(map(re.escape, seqs))) if seqs else None
        self.names = {name: name for name in rules.emoji_table.values()}
        tokens = sorted({rules.mention_token, rules.url_token}, key=len, reverse=True)
        self.masks = re.compile(r"(?<!\w)(" + "|".join(map(re.escape, tokens)) + r")(?!\w)")


DEFAULT_RULES = NormalizationRules()


def _words(shortname: str) -> str:
    return " " + shortname.replace("-", " ").replace("_", " ") + " "


def _is_pictograph(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


def _lower_except_masks(text: str, masks: re.Pattern) -> str:
    parts = masks.split(text)
    # split() with one group puts the captured masks at odd positions
    return "".join(p if i % 2 else p.lower() for i, p in enumerate(parts))


def preprocess_text(
    raw: str,
    rules: NormalizationRules = DEFAULT_RULES,
    diagnostics: Counter | None = None,
) -> str:
    """Normalize one message.

    Emoji not in the table are left in place; when ``diagnostics`` is
    given, each one is counted there.
    """
    compiled = rules._compiled
    # Lowercasing comes first so every pattern below sees the final
    # casing; otherwise case folding can shift word boundaries (e.g.
    # "İ" -> "i" + combining dot) and a second pass would match more.
    text = _lower_except_masks(raw, compiled.masks) if rules.lowercase else raw

    # Mentions go before URLs: masking "@a_1http://x" the other way round
    # would leave "USER://x", which a second pass would read as a URL.
    text = _MENTION_RE.sub(rules.mention_token, text)

    def url(m: re.Match) -> str:
        s = m.group(0)
        stripped = s.rstrip(_URL_TRAILING)
        return rules.url_token + s[len(stripped):]

    text = _URL_RE.sub(url, text)

    def shortcode(m: re.Match) -> str:
        name = m.group(1).replace("_", "-").lower()
        return _words(name) if name in compiled.names else m.group(0)

    text = _SHORTCODE_RE.sub(shortcode, text)
    if compiled.emoji_re is not None:
        text = compiled.emoji_re.sub(lambda m: _words(rules.emoji_table[m.group(0)]), text)
    if diagnostics is not None:
        diagnostics.update(ch for ch in text if _is_pictograph(ch))
    return _WS_RE.sub(" ", text).strip()


def preprocess_many(texts: Iterable[str | None], rules: NormalizationRules = DEFAULT_RULES) -> list[str | None]:
    """Vectorised :func:`preprocess_text`; missing cells stay missing."""
    return [None if t is None else preprocess_text(t, rules) for t in texts]


def tokenize(text: str) -> list[str]:
    """Whitespace tokenization; punctuation stays attached."""
    return text.split()
