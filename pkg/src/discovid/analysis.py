"""
Hold/transition classification of an interval's start/end prompt pair.

A pair is a hold when the seeds match or the prompts carry the same phrase
multiset; otherwise it is a transition tagged along up to four dimensions:
color and time fire when a lexicon term appears in either prompt, style when
the two prompts use different style terms, and subject when the prompts
share no content words once lexicon terms and stopwords are stripped.

Term matching is longest-first with consumed spans masked, so "blue hour"
counts as a time term without also waking the color term "blue".
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .errors import EmptyCorpus
from .timeline import ImageSpec

HOLD = "hold"
TRANSITION = "transition"
DIMENSIONS = ("color", "time", "subject", "style")
UNCLASSIFIED = "unclassified"

_STOPWORDS = frozenset(
    "a an the of at in on over under with and or to by for from into through".split()
)

DEFAULT_COLOR_TERMS = frozenset({
    "red", "orange", "yellow", "green", "blue", "purple", "pink", "magenta",
    "teal", "violet", "indigo", "amber", "crimson", "scarlet", "turquoise",
    "golden", "silver", "gray", "grey", "neon", "saturated", "desaturated",
    "grayscale", "greyscale", "monochrome", "sepia", "technicolor",
    "colorful", "vibrant", "pastel", "rainbow", "black and white",
})

DEFAULT_TIME_TERMS = frozenset({
    "timelapse", "hyperlapse", "speedramp", "slow motion", "nocturnal glow",
    "blue hour", "golden hour", "sunset", "sunrise", "dawn", "dusk",
    "twilight", "midnight", "noon", "morning", "evening",
})

DEFAULT_STYLE_TERMS = frozenset({
    "watercolor", "oil painting", "photorealistic", "hyperrealistic",
    "cartoon", "anime", "sketch", "pencil drawing", "line art", "pixel art",
    "low poly", "3d render", "impressionist", "expressionist", "surrealist",
    "abstract", "cyberpunk", "steampunk", "vaporwave", "synthwave",
    "pop art", "minimalist", "baroque", "gothic", "stained glass", "mosaic",
    "graffiti", "claymation", "stop motion", "storybook illustration",
    "cel shading", "retro", "cinematic", "comic book", "ukiyo-e",
})


@dataclass(frozen=True)
class DimensionLexicons:
    color_terms: frozenset[str]
    time_terms: frozenset[str]
    style_terms: frozenset[str]

    def __post_init__(self):
        for name, terms in self.as_map().items():
            if not terms:
                raise ValueError(f"{name} lexicon is empty")
        combined = list(self.color_terms) + list(self.time_terms) + list(self.style_terms)
        if len(combined) != len(set(combined)):
            raise ValueError("lexicons must be disjoint")

    def as_map(self) -> dict[str, frozenset[str]]:
        return {"color": self.color_terms, "time": self.time_terms, "style": self.style_terms}


@dataclass(frozen=True)
class IntervalClassification:
    kind: str
    dimensions: frozenset[str]
    evidence: dict[str, tuple[str, ...]]


def default_lexicons() -> DimensionLexicons:
    return DimensionLexicons(
        color_terms=DEFAULT_COLOR_TERMS,
        time_terms=DEFAULT_TIME_TERMS,
        style_terms=DEFAULT_STYLE_TERMS,
    )


def load_lexicons(path: str) -> DimensionLexicons:
    """Lexicon override file: {"color": [...], "time": [...], "style": [...]}."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return DimensionLexicons(
        color_terms=frozenset(t.lower() for t in raw["color"]),
        time_terms=frozenset(t.lower() for t in raw["time"]),
        style_terms=frozenset(t.lower() for t in raw["style"]),
    )


def _phrase_multiset(prompt: str) -> tuple[str, ...]:
    return tuple(sorted(p.strip().lower() for p in prompt.split(",") if p.strip()))


def _scan(prompt: str, lexicons: DimensionLexicons) -> tuple[dict[str, set[str]], frozenset[str]]:
    """Match lexicon terms (longest first, no double-counting of spans) and
    return per-category matches plus the leftover content tokens."""
    text = prompt.lower()
    terms = []
    for category, vocab in lexicons.as_map().items():
        terms.extend((term, category) for term in vocab)
    terms.sort(key=lambda tc: (-len(tc[0].split()), -len(tc[0]), tc[0]))

    consumed = [False] * len(text)
    matches: dict[str, set[str]] = {"color": set(), "time": set(), "style": set()}
    for term, category in terms:
        for m in re.finditer(rf"\b{re.escape(term)}\b", text):
            if any(consumed[m.start() : m.end()]):
                continue
            for i in range(m.start(), m.end()):
                consumed[i] = True
            matches[category].add(term)

    residual = "".join(c if not consumed[i] else " " for i, c in enumerate(text))
    tokens = frozenset(
        tok for tok in re.findall(r"[a-z0-9']+", residual) if tok not in _STOPWORDS
    )
    return matches, tokens


def classify(start: ImageSpec, end: ImageSpec,
             lexicons: Optional[DimensionLexicons] = None) -> IntervalClassification:
    """Hold or transition verdict for one prompt/seed pair.

    Symmetric in its two arguments and invariant under phrase reordering
    within either prompt.
    """
    lexicons = lexicons or default_lexicons()

    if start.seed is not None and start.seed == end.seed:
        return IntervalClassification(HOLD, frozenset(), {"hold": ("same-seed",)})
    if _phrase_multiset(start.prompt) == _phrase_multiset(end.prompt):
        return IntervalClassification(HOLD, frozenset(), {"hold": ("same-keywords",)})

    matches_a, tokens_a = _scan(start.prompt, lexicons)
    matches_b, tokens_b = _scan(end.prompt, lexicons)

    dimensions: set[str] = set()
    evidence: dict[str, tuple[str, ...]] = {}

    for category in ("color", "time"):
        hits = matches_a[category] | matches_b[category]
        if hits:
            dimensions.add(category)
            evidence[category] = tuple(sorted(hits))

    if matches_a["style"] != matches_b["style"]:
        dimensions.add("style")
        evidence["style"] = tuple(sorted(matches_a["style"] ^ matches_b["style"]))

    if tokens_a and tokens_b and not (tokens_a & tokens_b):
        dimensions.add("subject")
        evidence["subject"] = (" ".join(sorted(tokens_a)), " ".join(sorted(tokens_b)))

    if not dimensions:
        evidence[UNCLASSIFIED] = ("no lexicon match",)
    return IntervalClassification(TRANSITION, frozenset(dimensions), evidence)


def corpus_report(pairs: list[tuple[ImageSpec, ImageSpec]],
                  lexicons: Optional[DimensionLexicons] = None) -> dict:
    """Dimension and hold-rule fractions over a corpus of prompt pairs."""
    if not pairs:
        raise EmptyCorpus("no prompt pairs to report on")
    lexicons = lexicons or default_lexicons()
    n = len(pairs)
    counts = {dim: 0 for dim in DIMENSIONS}
    holds = same_seed = same_keywords = 0
    for start, end in pairs:
        verdict = classify(start, end, lexicons)
        if verdict.kind == HOLD:
            holds += 1
            if verdict.evidence["hold"] == ("same-seed",):
                same_seed += 1
            else:
                same_keywords += 1
        else:
            for dim in verdict.dimensions:
                counts[dim] += 1
    report = {"pairs": n, "hold_fraction": holds / n,
              "hold_same_seed_fraction": same_seed / n,
              "hold_same_keywords_fraction": same_keywords / n}
    for dim in DIMENSIONS:
        report[f"{dim}_fraction"] = counts[dim] / n
    return report


def load_corpus(path: str) -> list[tuple[ImageSpec, ImageSpec]]:
    """Read a corpus file: [{"start": {"prompt", "seed"?}, "end": {...}}, ...].

    Extra keys per entry (hand labels and the like) are ignored.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    pairs = []
    for entry in raw:
        pairs.append((
            ImageSpec(prompt=entry["start"]["prompt"], seed=entry["start"].get("seed")),
            ImageSpec(prompt=entry["end"]["prompt"], seed=entry["end"].get("seed")),
        ))
    return pairs
