"""
Prompt manipulation and ideation: phrase-shuffle variations, seed fallback,
subject brainstorming through a text-completion client, and style keyword
sampling.

A prompt is an ordered list of comma-delimited phrases; shuffling those
phrases (with the seed held constant) is what produces image variations.
"""

from __future__ import annotations

import hashlib
import itertools
import os
import random
import time
from dataclasses import dataclass, replace

import requests

from .errors import BackendUnavailable, UnparseableResponse
from .styles import DEFAULT_STYLE_KEYWORDS
from .timeline import ImageSpec

BRAINSTORM_TEMPLATE = "In less than 5 words, describe an image for the following words {description}."
SUBJECT_COUNT = 3
SUBJECT_MAX_WORDS = 5
FALLBACK_SEED_COUNT = 3
STYLE_LEXICON_SIZE = 100

LLM_URL_ENV = "DISCO_LLM_URL"
LLM_KEY_ENV = "DISCO_LLM_KEY"
LLM_MODEL_ENV = "DISCO_LLM_MODEL"


@dataclass(frozen=True)
class Prompt:
    phrases: tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> "Prompt":
        phrases = tuple(p.strip() for p in text.split(","))
        if not phrases or any(not p for p in phrases):
            raise ValueError(f"prompt needs nonempty comma-delimited phrases: {text!r}")
        return cls(phrases=phrases)

    def text(self) -> str:
        return ", ".join(self.phrases)


@dataclass(frozen=True)
class StyleLexicon:
    keywords: tuple[str, ...]

    def __post_init__(self):
        if len(self.keywords) != STYLE_LEXICON_SIZE:
            raise ValueError(f"style lexicon needs exactly {STYLE_LEXICON_SIZE} keywords, got {len(self.keywords)}")
        if len(set(self.keywords)) != len(self.keywords):
            raise ValueError("style lexicon keywords must be unique")
        if any(k != k.lower() for k in self.keywords):
            raise ValueError("style lexicon keywords must be lowercase")


@dataclass(frozen=True)
class BrainstormResult:
    subjects: tuple[str, ...]
    styles: tuple[str, ...]


def default_style_lexicon() -> StyleLexicon:
    return StyleLexicon(keywords=DEFAULT_STYLE_KEYWORDS)


def load_style_lexicon(path: str) -> StyleLexicon:
    """Read a replacement lexicon: one keyword per line, blanks ignored."""
    with open(path, encoding="utf-8") as fh:
        keywords = tuple(line.strip() for line in fh if line.strip())
    return StyleLexicon(keywords=keywords)


class SeedSource:
    """Deterministic stream of generation seeds.

    Seeded from the wall clock by default; pass an explicit seed (CLI
    --seed / DISCO_SEED) to replay a session.
    """

    def __init__(self, seed: int | None = None):
        if seed is None:
            seed = time.time_ns()
        self.seed = seed
        self._rng = random.Random(seed)

    def next_seed(self) -> int:
        return self._rng.randrange(2**31)


def shuffle_variations(prompt: Prompt, k: int, rng: random.Random | None = None) -> list[Prompt]:
    """Up to k reorderings of the prompt's phrases.

    Every result is a permutation of the same phrase multiset, distinct from
    the input and from each other. When fewer distinct permutations exist
    (single phrase, duplicated phrases) the shorter list is returned.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = rng or random.Random()
    n = len(prompt.phrases)
    if n <= 7:  # small enough to enumerate all orderings
        candidates = {p for p in itertools.permutations(prompt.phrases) if p != prompt.phrases}
        picked = rng.sample(sorted(candidates), min(k, len(candidates)))
        return [Prompt(phrases=p) for p in picked]
    seen = {prompt.phrases}
    out = []
    attempts = 0
    while len(out) < k and attempts < 50 * k:
        attempts += 1
        shuffled = list(prompt.phrases)
        rng.shuffle(shuffled)
        candidate = tuple(shuffled)
        if candidate not in seen:
            seen.add(candidate)
            out.append(Prompt(phrases=candidate))
    return out


def resolve_seeds(spec: ImageSpec, source: SeedSource) -> list[ImageSpec]:
    """Pin down the seed: pass through a concrete one, or draw three distinct
    fallback seeds for an absent one."""
    if spec.seed is not None:
        return [spec]
    seeds: list[int] = []
    while len(seeds) < FALLBACK_SEED_COUNT:
        candidate = source.next_seed()
        if candidate not in seeds:
            seeds.append(candidate)
    return [replace(spec, seed=s) for s in seeds]


# --------------------------------------------------------------------------
# Brainstorming client
# --------------------------------------------------------------------------

class HttpLlmClient:
    """Minimal text-completion client: POST {model, prompt} -> {text}."""

    def __init__(self, url: str, api_key: str | None = None, model: str = "default",
                 timeout_sec: float = 30.0):
        self.url = url
        self.api_key = api_key
        self.model = model
        self.timeout_sec = timeout_sec

    def complete(self, prompt: str) -> str:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                self.url,
                json={"model": self.model, "prompt": prompt},
                headers=headers,
                timeout=self.timeout_sec,
            )
        except requests.RequestException as exc:
            raise BackendUnavailable(f"LLM endpoint unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise BackendUnavailable(f"LLM endpoint returned {resp.status_code}")
        body = resp.json()
        if "text" not in body:
            raise UnparseableResponse("LLM response missing 'text'")
        return body["text"]


_STUB_ADJECTIVES = (
    "neon", "golden", "misty", "velvet", "electric",
    "pastel", "crimson", "silver", "lunar", "radiant",
)
_STUB_NOUNS = (
    "dancers", "skyline", "robots", "tides", "lanterns",
    "jungle", "orchestra", "meteors", "garden", "mirrors",
)
_STUB_SETTINGS = (
    "at dusk", "in rain", "under strobe lights", "over water", "in fog",
    "on stage", "at midnight", "in motion", "under stars", "in bloom",
)


class StubLlmClient:
    """Offline stand-in: canned suggestions derived from a hash of the prompt.

    Same prompt always yields the same numbered triple, so sessions replay.
    """

    def complete(self, prompt: str) -> str:
        digest = hashlib.sha256(prompt.encode("utf-8")).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        combos: set[tuple[str, str, str]] = set()
        while len(combos) < SUBJECT_COUNT:
            combos.add((rng.choice(_STUB_ADJECTIVES), rng.choice(_STUB_NOUNS), rng.choice(_STUB_SETTINGS)))
        lines = [f"{i}. {adj} {noun} {where}" for i, (adj, noun, where) in enumerate(sorted(combos), start=1)]
        return "\n".join(lines)


def make_llm_client():
    """HTTP client when DISCO_LLM_URL is set, otherwise the offline stub."""
    url = os.environ.get(LLM_URL_ENV)
    if not url:
        return StubLlmClient()
    return HttpLlmClient(
        url=url,
        api_key=os.environ.get(LLM_KEY_ENV),
        model=os.environ.get(LLM_MODEL_ENV, "default"),
    )


def _parse_suggestions(text: str) -> list[str]:
    suggestions = []
    for line in text.splitlines():
        line = line.strip()
        # tolerate numbered lists, bullets, or bare lines
        line = line.lstrip("-*•").strip()
        if line and line[0].isdigit():
            head = line.split(None, 1)
            if head[0].rstrip(".)").isdigit():
                line = head[1].strip() if len(head) > 1 else ""
        if line:
            words = line.split()
            suggestions.append(" ".join(words[:SUBJECT_MAX_WORDS]))
    return suggestions


def brainstorm_subjects(description: str, client) -> list[str]:
    """Three short subject suggestions for a description of the interval.

    Sends the completion template with the description substituted and
    parses the reply leniently; each suggestion is clipped to 5 words.

    Raises:
        UnparseableResponse: fewer than 3 suggestions in the reply.
        BackendUnavailable: propagated from the client.
    """
    if not description.strip():
        raise ValueError("description must be nonempty")
    reply = client.complete(BRAINSTORM_TEMPLATE.format(description=description))
    suggestions = _parse_suggestions(reply)
    if len(suggestions) < SUBJECT_COUNT:
        raise UnparseableResponse(f"expected {SUBJECT_COUNT} suggestions, parsed {len(suggestions)}")
    return suggestions[:SUBJECT_COUNT]


def sample_styles(lexicon: StyleLexicon, n: int, rng: random.Random | int | None = None) -> list[str]:
    """n distinct style keywords, uniform without replacement."""
    if not 1 <= n <= len(lexicon.keywords):
        raise ValueError(f"n must be in 1..{len(lexicon.keywords)}")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    return rng.sample(list(lexicon.keywords), n)


def brainstorm(description: str, client, lexicon: StyleLexicon, n_styles: int = 6,
               rng: random.Random | int | None = None) -> BrainstormResult:
    """Subjects from the language model plus sampled style keywords."""
    subjects = brainstorm_subjects(description, client)
    styles = sample_styles(lexicon, n_styles, rng)
    return BrainstormResult(subjects=tuple(subjects), styles=tuple(styles))
