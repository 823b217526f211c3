"""Procedurally generated word material: the coordination-game vocabulary with
its semantic-similarity oracle, and surreal scene descriptions for the
clue-guessing game.

Everything here is produced from seeded templates so runs are reproducible and
self-contained (no external corpora), and freshly generated material resists
memorization by learned agents.
"""

from __future__ import annotations

import difflib
from functools import lru_cache
from typing import Any

import numpy as np

from .core import make_rng

VOCAB_SEED = 0x5EEDF00D
VOCAB_SIZE = 60
_EMBED_DIM = 8

_ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"]
_NUCLEI = ["a", "e", "i", "o", "u"]
_CODAS = ["", "n", "r", "s", "l", "k"]


def _pseudo_word(rng: np.random.Generator) -> str:
    n_syll = int(rng.integers(2, 4))
    parts = []
    for _ in range(n_syll):
        parts.append(_ONSETS[rng.integers(len(_ONSETS))])
        parts.append(_NUCLEI[rng.integers(len(_NUCLEI))])
    parts.append(_CODAS[rng.integers(len(_CODAS))])
    return "".join(parts)


@lru_cache(maxsize=1)
def vocabulary() -> tuple[str, ...]:
    """The fixed coordination vocabulary (distinct pseudo-words)."""
    rng = make_rng(VOCAB_SEED)
    words: list[str] = []
    seen = set()
    while len(words) < VOCAB_SIZE:
        w = _pseudo_word(rng)
        if w not in seen:
            seen.add(w)
            words.append(w)
    return tuple(words)


@lru_cache(maxsize=1)
def similarity_matrix() -> np.ndarray:
    """Symmetric semantic-similarity oracle in [0, 1] with unit diagonal.

    Words get seeded latent positions on the unit sphere; similarity is the
    cosine mapped to [0, 1].
    """
    rng = make_rng(VOCAB_SEED + 1)
    emb = rng.standard_normal((VOCAB_SIZE, _EMBED_DIM))
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    sim = 0.5 * (1.0 + emb @ emb.T)
    sim = np.clip(sim, 0.0, 1.0)
    np.fill_diagonal(sim, 1.0)
    return sim


def word_index(word: str) -> int:
    return vocabulary().index(word)


def semantic_distance(word_a: str, word_b: str) -> float:
    """d = 1 - similarity; zero iff the words match exactly."""
    if word_a == word_b:
        return 0.0
    sim = similarity_matrix()
    return float(1.0 - sim[word_index(word_a), word_index(word_b)])


def nearest_token(candidate: str) -> str:
    """Map an out-of-vocabulary string to the nearest vocabulary token.

    Nearest is by string similarity (difflib ratio), ties broken
    lexicographically; deterministic.
    """
    vocab = vocabulary()
    if candidate in vocab:
        return candidate
    best = max(sorted(vocab), key=lambda w: difflib.SequenceMatcher(None, candidate, w).ratio())
    return best


@lru_cache(maxsize=1)
def _distance_strata() -> list[list[tuple[int, int]]]:
    # All unordered word pairs split into terciles of semantic distance.
    sim = similarity_matrix()
    n = sim.shape[0]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pairs.sort(key=lambda p: (1.0 - sim[p[0], p[1]], p))
    k = len(pairs) // 3
    return [pairs[:k], pairs[k : 2 * k], pairs[2 * k :]]


def sample_word_pair(rng: np.random.Generator, stratum: int) -> tuple[str, str, float]:
    """Draw a distinct starting pair from the given distance tercile."""
    bucket = _distance_strata()[stratum % 3]
    i, j = bucket[int(rng.integers(len(bucket)))]
    vocab = vocabulary()
    return vocab[i], vocab[j], semantic_distance(vocab[i], vocab[j])


# ---------------------------------------------------------------------------
# Surreal scene generation for the clue-guessing game
# ---------------------------------------------------------------------------

# (phrase, content tokens) per template slot; scene text combines one of each.
_OBJECTS = [
    ("grandfather clock", ("clock", "time", "old")),
    ("violin", ("violin", "music", "strings")),
    ("library", ("library", "books", "shelves")),
    ("staircase", ("staircase", "steps", "climb")),
    ("teacup", ("teacup", "porcelain", "drink")),
    ("train station", ("train", "station", "travel")),
    ("lighthouse", ("lighthouse", "beacon", "coast")),
    ("chess board", ("chess", "game", "pieces")),
    ("umbrella", ("umbrella", "rain", "shelter")),
    ("typewriter", ("typewriter", "keys", "letters")),
    ("carousel", ("carousel", "horses", "spin")),
    ("telescope", ("telescope", "stars", "lens")),
    ("piano", ("piano", "music", "ivory")),
    ("mirror", ("mirror", "reflection", "glass")),
    ("garden gate", ("gate", "garden", "iron")),
    ("hourglass", ("hourglass", "sand", "time")),
]

_TRANSFORMS = [
    ("melting slowly", ("melting", "liquid", "soft")),
    ("floating upside down", ("floating", "upside", "weightless")),
    ("made of water", ("water", "liquid", "ripple")),
    ("wrapped in ivy", ("ivy", "green", "overgrown")),
    ("glowing from within", ("glowing", "light", "inner")),
    ("frozen mid-fall", ("frozen", "falling", "still")),
    ("casting two shadows", ("shadows", "double", "dark")),
    ("singing to itself", ("singing", "voice", "sound")),
    ("folded like paper", ("paper", "folded", "crease")),
    ("growing feathers", ("feathers", "growing", "bird")),
    ("turning to sand", ("sand", "crumbling", "grains")),
    ("breathing slowly", ("breathing", "alive", "pulse")),
]

_SETTINGS = [
    ("over a park bench", ("park", "bench", "outdoors")),
    ("under two moons", ("moons", "night", "sky")),
    ("inside a seashell", ("seashell", "spiral", "ocean")),
    ("on a frozen lake", ("lake", "ice", "cold")),
    ("in a field of glass flowers", ("flowers", "glass", "field")),
    ("beneath a paper sky", ("sky", "paper", "above")),
    ("at the edge of a cliff", ("cliff", "edge", "drop")),
    ("in an empty theater", ("theater", "empty", "stage")),
    ("among marching chess pieces", ("marching", "chess", "formation")),
    ("inside a clock tower", ("tower", "gears", "bells")),
    ("on a silent carousel", ("carousel", "silent", "round")),
    ("under falling snow", ("snow", "falling", "white")),
]

DIXIT_SCENES = 6
DIXIT_BANK_MIN, DIXIT_BANK_MAX = 10, 15
DIXIT_CLUE_MIN, DIXIT_CLUE_MAX = 2, 4


def _scene(obj, transform, setting) -> dict[str, Any]:
    text = f"A {obj[0]} {transform[0]} {setting[0]}."
    tokens = sorted(set(obj[1]) | set(transform[1]) | set(setting[1]))
    return {"text": text, "tokens": tokens}


def sample_dixit_round(rng: np.random.Generator) -> dict[str, Any]:
    """One clue-guessing round: six scenes, a 1-based target, a word bank.

    The bank always contains the full token set of the target plus decoy
    tokens, so an informative clue is always available.
    """
    combos = set()
    scenes = []
    while len(scenes) < DIXIT_SCENES:
        key = (
            int(rng.integers(len(_OBJECTS))),
            int(rng.integers(len(_TRANSFORMS))),
            int(rng.integers(len(_SETTINGS))),
        )
        if key in combos:
            continue
        combos.add(key)
        scenes.append(_scene(_OBJECTS[key[0]], _TRANSFORMS[key[1]], _SETTINGS[key[2]]))

    target = int(rng.integers(1, DIXIT_SCENES + 1))
    bank = list(scenes[target - 1]["tokens"])
    decoy_tokens = sorted(
        {tok for i, s in enumerate(scenes) if i != target - 1 for tok in s["tokens"]}
        - set(bank)
    )
    bank_size = int(rng.integers(DIXIT_BANK_MIN, DIXIT_BANK_MAX + 1))
    n_extra = min(len(decoy_tokens), max(0, bank_size - len(bank)))
    if n_extra > 0:
        picks = rng.choice(len(decoy_tokens), size=n_extra, replace=False)
        bank.extend(decoy_tokens[i] for i in sorted(picks))
    return {"scenes": scenes, "target": target, "bank": bank}
