#!/usr/bin/env python3
"""Regenerate the bundled sample corpus at data/sports/cup-final.jsonl.

The corpus is deterministic (fixed seed): 60 small sports articles whose
sentences introduce topic words mostly early, so novelty curves look
log-like and divergence curves carry a visible jump. Run from the repo
root; the checked-in file should only change if this script changes.
"""

import json
import random
from pathlib import Path

SUBJECT = "sports"
CORPUS_ID = "cup-final"
SEED = 20260808

SHARED_NOUNS = [
    "cup", "final", "stadium", "goal", "match", "team", "coach", "striker",
    "keeper", "defender", "crowd", "referee", "penalty", "trophy", "league",
    "season", "captain", "midfield", "title", "victory",
]

LOCAL_NOUNS = [
    "rain", "anthem", "banner", "tunnel", "whistle", "scoreboard", "bench",
    "corner", "header", "tackle", "injury", "substitute", "extra", "chant",
    "flag", "ticket", "pitch", "floodlight", "replay", "handshake", "medal",
    "press", "locker", "warmup", "drill", "scout", "transfer", "contract",
    "derby", "upset",
]

VERBS = [
    "scored", "lifted", "defended", "celebrated", "pressed", "chased",
    "blocked", "saved", "launched", "controlled", "studied", "praised",
]

OPENERS = [
    "The {a} {v} the {b} before the {c} roared.",
    "A tense {a} saw the {b} {v} early.",
    "Under the {c}, the {a} {v} a decisive {b}.",
    "Fans watched the {a} as the {b} was {v}.",
    "The {a} and the {b} met near the {c}.",
]

FOLLOWERS = [
    "Later the {a} {v} another {b}.",
    "The {a} kept its shape while the {b} {v}.",
    "Reporters noted that the {a} {v} the {b} again.",
    "Nobody expected the {a} to reach the {b} so soon.",
    "The {a} answered with a {b} of its own.",
    "Its {a} was {v} by the tired {b}.",
]


def make_sentence(rng: random.Random, template: str, pool: list[str]) -> str:
    a, b, c = rng.sample(pool, 3)
    return template.format(a=a, b=b, c=c, v=rng.choice(VERBS))


def make_article(rng: random.Random, number: int) -> dict:
    specific = rng.sample(LOCAL_NOUNS, rng.randint(3, 5))
    pool = rng.sample(SHARED_NOUNS, rng.randint(6, 9)) + specific
    sentence_count = rng.randint(7, 12)
    sentences = [make_sentence(rng, rng.choice(OPENERS), pool)]
    for _ in range(sentence_count - 1):
        sentences.append(make_sentence(rng, rng.choice(FOLLOWERS), pool))
    paragraphs: list[str] = []
    i = 0
    while i < sentence_count:
        size = min(rng.randint(2, 4), sentence_count - i)
        paragraphs.append(" ".join(sentences[i : i + size]))
        i += size
    return {
        "id": f"match-{number:03d}",
        "corpus_id": CORPUS_ID,
        "subject": SUBJECT,
        "title": f"Report {number}: {rng.choice(pool)} and {rng.choice(pool)}",
        "body": "\n\n".join(paragraphs),
    }


def main() -> None:
    rng = random.Random(SEED)
    out_dir = Path(__file__).resolve().parent.parent / "data" / SUBJECT
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{CORPUS_ID}.jsonl"
    with path.open("w", encoding="utf-8") as handle:
        for number in range(1, 61):
            handle.write(json.dumps(make_article(rng, number), ensure_ascii=False))
            handle.write("\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
