"""Word-level mask fillers.

The default filler is a smoothed bigram model built from a checkpoint:
either the built-in seed corpus, a plain-text/JSONL corpus file, or a
previously exported counts JSON. Masks are filled greedily left to
right with the top-scoring word (deterministic; ties break
alphabetically). An optional sampling mode draws from the candidate
distribution with a per-position seed, so even sampling is reproducible.

Setting the checkpoint to "hf:<model-dir>" uses a local transformers
fill-mask pipeline instead; that path needs the optional ML stack and is
never required by the tests.
"""

import hashlib
import json
import math
import random
from collections import Counter
from pathlib import Path

BOS = "<s>"
EOS = "</s>"
_SMOOTHING = 0.1
_MAX_VOCAB = 5000

SEED_SENTENCES = """\
the product arrived on time and worked exactly as described
this book was a pleasure to read from the first page to the last
i would recommend this to anyone who enjoys a good story
the battery lasts a very long time and charges quickly
my order was delayed but the support team was very helpful
the fabric feels soft and the color is exactly as shown
we have used this every day for a year and it still works
the screen is bright and the sound is clear
this is the best purchase i have made in a long time
the instructions were easy to follow and setup took a few minutes
the food was fresh and the service was quick and friendly
i was not happy with the quality of the material
the box arrived damaged but the item inside was fine
this tool is sturdy and feels good in the hand
the movie was long but the story kept me interested
a great value for the price and it ships fast
the keyboard is comfortable and the keys are quiet
i bought this as a gift and my friend loved it
the coffee tastes smooth and the aroma fills the kitchen
the seat is comfortable even after a long ride
the update fixed the problem and the app runs well now
this camera takes sharp pictures even in low light
the hotel room was clean and the staff was polite
i returned the item because it did not fit well
the game is fun for the whole family and easy to learn
the printer is fast and the ink lasts a long time
her advice was clear and it helped me finish the project
the garden looks great after we planted the new flowers
the recipe was simple and the meal turned out delicious
the trail was steep but the view from the top was worth it
the teacher explained the idea in a simple and clear way
the engine runs quiet and the ride feels smooth
this jacket keeps me warm and dry in the rain
the library was quiet and a good place to work
the meeting was short and we agreed on the plan
the software installs quickly and the interface is simple
the dog learned the trick after a few days of practice
the bread was warm and the soup was rich and tasty
the train was on time and the seats were comfortable
a small problem with the zipper but otherwise a great bag
"""


def _iter_checkpoint_lines(path: Path):
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if path.suffix == ".jsonl":
                rec = json.loads(line)
                text = rec.get("text", "")
                if text:
                    yield text
            else:
                yield line


class BigramFiller:
    """Smoothed bigram scorer over a fixed vocabulary."""

    def __init__(self, lines, model_id: str, sample: bool = False, temperature: float = 1.0):
        self.model_id = model_id
        self.sample = sample
        self.temperature = temperature
        unigrams = Counter()
        bigrams = Counter()
        for line in lines:
            tokens = [BOS] + line.split() + [EOS]
            for tok in tokens[1:-1]:
                unigrams[tok] += 1
            for prev, nxt in zip(tokens, tokens[1:]):
                bigrams[(prev, nxt)] += 1
        if not unigrams:
            raise ValueError("checkpoint contains no tokens")
        self.vocabulary = sorted(
            (w for w, _ in unigrams.most_common(_MAX_VOCAB)),
        )
        self.unigrams = unigrams
        self.bigrams = bigrams
        self.total = sum(unigrams.values())

    def _score(self, word: str, left: str | None, right: str | None) -> float:
        base = _SMOOTHING * self.unigrams[word] / self.total
        left_term = base + (self.bigrams.get((left, word), 0) if left is not None else 0)
        right_term = base + (self.bigrams.get((word, right), 0) if right is not None else 0)
        return left_term * right_term

    def _pick(self, left, right, seed_material: str) -> str:
        scored = [(self._score(w, left, right), w) for w in self.vocabulary]
        if not self.sample:
            return max(scored, key=lambda sw: (sw[0], sw[1]))[1]
        digest = hashlib.blake2b(seed_material.encode("utf-8"), digest_size=8).digest()
        rng = random.Random(int.from_bytes(digest, "big"))
        weights = [math.pow(s, 1.0 / self.temperature) for s, _ in scored]
        if sum(weights) <= 0:
            return scored[0][1]
        return rng.choices([w for _, w in scored], weights=weights, k=1)[0]

    def fill_text(self, text: str, mask_token: str) -> str:
        if mask_token not in text:
            return text
        tokens = text.split()
        for i, tok in enumerate(tokens):
            if tok != mask_token:
                continue
            left = tokens[i - 1] if i > 0 else BOS
            if left == mask_token:  # unreachable left-to-right, kept for safety
                left = None
            if i + 1 < len(tokens):
                right = tokens[i + 1] if tokens[i + 1] != mask_token else None
            else:
                right = EOS
            tokens[i] = self._pick(left, right, f"{text}\x1f{i}")
        return " ".join(tokens)

    def fill(self, texts, mask_token: str):
        return [self.fill_text(t, mask_token) for t in texts]


class TransformersFiller:
    """Fill-mask via a local transformers checkpoint; loaded lazily."""

    def __init__(self, checkpoint: str):
        from transformers import pipeline  # deferred: heavy optional dependency

        self.model_id = checkpoint
        self._pipe = pipeline("fill-mask", model=checkpoint)

    def fill_text(self, text: str, mask_token: str) -> str:
        model_mask = self._pipe.tokenizer.mask_token
        while mask_token in text:
            candidate = text.replace(mask_token, model_mask, 1)
            remainder = candidate.replace(mask_token, self._pipe.tokenizer.unk_token)
            best = self._pipe(remainder, top_k=1)[0]
            token = best["token_str"].strip()
            text = text.replace(mask_token, token if token else "the", 1)
        return text

    def fill(self, texts, mask_token: str):
        return [self.fill_text(t, mask_token) for t in texts]


def load_filler(checkpoint: str = "builtin", sample: bool = False, temperature: float = 1.0):
    """Build the filler named by `checkpoint`.

    "builtin" trains the bigram model on the embedded seed corpus; a path
    trains it on that file (.jsonl uses each record's text field); and
    "hf:<dir>" delegates to transformers.
    """
    if checkpoint.startswith("hf:"):
        return TransformersFiller(checkpoint[3:])
    if checkpoint == "builtin":
        lines = SEED_SENTENCES.splitlines()
        return BigramFiller(lines, "bigram-builtin", sample, temperature)
    path = Path(checkpoint)
    if not path.is_file():
        raise FileNotFoundError(f"checkpoint not found: {checkpoint}")
    return BigramFiller(
        _iter_checkpoint_lines(path), f"bigram:{path.name}", sample, temperature
    )
