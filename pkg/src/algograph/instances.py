"""Random problem-instance generators for the four benchmark tasks.

Every generator is a pure function of (n, seed, options): the same inputs
always produce the same instance.  Haystack and RAG texts are built from a
fixed 12-color x 8-noun vocabulary; each object keeps one consistent
passcode within an instance, so a distractor object may recur in very long
texts without contradicting itself.

Instances serialize to a line-oriented text format (header, "---",
payload) so a failed trial can be replayed exactly.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import InvalidConfigurationError

COLORS = (
    "red", "green", "blue", "yellow", "purple", "orange",
    "black", "white", "brown", "pink", "gray", "cyan",
)
NOUNS = ("door", "lock", "box", "safe", "gate", "drawer", "chest", "cabinet")
OBJECTS = tuple(f"{color} {noun}" for color in COLORS for noun in NOUNS)

COUNTING_ALPHABET = string.digits + string.ascii_lowercase + string.ascii_uppercase

TASKS = ("counting", "sorting", "retrieval", "rag")


@dataclass(frozen=True)
class CountingInstance:
    text: str
    truth: int
    n: int
    seed: int
    task: str = "counting"


@dataclass(frozen=True)
class SortingInstance:
    values: tuple[float, ...]
    truth: tuple[float, ...]
    n: int
    seed: int
    task: str = "sorting"


@dataclass(frozen=True)
class HaystackInstance:
    text: str
    target_object: str
    truth: str
    needle_present: bool
    needle_span: tuple[int, int] | None
    n: int
    seed: int
    task: str = "retrieval"


@dataclass(frozen=True)
class RagInstance:
    text: str
    target_object: str
    truth: str
    needle_spans: tuple[tuple[int, int], ...]
    n: int
    seed: int
    task: str = "rag"


def passcode_sentence(obj: str, code: str) -> str:
    return f"The passcode to the {obj} is {code}."


def digit_sentence(obj: str, position: int, digit: str) -> str:
    return f"The {position}-th digit of the passcode to the {obj} is {digit}."


def generate_counting(n: int, seed: int) -> CountingInstance:
    if n < 1:
        raise InvalidConfigurationError(f"counting needs n >= 1, got {n}")
    rng = random.Random(seed)
    text = "".join(rng.choice(COUNTING_ALPHABET) for _ in range(n))
    truth = sum(ch.isdigit() for ch in text)
    return CountingInstance(text=text, truth=truth, n=n, seed=seed)


def generate_sorting(n: int, seed: int) -> SortingInstance:
    if n < 1:
        raise InvalidConfigurationError(f"sorting needs n >= 1, got {n}")
    rng = random.Random(seed)
    values = tuple(round(rng.random(), 2) for _ in range(n))
    return SortingInstance(values=values, truth=tuple(sorted(values)), n=n, seed=seed)


def _cycled_distractors(rng: random.Random, pool: list) -> Iterator:
    """Yield pool items in shuffled order, reshuffling whenever exhausted."""
    while True:
        batch = pool[:]
        rng.shuffle(batch)
        yield from batch


def generate_haystack(n: int, seed: int, needle_present: bool = True) -> HaystackInstance:
    """A haystack of alike passcode sentences, optionally hiding the needle."""
    rng = random.Random(seed)
    target = rng.choice(OBJECTS)
    codes = {target: "".join(rng.choice(string.digits) for _ in range(6))}

    def code_for(obj):
        if obj not in codes:
            codes[obj] = "".join(rng.choice(string.digits) for _ in range(6))
        return codes[obj]

    needle = passcode_sentence(target, codes[target])
    if n < len(needle):
        raise InvalidConfigurationError(
            f"haystack needs n >= {len(needle)} (one sentence), got {n}"
        )

    budget = n - (len(needle) + 1 if needle_present else 0)
    distractors: list[str] = []
    pool = [obj for obj in OBJECTS if obj != target]
    for obj in _cycled_distractors(rng, pool):
        sentence = passcode_sentence(obj, code_for(obj))
        used = sum(len(s) + 1 for s in distractors)
        if used + len(sentence) > budget:
            # a needle-free haystack must still hold at least one sentence
            if not distractors and not needle_present:
                distractors.append(sentence)
            break
        distractors.append(sentence)

    sentences = distractors
    span = None
    if needle_present:
        at = rng.randrange(len(distractors) + 1)
        sentences = distractors[:at] + [needle] + distractors[at:]
    text = " ".join(sentences)
    if needle_present:
        start = text.index(needle)
        span = (start, start + len(needle))
    return HaystackInstance(
        text=text,
        target_object=target,
        truth=codes[target],
        needle_present=needle_present,
        needle_span=span,
        n=n,
        seed=seed,
    )


def generate_rag(n: int, seed: int) -> RagInstance:
    """Six digit-sentences for the target scattered among alike distractors."""
    rng = random.Random(seed)
    target = rng.choice(OBJECTS)
    codes = {target: "".join(rng.choice(string.digits) for _ in range(6))}

    def code_for(obj):
        if obj not in codes:
            codes[obj] = "".join(rng.choice(string.digits) for _ in range(6))
        return codes[obj]

    needles = [digit_sentence(target, i + 1, codes[target][i]) for i in range(6)]
    min_n = sum(len(s) + 1 for s in needles) - 1
    if n < min_n:
        raise InvalidConfigurationError(f"rag needs n >= {min_n} (six sentences), got {n}")

    budget = n - sum(len(s) + 1 for s in needles)
    distractors: list[str] = []
    pool = [(obj, i) for obj in OBJECTS if obj != target for i in range(1, 7)]
    for obj, position in _cycled_distractors(rng, pool):
        sentence = digit_sentence(obj, position, code_for(obj)[position - 1])
        used = sum(len(s) + 1 for s in distractors)
        if used + len(sentence) > budget:
            break
        distractors.append(sentence)

    sentences = distractors[:]
    # Inserting at ascending slots places needle i at final position slots[i].
    slots = sorted(rng.sample(range(len(sentences) + 6), 6))
    for slot, needle in zip(slots, needles):
        sentences.insert(slot, needle)
    text = " ".join(sentences)
    spans = []
    for needle in needles:
        start = text.index(needle)
        spans.append((start, start + len(needle)))
    return RagInstance(
        text=text,
        target_object=target,
        truth=codes[target],
        needle_spans=tuple(spans),
        n=n,
        seed=seed,
    )


def generate_instance(task: str, n: int, seed: int, **options):
    """Dispatching front-end over the four per-task generators."""
    if task == "counting":
        return generate_counting(n, seed)
    if task == "sorting":
        return generate_sorting(n, seed)
    if task == "retrieval":
        return generate_haystack(n, seed, options.get("needle_present", True))
    if task == "rag":
        return generate_rag(n, seed)
    raise InvalidConfigurationError(f"unknown task {task!r}; expected one of {TASKS}")


# ---------------------------------------------------------------------------
# Replay serialization: header key=value lines, "---", then the payload.

def dump_instance(instance, path) -> None:
    header = {"format": "algograph-instance/v1", "task": instance.task,
              "n": instance.n, "seed": instance.seed}
    if instance.task == "counting":
        header["truth"] = instance.truth
        payload = instance.text
    elif instance.task == "sorting":
        payload = ", ".join(repr(v) for v in instance.values)
    elif instance.task == "retrieval":
        header["target_object"] = instance.target_object
        header["truth"] = instance.truth
        header["needle_present"] = instance.needle_present
        if instance.needle_span:
            header["needle_span"] = f"{instance.needle_span[0]}:{instance.needle_span[1]}"
        payload = instance.text
    else:
        header["target_object"] = instance.target_object
        header["truth"] = instance.truth
        header["needle_spans"] = ",".join(f"{a}:{b}" for a, b in instance.needle_spans)
        payload = instance.text
    lines = [f"{key}={value}" for key, value in header.items()]
    Path(path).write_text("\n".join(lines) + "\n---\n" + payload, encoding="utf-8")


def load_instance(path):
    raw = Path(path).read_text(encoding="utf-8")
    head, sep, payload = raw.partition("\n---\n")
    if not sep:
        raise InvalidConfigurationError(f"{path}: not an instance file (missing --- separator)")
    header = {}
    for line in head.splitlines():
        key, _, value = line.partition("=")
        header[key] = value
    task = header.get("task")
    n, seed = int(header["n"]), int(header["seed"])
    if task == "counting":
        return CountingInstance(text=payload, truth=int(header["truth"]), n=n, seed=seed)
    if task == "sorting":
        values = tuple(float(v) for v in payload.split(",")) if payload else ()
        return SortingInstance(values=values, truth=tuple(sorted(values)), n=n, seed=seed)
    if task == "retrieval":
        span = None
        if "needle_span" in header:
            a, _, b = header["needle_span"].partition(":")
            span = (int(a), int(b))
        return HaystackInstance(
            text=payload,
            target_object=header["target_object"],
            truth=header["truth"],
            needle_present=header["needle_present"] == "True",
            needle_span=span,
            n=n,
            seed=seed,
        )
    if task == "rag":
        spans = tuple(
            (int(a), int(b))
            for a, b in (part.split(":") for part in header["needle_spans"].split(","))
        )
        return RagInstance(
            text=payload,
            target_object=header["target_object"],
            truth=header["truth"],
            needle_spans=spans,
            n=n,
            seed=seed,
        )
    raise InvalidConfigurationError(f"{path}: unknown task {task!r}")
