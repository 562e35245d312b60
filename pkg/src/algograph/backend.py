"""LLM backends: a parameterized deterministic mock and an HTTP client.

The mock backend is the package's main instrument.  It dispatches on the
``#task:`` tag embedded in prompts by the templates module, computes the
exact answer for the payload, and then degrades it according to a
MockProfile: per-item counting misses, sorted-list drops / perturbations /
adjacent swaps, and the two retrieval failure modes (missing a present
needle with probability p1(m); hallucinating an answer for an absent one
with probability p2(m) -- p2 = 0 models a Type-1 LLM, p2 > 0 a Type-2
LLM).  All randomness comes from the per-call seed, so identical
(prompt, profile, seed) always yields an identical exchange, and a
zero-rate profile is exact by construction.

Simulated latency is computed from a latency cost function, not measured,
matching how parallel latencies are derived in the analysis.  The HTTP
backend speaks the usual chat-completion wire format and measures real
wall-clock latency instead.
"""

from __future__ import annotations

import math
import os
import random
import re
import threading
import time
from dataclasses import dataclass, field, replace

import requests

from .costs import CostFunctions
from .errors import BackendError, InvalidConfigurationError
from . import templates

IDK = "I don't know"

API_KEY_ENV = "ALGOGRAPH_API_KEY"

_PASSCODE_SENTENCE = re.compile(r"The passcode to the ([a-z]+ [a-z]+) is (\d{6})\.")
_DIGIT_SENTENCE = re.compile(
    r"The (\d)-th digit of the passcode to the ([a-z]+ [a-z]+) is (\d)\."
)


def estimate_tokens(text: str) -> int:
    """Deterministic token estimate: ceil(len/4), 0 for empty text."""
    return (len(text) + 3) // 4


@dataclass(frozen=True)
class ChatExchange:
    """One LLM call: request, response, token counts and latency."""

    prompt_text: str
    response_text: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: float
    node_id: str = ""
    stage: str = ""


def _saturating(m: float, peak: float, tau: float) -> float:
    """peak * (1 - exp(-m/tau)); a constant ``peak`` when tau <= 0."""
    if peak <= 0:
        return 0.0
    if tau <= 0:
        return peak
    return peak * (1.0 - math.exp(-m / tau))


@dataclass(frozen=True)
class MockProfile:
    """Failure-model parameters for the mock backend.

    Rates are functions of the subtask size m with smooth monotone shapes:
    saturating exponentials for counting/sorting noise, a logistic curve
    for the first retrieval failure mode, and a constant for the second.
    """

    name: str = "custom"
    # counting: each digit missed / non-digit falsely counted with this rate
    count_rho_max: float = 0.0
    count_tau: float = 0.0
    verbose_counting: bool = False
    # sorting degradation
    drop_max: float = 0.0
    drop_tau: float = 0.0
    perturb_max: float = 0.0
    perturb_tau: float = 0.0
    perturb_scale: float = 0.0
    swap_max: float = 0.0
    swap_tau: float = 0.0
    sort_keep_monotone: bool = False
    # retrieval failure modes
    p1_max: float = 0.0
    p1_mid: float = 6000.0
    p1_scale: float = 1500.0
    p2_const: float = 0.0
    mode1_idk_fraction: float = 0.5
    # simulated latency per exchange
    latency: CostFunctions = field(
        default_factory=lambda: CostFunctions(kind="compute-bound-linear")
    )

    def __post_init__(self):
        for label in ("count_rho_max", "drop_max", "perturb_max", "swap_max",
                      "p1_max", "p2_const", "mode1_idk_fraction"):
            value = getattr(self, label)
            if not 0.0 <= value <= 1.0:
                raise InvalidConfigurationError(f"{label} must be in [0, 1], got {value}")

    def count_miss_rate(self, m: int) -> float:
        return _saturating(m, self.count_rho_max, self.count_tau)

    def drop_rate(self, m: int) -> float:
        return _saturating(m, self.drop_max, self.drop_tau)

    def perturb_rate(self, m: int) -> float:
        return _saturating(m, self.perturb_max, self.perturb_tau)

    def perturb_scale_at(self, m: int) -> float:
        return self.perturb_scale

    def swap_rate(self, m: int) -> float:
        return _saturating(m, self.swap_max, self.swap_tau)

    def retrieval_p1(self, m: int) -> float:
        if self.p1_max <= 0:
            return 0.0
        z = (m - self.p1_mid) / self.p1_scale
        if z > 700:
            return self.p1_max
        if z < -700:
            return 0.0
        return self.p1_max / (1.0 + math.exp(-z))

    def retrieval_p2(self, m: int) -> float:
        return self.p2_const


def _noisy(**overrides) -> MockProfile:
    base = dict(
        count_rho_max=0.1, count_tau=200.0,
        drop_max=0.05, drop_tau=100.0,
        perturb_max=0.3, perturb_tau=100.0, perturb_scale=0.05,
        swap_max=0.05, swap_tau=100.0,
        p1_max=1.0, p1_mid=6000.0, p1_scale=1500.0,
    )
    base.update(overrides)
    return MockProfile(**base)


PROFILES: dict[str, MockProfile] = {
    "exact": MockProfile(name="exact"),
    "noisy": _noisy(name="noisy"),
    "type1": _noisy(name="type1"),
    "type2": _noisy(name="type2", p2_const=0.25),
    "monotone-sort": MockProfile(
        name="monotone-sort",
        perturb_max=1.0, perturb_tau=0.0, perturb_scale=0.02,
        sort_keep_monotone=True,
    ),
}


def get_profile(name: str, **overrides) -> MockProfile:
    if name not in PROFILES:
        raise InvalidConfigurationError(
            f"unknown mock profile {name!r}; known: {sorted(PROFILES)}"
        )
    profile = PROFILES[name]
    return replace(profile, **overrides) if overrides else profile


# ---------------------------------------------------------------------------
# Task-level mock behaviors.  Each is deterministic in (profile, args, seed).

def mock_count(profile: MockProfile, substring: str, m: int, seed: int) -> int:
    """True digit count with independent per-character miscounts."""
    rng = random.Random(seed)
    rate = profile.count_miss_rate(m)
    count = 0
    for ch in substring:
        if ch.isdigit():
            count += 1 if (rate == 0.0 or rng.random() >= rate) else 0
        elif rate > 0.0 and rng.random() < rate:
            count += 1
    return count


def expected_count_abs_error(profile: MockProfile, digits: int, others: int, m: int) -> float:
    """E|error| of mock_count by exact convolution of the two binomials.

    The signed error is F - M with M ~ Bin(digits, rate) missed digits and
    F ~ Bin(others, rate) falsely counted non-digits.  Used as the
    independent oracle for the mock's counting statistics.
    """
    rate = profile.count_miss_rate(m)

    def pmf(k, size):
        return math.comb(size, k) * rate**k * (1 - rate) ** (size - k)

    total = 0.0
    for miss in range(digits + 1):
        for false in range(others + 1):
            total += abs(false - miss) * pmf(miss, digits) * pmf(false, others)
    return total


def mock_sort(profile: MockProfile, values, m: int, seed: int) -> list[float]:
    """Sorted copy degraded by drops, bounded perturbations, adjacent swaps."""
    rng = random.Random(seed)
    out = sorted(values)
    rate = profile.drop_rate(m)
    if rate > 0:
        out = [v for v in out if rng.random() >= rate]
    rate, scale = profile.perturb_rate(m), profile.perturb_scale_at(m)
    if rate > 0 and scale > 0:
        out = [v + rng.uniform(-scale, scale) if rng.random() < rate else v for v in out]
    if profile.sort_keep_monotone:
        out = sorted(out)
    rate = profile.swap_rate(m)
    if rate > 0:
        for i in range(len(out) - 1):
            if rng.random() < rate:
                out[i], out[i + 1] = out[i + 1], out[i]
    return out


def parse_passcode_sentences(text: str) -> list[tuple[str, str]]:
    """(object, passcode) for every complete passcode sentence in ``text``."""
    return _PASSCODE_SENTENCE.findall(text)


def parse_digit_sentences(text: str) -> list[tuple[str, int, str, str]]:
    """(object, position, digit, sentence) for complete digit sentences."""
    out = []
    for match in _DIGIT_SENTENCE.finditer(text):
        position, obj, digit = match.groups()
        out.append((obj, int(position), digit, match.group(0)))
    return out


def most_confusable(candidates: list[tuple[str, str]], target_object: str) -> str:
    """Passcode of the candidate object most easily confused with the target.

    Objects sharing the target's color or noun rank first (hallucinations
    gravitate toward lookalikes); ties break lexicographically, so every
    chunk containing the same lookalike blames the same passcode.
    """
    t_color, _, t_noun = target_object.partition(" ")

    def rank(item):
        obj, _ = item
        color, _, noun = obj.partition(" ")
        return (-(color == t_color) - (noun == t_noun), obj)

    return min(candidates, key=rank)[1]


def mock_retrieve(profile: MockProfile, chunk: str, target_object: str, m: int, seed: int) -> str:
    """Answer a passcode question from one chunk, with both failure modes.

    Needle present: returns the true passcode unless failure mode 1 fires
    (probability p1(m)), in which case the answer is "I don't know" or a
    wrong passcode.  Needle absent: failure mode 2 fires with probability
    p2(m) and returns the passcode of the chunk's most target-like
    confusable object.
    """
    rng = random.Random(seed)
    sentences = parse_passcode_sentences(chunk)
    needle_codes = [code for obj, code in sentences if obj == target_object]
    if needle_codes:
        if rng.random() >= profile.retrieval_p1(m):
            return needle_codes[0]
        if rng.random() < profile.mode1_idk_fraction:
            return IDK
        while True:
            wrong = "".join(rng.choice("0123456789") for _ in range(6))
            if wrong != needle_codes[0]:
                return wrong
    if rng.random() < profile.retrieval_p2(m):
        confusable = [(obj, code) for obj, code in sentences if obj != target_object]
        if confusable:
            return most_confusable(confusable, target_object)
    return IDK


def mock_rag_retrieve(
    profile: MockProfile, chunk: str, target_object: str, m: int, seed: int
) -> list[str]:
    """Per-sentence retrieval: misses each relevant sentence with p1(m),
    adds one confusable sentence with p2(m)."""
    rng = random.Random(seed)
    sentences = parse_digit_sentences(chunk)
    p1 = profile.retrieval_p1(m)
    out = []
    for obj, _, _, sentence in sentences:
        if obj == target_object and (p1 == 0.0 or rng.random() >= p1):
            out.append(sentence)
    if rng.random() < profile.retrieval_p2(m):
        confusable = [s for obj, _, _, s in sentences if obj != target_object]
        if confusable:
            out.append(rng.choice(confusable))
    return out


def mock_rag_aggregate(sentences: list[str], target_object: str, seed: int) -> str:
    """Assemble the passcode from retrieved sentences; '?' for unknown digits.

    Aggregation itself is error-free: upstream retrieval is where the
    profile injects failures.
    """
    digits = ["?"] * 6
    for sentence in sentences:
        for obj, position, digit, _ in parse_digit_sentences(sentence):
            if obj == target_object and 1 <= position <= 6:
                digits[position - 1] = digit
    return "".join(digits)


class MockBackend:
    """Deterministic chat backend dispatching on the prompt's task tag."""

    def __init__(self, profile: MockProfile):
        self.profile = profile

    def chat(self, prompt: str, *, seed: int) -> ChatExchange:
        tag = templates.read_tag(prompt)
        if tag == templates.TASK_TAGS["counting"]:
            payload = templates.read_payload(prompt)
            count = mock_count(self.profile, payload, len(payload), seed)
            if self.profile.verbose_counting:
                response = f"Scanned: {payload}. Count: {count}"
            else:
                response = str(count)
        elif tag == templates.TASK_TAGS["sorting"]:
            payload = templates.read_payload(prompt)
            values = [float(v) for v in payload.split(",")] if payload.strip() else []
            result = mock_sort(self.profile, values, len(values), seed)
            response = ", ".join(repr(v) for v in result)
        elif tag == templates.TASK_TAGS["retrieval"]:
            chunk = templates.read_payload(prompt)
            target = templates.read_question_object(prompt)
            response = mock_retrieve(self.profile, chunk, target, len(chunk), seed)
        elif tag == templates.TASK_TAGS["rag_retrieve"]:
            chunk = templates.read_payload(prompt)
            target = templates.read_question_object(prompt)
            found = mock_rag_retrieve(self.profile, chunk, target, len(chunk), seed)
            response = "\n".join(found) if found else "None"
        elif tag == templates.TASK_TAGS["rag_aggregate"]:
            notes = templates.read_payload(prompt)
            target = templates.read_question_object(prompt)
            lines = [line for line in notes.splitlines() if line.strip()]
            response = mock_rag_aggregate(lines, target, seed)
        else:
            raise InvalidConfigurationError(f"mock backend got unknown task tag {tag!r}")

        prompt_tokens = estimate_tokens(prompt)
        completion_tokens = estimate_tokens(response)
        latency = self.profile.latency.cost_pre(prompt_tokens) + self.profile.latency.cost_dec(
            prompt_tokens, completion_tokens
        )
        return ChatExchange(
            prompt_text=prompt,
            response_text=response,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            latency_ms=latency,
        )


class HttpBackend:
    """Chat-completion client for OpenAI-style endpoints.

    Sends {model, messages, temperature, seed}; reads
    choices[0].message.content and, when present, usage token counts.
    The credential comes from the ALGOGRAPH_API_KEY environment variable.
    """

    def __init__(
        self,
        url: str,
        model: str = "default",
        temperature: float = 0.0,
        max_retries: int = 3,
        backoff_s: float = 1.0,
        timeout_s: float = 120.0,
        max_in_flight: int = 4,
    ):
        self.url = url
        self.model = model
        self.temperature = temperature
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self.timeout_s = timeout_s
        self._gate = threading.Semaphore(max_in_flight)
        self._session = requests.Session()

    def chat(self, prompt: str, *, seed: int) -> ChatExchange:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": templates.strip_tag(prompt)}],
            "temperature": self.temperature,
            "seed": seed % (2**31),
        }
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(API_KEY_ENV)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"

        last_error = None
        for attempt in range(self.max_retries):
            if attempt:
                time.sleep(self.backoff_s * 2 ** (attempt - 1))
            started = time.monotonic()
            try:
                with self._gate:
                    resp = self._session.post(
                        self.url, json=body, headers=headers, timeout=self.timeout_s
                    )
                resp.raise_for_status()
                data = resp.json()
                content = data["choices"][0]["message"]["content"]
            except (requests.RequestException, KeyError, IndexError, ValueError) as err:
                last_error = err
                continue
            latency_ms = (time.monotonic() - started) * 1000.0
            usage = data.get("usage") or {}
            return ChatExchange(
                prompt_text=prompt,
                response_text=content,
                prompt_tokens=usage.get("prompt_tokens", estimate_tokens(prompt)),
                completion_tokens=usage.get("completion_tokens", estimate_tokens(content)),
                latency_ms=latency_ms,
            )
        raise BackendError(
            f"chat request to {self.url} failed after {self.max_retries} attempts: {last_error}"
        )
