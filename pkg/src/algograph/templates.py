"""Prompt templates shared by the mock and HTTP backends.

Each prompt starts with a structured ``#task:<name>`` tag line that the
mock backend dispatches on; the HTTP client strips that line before
sending, so real models see only the natural-language prompt.  Payloads
are fenced between ``<<<`` and ``>>>`` lines so both the mock and the
response parsers can recover them exactly.
"""

from __future__ import annotations

TEMPLATE_VERSION = 1

TAG_PREFIX = "#task:"
FENCE_OPEN = "<<<"
FENCE_CLOSE = ">>>"

TASK_TAGS = {
    "counting": "count_digits",
    "sorting": "sort_numbers",
    "retrieval": "find_passcode",
    "rag_retrieve": "find_passcode_sentences",
    "rag_aggregate": "assemble_passcode",
}


def counting_prompt(segment: str) -> str:
    return (
        f"{TAG_PREFIX}{TASK_TAGS['counting']}\n"
        "You are a meticulous assistant for character-level text analysis.\n"
        "Count how many characters in the text between the markers are decimal digits (0-9).\n"
        "Reply with the count as a single integer and nothing else.\n"
        f"{FENCE_OPEN}\n{segment}\n{FENCE_CLOSE}"
    )


def sorting_prompt(values: list[float]) -> str:
    rendered = ", ".join(repr(v) for v in values)
    return (
        f"{TAG_PREFIX}{TASK_TAGS['sorting']}\n"
        "You are a meticulous assistant for list manipulation.\n"
        "Sort the comma-separated numbers between the markers in ascending order.\n"
        "Reply with the sorted numbers, comma-separated, and nothing else.\n"
        f"{FENCE_OPEN}\n{rendered}\n{FENCE_CLOSE}"
    )


def retrieval_prompt(chunk: str, target_object: str) -> str:
    return (
        f"{TAG_PREFIX}{TASK_TAGS['retrieval']}\n"
        "You are a careful assistant that answers strictly from the provided text.\n"
        f"Question: What is the passcode to the {target_object}?\n"
        "If the text between the markers does not contain the answer, reply exactly"
        " \"I don't know\". Otherwise reply with the 6-digit passcode only.\n"
        f"{FENCE_OPEN}\n{chunk}\n{FENCE_CLOSE}"
    )


def rag_retrieve_prompt(chunk: str, target_object: str) -> str:
    return (
        f"{TAG_PREFIX}{TASK_TAGS['rag_retrieve']}\n"
        "You are a careful assistant that extracts evidence from the provided text.\n"
        f"Question: What is the 6-digit passcode to the {target_object}?\n"
        "Copy every sentence between the markers that helps answer the question,"
        " one sentence per line. Reply exactly \"None\" if there is no such sentence.\n"
        f"{FENCE_OPEN}\n{chunk}\n{FENCE_CLOSE}"
    )


def rag_aggregate_prompt(sentences: list[str], target_object: str) -> str:
    notes = "\n".join(sentences)
    return (
        f"{TAG_PREFIX}{TASK_TAGS['rag_aggregate']}\n"
        "You are a careful assistant that reasons over retrieved notes.\n"
        f"Question: What is the 6-digit passcode to the {target_object}?\n"
        "Use only the notes between the markers. Reply with the 6-digit passcode,"
        " writing ? for every digit the notes do not determine.\n"
        f"{FENCE_OPEN}\n{notes}\n{FENCE_CLOSE}"
    )


def read_tag(prompt: str) -> str | None:
    """Task tag of a prompt, or None when the prompt is untagged."""
    first = prompt.split("\n", 1)[0]
    if first.startswith(TAG_PREFIX):
        return first[len(TAG_PREFIX):].strip()
    return None


def strip_tag(prompt: str) -> str:
    """Prompt without its tag line, as sent to HTTP backends."""
    if read_tag(prompt) is None:
        return prompt
    return prompt.split("\n", 1)[1] if "\n" in prompt else ""


def read_payload(prompt: str) -> str:
    """The text fenced between the payload markers."""
    open_at = prompt.index(f"{FENCE_OPEN}\n") + len(FENCE_OPEN) + 1
    close_at = prompt.rindex(f"\n{FENCE_CLOSE}")
    return prompt[open_at:close_at]


def read_question_object(prompt: str) -> str:
    """The object named in the prompt's question line."""
    for line in prompt.splitlines():
        if line.startswith("Question:"):
            head, _, _ = line.partition("?")
            return head[head.rindex(" the ") + len(" the "):]
    raise ValueError("prompt has no question line")
