"""Sentence-level RAG with an LLM aggregation call and partial answers.

Each chunk call retrieves relevant digit-sentences; a final LLM call
assembles the 6-digit passcode, writing '?' for digits never retrieved.
The aggregation prompt stays tiny regardless of the haystack size, which
is exactly why its cost term is a constant in the cost bound.
"""

from algograph import MockBackend, generate_instance, get_profile, rag_errors, solve_rag
from algograph.backend import MockProfile

inst = generate_instance("rag", 2400, seed=21)
print("target:", inst.target_object, "| truth:", inst.truth)

answer, trace = solve_rag(inst, 600, MockBackend(get_profile("exact")), seed=2)
agg = [e for e in trace.exchanges if e.stage == "aggregate"][0]
print(f"exact mock  -> {answer} (errors {rag_errors(answer, inst.truth)})")
print(f"  {len(trace.exchanges) - 1} retrieval calls + 1 aggregation call"
      f" ({agg.prompt_tokens} prompt tokens)")

# Cripple retrieval entirely: every digit is missed, the answer degrades
# to all-unknown, and the aggregation prompt carries zero sentences.
blind = MockBackend(MockProfile(p1_max=1.0, p1_mid=-1e9, p1_scale=1.0))
answer, trace = solve_rag(inst, 600, blind, seed=2)
agg = [e for e in trace.exchanges if e.stage == "aggregate"][0]
print(f"\nblind mock  -> {answer} (errors {rag_errors(answer, inst.truth)})")
print(f"  aggregation prompt shrank to {agg.prompt_tokens} tokens")

# Halfway: miss roughly half the digits per chunk.
flaky = MockBackend(MockProfile(p1_max=1.0, p1_mid=600, p1_scale=1e-9))
answer, _ = solve_rag(inst, 600, flaky, seed=2)
print(f"\nflaky mock  -> {answer} ('?' marks digits never retrieved)")
