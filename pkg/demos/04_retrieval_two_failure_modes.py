"""Needle-in-a-haystack retrieval: Type-1 vs Type-2 model behavior.

A Type-1 model only misses present needles (worse for large chunks); a
Type-2 model also hallucinates passcodes for absent ones (worse for many
small chunks, since false positives pile up in the majority vote).  The
error curve over chunk size m is monotone for Type-1 and U-shaped for
Type-2 -- the same qualitative shapes the cost/error analysis predicts.
"""

import numpy as np

from algograph import (
    MockBackend,
    generate_instance,
    get_profile,
    retrieval_error,
    solve_retrieval,
)
from algograph.seeding import derive_trial_seed, mix

n = 10_000
grid = [1000, 2000, 4000, 10_000]
trials = 60

for name in ("type1", "type2"):
    backend = MockBackend(get_profile(name))
    print(f"\n{name} profile (p2={backend.profile.p2_const}):")
    print(f"{'m':>7} {'mean error':>11}")
    for m in grid:
        errors = []
        for t in range(trials):
            seed = derive_trial_seed(4, n, m, t)
            inst = generate_instance("retrieval", n, mix(seed, 1))
            answer, _ = solve_retrieval(inst, m, backend, seed=mix(seed, 2))
            errors.append(retrieval_error(answer, inst.truth))
        print(f"{m:>7} {np.mean(errors):>11.3f}")

print("\ntie handling: an h-way tie containing the truth scores 1 - 1/h")
from algograph import majority_vote  # noqa: E402

votes = ["111111", "222222", "111111", "222222", "I don't know"]
answer = majority_vote(votes)
print(f"votes {votes}\n-> answer {answer}, error {retrieval_error(answer, '111111')}")
