"""The cost model: one-call bounds, parallel latency, and optimal m.

Reproduces the two headline predictions analytically:
  * under quadratic (full-attention) per-call cost, total cost is
    minimized at m = L_sys, with per-n value 4 * L_sys;
  * under linear per-call latency with parallelism degree p, end-to-end
    latency follows ceil(k/p) * m, minimized at m = n/p (disjoint) or
    m = 2n/(p+1) (overlapping chunks).
"""

from algograph import (
    CostFunctions,
    CostModel,
    INFINITE,
    cost_single_call,
    latency_parallel,
    predict_optimal_m,
    subtask_cost_bound,
)

api = CostFunctions(kind="linear-api", c_pre=0.01, c_dec=0.03)
print("one call, 1000 prompt + 200 generated tokens at API prices:",
      cost_single_call(1000, 200, api))

lat = [120.0, 80.0, 95.0, 110.0, 70.0]
print("\nfive call latencies", lat)
for p in (1, 2, 4, INFINITE):
    print(f"  p={p}: end-to-end {latency_parallel(lat, p):.0f} ms")

quad = CostModel(functions=CostFunctions(kind="quadratic-flops", c_dec=0.0), l_sys=100)
print("\nquadratic per-call cost, L_sys=100, n=400:")
print(f"{'m':>5} {'per-n cost':>11}")
for m in (25, 50, 100, 200, 400):
    bound = subtask_cost_bound(400, m, lambda m: 0, quad, "sum")
    print(f"{m:>5} {bound / 400:>11.0f}")
best_m, best = predict_optimal_m(400, quad, "disjoint", lambda m: 0, "sum-cost",
                                 [25, 50, 100, 200, 400])
print(f"optimum: m={best_m} at per-n cost {best / 400:.0f} (= 4 * L_sys)")

linear = CostModel(functions=CostFunctions(kind="compute-bound-linear", c_dec=0.0), l_sys=0, p=4)
print("\nlinear per-call latency, n=200, p=4 (the zigzag):")
print(f"{'m':>5} {'latency':>8}")
for m in (10, 20, 40, 50, 67, 100, 200):
    print(f"{m:>5} {subtask_cost_bound(200, m, lambda m: 0, linear, 'parallel'):>8.0f}")
best_m, _ = predict_optimal_m(200, linear, "disjoint", lambda m: 0, "parallel-latency",
                              [10, 20, 40, 50, 67, 100, 200])
print(f"optimum: m={best_m} (= n/p)")

best_m, _ = predict_optimal_m(10_000, linear, "overlapping-half", lambda m: 0,
                              "parallel-latency", [1000, 2000, 2500, 4000, 5000, 10_000])
print(f"overlapping chunks, n=10000: optimum m={best_m} (= 2n/(p+1))")
