"""Deterministic 64-bit seed derivation.

Every source of randomness in the package (mock backends, instance
generators, sweep trials) draws its seed through these functions, so a run
is fully reproducible from one base seed.  Derivation is a pure function of
its inputs: no global RNG state is shared between graph nodes, which makes
parallel node evaluation safe.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the splitmix64 avalanche; maps u64 -> u64."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stable_text_hash(text: str) -> int:
    """64-bit FNV-1a of ``text``; stable across processes and Python versions."""
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


def mix(*parts: int) -> int:
    """Fold integer parts into one 64-bit seed via repeated avalanching."""
    acc = 0
    for p in parts:
        acc = splitmix64(acc ^ (p & _MASK))
    return acc


def derive_node_seed(global_seed: int, node_id: str) -> int:
    """Per-node seed: pure function of the run seed and the node's id."""
    return mix(global_seed, stable_text_hash(node_id))


def derive_trial_seed(base_seed: int, n: int, m: int, trial: int) -> int:
    """Seed for one sweep trial, reproducible in isolation from its coordinates."""
    return mix(base_seed, n, m, trial)
