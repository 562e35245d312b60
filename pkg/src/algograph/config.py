"""Sweep configuration files: parsing, validation, and object construction.

Configs are plain INI-style text (sections of key = value lines) so they
stay reviewable in diffs.  Validation errors cite the file, line number
and key.  A minimal counting sweep looks like:

    [sweep]
    task = counting
    mode = vary-m
    n = 200
    m_values = 10 20 40 50 100 200
    trials = 10
    base_seed = 42

    [backend]
    kind = mock
    profile = exact

    [cost_model]
    kind = compute-bound-linear
    l_sys = 40
    p = 4

Optional sections: [profile] overrides mock-profile parameters by field
name; [backend] kind = http adds url / model / temperature keys.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .backend import HttpBackend, MockBackend, MockProfile, get_profile
from .costs import COST_KINDS, CostFunctions, CostModel
from .errors import ConfigFileError
from .instances import TASKS

MODES = ("vary-n", "vary-m")


@dataclass
class SweepConfig:
    task: str
    mode: str
    n: int | None
    n_values: list[int]
    m_values: list[int]
    trials: int
    base_seed: int
    backend_kind: str
    profile_name: str
    profile_overrides: dict
    http_url: str | None
    http_model: str
    temperature: float
    http_max_retries: int
    http_backoff_s: float
    cost: CostModel
    extra_p: list[int] = field(default_factory=list)
    workers: int = 1
    out: str | None = None
    merge_mode: str = "hierarchical"
    needle_present: bool = True
    dump_instances: str | None = None
    source_path: str | None = None
    source_text: str | None = None

    def grid(self) -> list[tuple[int, int]]:
        """The (n, m) grid points of the sweep, in execution order."""
        if self.mode == "vary-n":
            return [(n, n) for n in self.n_values]
        return [(self.n, m) for m in self.m_values]

    def make_backend(self):
        if self.backend_kind == "mock":
            profile = get_profile(self.profile_name, **self.profile_overrides)
            if "latency" not in self.profile_overrides:
                profile = dataclasses.replace(profile, latency=self.cost.functions)
            return MockBackend(profile)
        return HttpBackend(
            self.http_url,
            model=self.http_model,
            temperature=self.temperature,
            max_retries=self.http_max_retries,
            backoff_s=self.http_backoff_s,
        )


class _Located:
    """Maps (section, key) back to a 1-based line number in the raw text."""

    def __init__(self, text: str, path: str):
        self.path = path
        self.lines: dict[tuple[str, str], int] = {}
        section = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if stripped.startswith("[") and stripped.endswith("]"):
                section = stripped[1:-1].strip()
            elif "=" in stripped and section and not stripped.startswith(("#", ";")):
                key = stripped.split("=", 1)[0].strip()
                self.lines[(section, key)] = lineno

    def where(self, section: str, key: str | None = None) -> str:
        if key and (section, key) in self.lines:
            return f"{self.path}:{self.lines[(section, key)]}"
        return f"{self.path} [{section}]" + (f" {key}" if key else "")


def _parse_ints(raw: str) -> list[int]:
    return [int(tok) for tok in raw.replace(",", " ").split()]


def _get(parser, located, section, key, convert, default=None, required=False):
    if not parser.has_option(section, key):
        if required:
            raise ConfigFileError(f"missing required key {key!r}", located.where(section))
        return default
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except (ValueError, TypeError) as err:
        raise ConfigFileError(f"bad value {raw!r} for {key}: {err}", located.where(section, key))


def _bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def load_config(path) -> SweepConfig:
    """Parse and validate a sweep config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigFileError(f"cannot read config: {err}", str(path))
    return parse_config(text, str(path))


def parse_config(text: str, path: str = "<config>") -> SweepConfig:
    located = _Located(text, path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=path)
    except configparser.Error as err:
        lineno = getattr(err, "lineno", None)
        where = f"{path}:{lineno}" if lineno else path
        raise ConfigFileError(f"config does not parse: {err.message}", where)

    if not parser.has_section("sweep"):
        raise ConfigFileError("missing required [sweep] section", path)

    task = _get(parser, located, "sweep", "task", str, required=True)
    if task not in TASKS:
        raise ConfigFileError(
            f"unknown task {task!r}; expected one of {TASKS}", located.where("sweep", "task")
        )
    mode = _get(parser, located, "sweep", "mode", str, default="vary-m")
    if mode not in MODES:
        raise ConfigFileError(
            f"unknown mode {mode!r}; expected one of {MODES}", located.where("sweep", "mode")
        )

    n = _get(parser, located, "sweep", "n", int)
    n_values = _get(parser, located, "sweep", "n_values", _parse_ints, default=[])
    m_values = _get(parser, located, "sweep", "m_values", _parse_ints, default=[])
    if mode == "vary-n" and not n_values:
        raise ConfigFileError("mode vary-n needs n_values", located.where("sweep"))
    if mode == "vary-m":
        if n is None:
            raise ConfigFileError("mode vary-m needs n", located.where("sweep"))
        if not m_values:
            raise ConfigFileError("mode vary-m needs m_values", located.where("sweep"))
    for label, values in (("n", [n] if n else []), ("n_values", n_values), ("m_values", m_values)):
        if any(v < 1 for v in values):
            raise ConfigFileError(f"{label} entries must be >= 1", located.where("sweep", label))

    trials = _get(parser, located, "sweep", "trials", int, default=1)
    if trials < 1:
        raise ConfigFileError("trials must be >= 1", located.where("sweep", "trials"))

    backend_kind = "mock"
    profile_name = "exact"
    http_url = None
    http_model = "default"
    temperature = 0.0
    http_max_retries = 3
    http_backoff_s = 1.0
    if parser.has_section("backend"):
        backend_kind = _get(parser, located, "backend", "kind", str, default="mock")
        if backend_kind not in ("mock", "http"):
            raise ConfigFileError(
                f"backend kind must be mock or http, got {backend_kind!r}",
                located.where("backend", "kind"),
            )
        profile_name = _get(parser, located, "backend", "profile", str, default="exact")
        http_url = _get(parser, located, "backend", "url", str)
        http_model = _get(parser, located, "backend", "model", str, default="default")
        temperature = _get(parser, located, "backend", "temperature", float, default=0.0)
        http_max_retries = _get(parser, located, "backend", "max_retries", int, default=3)
        http_backoff_s = _get(parser, located, "backend", "backoff_s", float, default=1.0)
        if backend_kind == "http" and not http_url:
            raise ConfigFileError("http backend needs url", located.where("backend"))

    profile_overrides = {}
    if parser.has_section("profile"):
        valid = {f.name: str(f.type) for f in dataclasses.fields(MockProfile)}
        for key in parser.options("profile"):
            if key not in valid or key in ("latency", "name"):
                raise ConfigFileError(
                    f"unknown profile field {key!r}", located.where("profile", key)
                )
            convert = _bool if valid[key] == "bool" else float
            profile_overrides[key] = _get(parser, located, "profile", key, convert)

    cost_kind = "compute-bound-linear"
    c_pre = c_dec = c_const = 1.0
    l_sys, p, m_bar = 0, 4.0, 1_000_000
    extra_p: list[int] = []
    if parser.has_section("cost_model"):
        cost_kind = _get(parser, located, "cost_model", "kind", str, default=cost_kind)
        if cost_kind not in COST_KINDS:
            raise ConfigFileError(
                f"unknown cost kind {cost_kind!r}; expected one of {COST_KINDS}",
                located.where("cost_model", "kind"),
            )
        c_pre = _get(parser, located, "cost_model", "c_pre", float, default=1.0)
        c_dec = _get(parser, located, "cost_model", "c_dec", float, default=1.0)
        c_const = _get(parser, located, "cost_model", "c_const", float, default=1.0)
        l_sys = _get(parser, located, "cost_model", "l_sys", int, default=0)
        raw_p = _get(parser, located, "cost_model", "p", str, default="4")
        p = math.inf if raw_p.strip() in ("inf", "infinity") else float(int(raw_p))
        m_bar = _get(parser, located, "cost_model", "m_bar", int, default=1_000_000)
        extra_p = _get(parser, located, "cost_model", "extra_p", _parse_ints, default=[])

    functions = CostFunctions(kind=cost_kind, c_pre=c_pre, c_dec=c_dec, c_const=c_const)
    cost = CostModel(functions=functions, l_sys=l_sys, p=p, m_bar=m_bar)

    return SweepConfig(
        task=task,
        mode=mode,
        n=n,
        n_values=n_values,
        m_values=m_values,
        trials=trials,
        base_seed=_get(parser, located, "sweep", "base_seed", int, default=0),
        backend_kind=backend_kind,
        profile_name=profile_name,
        profile_overrides=profile_overrides,
        http_url=http_url,
        http_model=http_model,
        temperature=temperature,
        http_max_retries=http_max_retries,
        http_backoff_s=http_backoff_s,
        cost=cost,
        extra_p=extra_p,
        workers=_get(parser, located, "sweep", "workers", int, default=1),
        out=_get(parser, located, "sweep", "out", str),
        merge_mode=_get(parser, located, "sweep", "merge_mode", str, default="hierarchical"),
        needle_present=_get(parser, located, "sweep", "needle_present", _bool, default=True),
        dump_instances=_get(parser, located, "sweep", "dump_instances", str),
        source_path=path,
        source_text=text,
    )
