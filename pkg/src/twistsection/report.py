"""Run configuration and the machine-readable verification report."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import jsonschema

from .freegroup import MAX_RANK
from .smooth import BumpProfile

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def _is_power_of_two(k: int) -> bool:
    return k > 0 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class RunConfig:
    n: int = 3
    seed: int = 0
    loop_samples: int = 512
    path_samples: int = 256
    tol_fd: float = 1e-5
    continuity: float = 0.5
    identity_tol: float = 1e-6
    plateau_end: float = 1.0 / 3.0
    support_end: float = 0.6
    format: str = "text"

    def validate(self) -> "RunConfig":
        if not 2 <= self.n <= MAX_RANK:
            raise ConfigError(f"rank must lie in 2..{MAX_RANK}")
        for name in ("loop_samples", "path_samples"):
            if not _is_power_of_two(getattr(self, name)):
                raise ConfigError(f"{name} must be a power of two")
        for name in ("tol_fd", "continuity", "identity_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.format not in ("json", "text"):
            raise ConfigError("format must be json or text")
        try:
            self.profile()
        except ValueError as exc:
            raise ConfigError(f"bad profile: {exc}") from exc
        return self

    def profile(self) -> BumpProfile:
        return BumpProfile(self.plateau_end, self.support_end)

    def ranks(self) -> list[int]:
        return sorted({2, 3, 4, self.n})


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | error
    measured: float | None
    threshold: float | None
    runtime_s: float
    detail: str = ""


@dataclass
class Report:
    config: RunConfig
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "config": asdict(self.config),
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        jsonschema.validate(data, REPORT_SCHEMA)
        return cls(RunConfig(**data["config"]), [CheckRecord(**c) for c in data["checks"]])

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            meas = "-" if c.measured is None else f"{c.measured:.3g}"
            thr = "-" if c.threshold is None else f"{c.threshold:.3g}"
            lines.append(f"[{c.status.upper():5}] {c.name:<28} measured={meas:<10} threshold={thr:<10} "
                         f"({c.runtime_s:.2f}s) {c.detail}")
        lines.append("ALL PASS" if self.passed else "FAILURES PRESENT")
        return "\n".join(lines)


_NUM = {"type": ["number", "null"]}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "config", "passed", "checks"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "passed": {"type": "boolean"},
        "config": {
            "type": "object",
            "required": ["n", "seed", "loop_samples", "path_samples", "tol_fd"],
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "measured", "threshold", "runtime_s"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "error"]},
                    "measured": _NUM,
                    "threshold": _NUM,
                    "runtime_s": {"type": "number", "minimum": 0},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}
