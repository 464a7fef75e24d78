"""Construction traces: the auditable step log of a geometric run.

A trace is a line-oriented text: one step per line, `kind key=value ...`.
Only five step kinds exist; everything the engine does must be expressed
with them, which is what keeps a construction checkable by ruler and
compasses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from .errors import InconsistentTrace

STEP_KINDS = (
    "construct-angle-from-cosine",
    "drop-perpendicular",
    "bisect-angle",
    "rotate-hypotenuse",
    "measure-length",
)

# Joint letters in cascade order: the perpendicular from B lands on D,
# the next on E, and so on.
_FOOT_LETTERS = "DEFGHIJKLM"


def foot_label(i: int) -> str:
    """Label of the i-th perpendicular foot (1-based)."""
    if 1 <= i <= len(_FOOT_LETTERS):
        return _FOOT_LETTERS[i - 1]
    return f"T{i}"


@dataclass(frozen=True)
class TraceStep:
    kind: str
    attrs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise InconsistentTrace(f"unknown step kind: {self.kind!r}")

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.attrs:
            if k == key:
                return v
        return default

    def to_line(self) -> str:
        parts = [self.kind]
        parts.extend(f"{k}={v}" for k, v in self.attrs)
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "TraceStep":
        fields = line.split()
        if not fields:
            raise InconsistentTrace("empty step line")
        kind, attrs = fields[0], []
        for f in fields[1:]:
            if "=" not in f:
                raise InconsistentTrace(f"malformed attribute {f!r}")
            k, _, v = f.partition("=")
            attrs.append((k, v))
        return cls(kind, tuple(attrs))


@dataclass
class TraceRecorder:
    """Collects steps during a construction-backend run."""

    steps: list[TraceStep] = field(default_factory=list)

    def _add(self, kind: str, *attrs: tuple[str, str]):
        self.steps.append(TraceStep(kind, tuple(attrs)))

    def angle(self, cos_c: Decimal, vertex: str = "C"):
        self._add("construct-angle-from-cosine",
                  ("vertex", vertex), ("cos", str(cos_c)))

    def drop(self, frm: str, onto: str, foot: str, length: Decimal):
        self._add("drop-perpendicular",
                  ("from", frm), ("onto", onto), ("foot", foot),
                  ("length", str(length)))

    def bisect(self, vertex: str, cos_full: Decimal, cos_half: Decimal):
        self._add("bisect-angle",
                  ("vertex", vertex), ("cos-full", str(cos_full)),
                  ("cos-half", str(cos_half)))

    def rotate(self, pivot: str, cos_c: Decimal, iteration: int):
        self._add("rotate-hypotenuse",
                  ("pivot", pivot), ("cos", str(cos_c)),
                  ("iteration", str(iteration)))

    def measure(self, segment: str, value: Decimal):
        self._add("measure-length", ("segment", segment), ("value", str(value)))

    def dumps(self) -> str:
        return "".join(s.to_line() + "\n" for s in self.steps)

    def write(self, path: str):
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.dumps())


def parse_trace(text: str) -> list[TraceStep]:
    steps = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        steps.append(TraceStep.from_line(line))
    return steps
