import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from . import subsets


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INAPPLICABLE = "INAPPLICABLE"
    NOT_BIJECTIVE = "NOT_BIJECTIVE"
    # A statement that does not hold at the combinatorial level; expected
    # evidence, not an implementation bug.
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


_FAILING = {Verdict.FAIL, Verdict.NOT_BIJECTIVE}


@dataclass(frozen=True)
class Check:
    name: str
    verdict: Verdict
    witness: Optional[Dict[str, Any]] = None
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.verdict not in _FAILING

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "verdict": self.verdict.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Report:
    """
    Outcome of one check operation.

    A report passes when none of its checks FAILed (INAPPLICABLE and
    COUNTEREXAMPLE outcomes are evidence, not failures).
    """

    subject: str
    checks: Tuple[Check, ...] = ()
    data: Mapping[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> Verdict:
        for c in self.checks:
            if c.verdict in _FAILING:
                return c.verdict
        if self.checks and all(c.verdict == Verdict.INAPPLICABLE for c in self.checks):
            return Verdict.INAPPLICABLE
        if any(c.verdict == Verdict.COUNTEREXAMPLE for c in self.checks):
            return Verdict.COUNTEREXAMPLE
        return Verdict.PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "checks": [c.to_dict() for c in self.checks],
            "data": dict(self.data),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_jsonable)

    def to_text(self) -> str:
        lines = [f"{self.subject}: {self.verdict.value}"]
        for c in self.checks:
            line = f"  {c.name}: {c.verdict.value}"
            if c.witness is not None:
                line += " " + json.dumps(c.witness, sort_keys=True, default=_jsonable)
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        for key in sorted(self.data):
            lines.append(
                f"  {key} = {json.dumps(self.data[key], sort_keys=True, default=_jsonable)}"
            )
        return "\n".join(lines)


def merge(subject: str, reports: Iterable[Report], **data: Any) -> Report:
    """Concatenate the checks of several reports, prefixing names by subject."""
    checks: List[Check] = []
    for r in reports:
        for c in r.checks:
            checks.append(Check(f"{r.subject}/{c.name}", c.verdict, c.witness, c.note))
    return Report(subject, tuple(checks), data)


def subset_witness(**subsets_by_name: int) -> Dict[str, List[int]]:
    """Render bitmask witnesses as sorted point lists."""
    return {k: subsets.to_list(v) for k, v in subsets_by_name.items()}


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    return str(obj)
