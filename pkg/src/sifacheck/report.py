"""Per-circuit verification reports: text rendering and JSON schema.

The JSON layout is stable so downstream tooling can rely on it:

    {"circuit": ..., "tool_version": ...,
     "sites": [{"site", "verdict", "witness", "subset", "millis"}, ...],
     "summary": {"secure", "unknown", "incomplete", "total_millis"}}

Only the timing fields vary between identical runs. An `unknown` verdict
upgraded by the exact oracle is reported as `confirmed-leak`; the
`witness` slot then names the dependent secrets. For `incomplete`
verdicts the `witness` slot carries the reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .checker import INCOMPLETE, SECURE, UNKNOWN, Verdict

__all__ = ["CONFIRMED_LEAK", "SiteRecord", "VerdictReport"]

CONFIRMED_LEAK = "confirmed-leak"


@dataclass
class SiteRecord:
    site_id: str
    verdict: Verdict
    millis: int
    oracle: list[tuple[str, bool]] | None = None  # (secret, dependent) pairs
    oracle_note: str | None = None  # refusal or skip message

    @property
    def status(self) -> str:
        if (
            self.verdict.status == UNKNOWN
            and self.oracle is not None
            and any(dep for _, dep in self.oracle)
        ):
            return CONFIRMED_LEAK
        return self.verdict.status

    def dependent_secrets(self) -> list[str]:
        if not self.oracle:
            return []
        return [name for name, dep in self.oracle if dep]

    def witness_text(self) -> str | None:
        status = self.status
        if status == SECURE:
            return self.verdict.witness
        if status == CONFIRMED_LEAK:
            return "dependent-on:" + ",".join(self.dependent_secrets())
        if status == INCOMPLETE:
            return self.verdict.reason
        return None


@dataclass
class VerdictReport:
    circuit: str
    tool_version: str
    records: list[SiteRecord] = field(default_factory=list)
    total_millis: int = 0

    def counts(self) -> dict[str, int]:
        counts = {SECURE: 0, UNKNOWN: 0, INCOMPLETE: 0}
        for rec in self.records:
            status = rec.status
            # confirmed leaks stay in the unknown tally: both mean "not secure"
            counts[UNKNOWN if status == CONFIRMED_LEAK else status] += 1
        return counts

    def exit_code(self) -> int:
        counts = self.counts()
        if counts[UNKNOWN]:
            return 1
        if counts[INCOMPLETE]:
            return 3
        return 0

    def to_json_dict(self) -> dict:
        return {
            "circuit": self.circuit,
            "tool_version": self.tool_version,
            "sites": [
                {
                    "site": rec.site_id,
                    "verdict": rec.status,
                    "witness": rec.witness_text(),
                    "subset": list(rec.verdict.subset)
                    if rec.verdict.subset is not None
                    else None,
                    "millis": rec.millis,
                }
                for rec in self.records
            ],
            "summary": {
                **self.counts(),
                "total_millis": self.total_millis,
            },
        }

    def to_text(self) -> str:
        lines = [f"circuit: {self.circuit} ({len(self.records)} fault sites)"]
        flagged = [r for r in self.records if r.status != SECURE]
        secure = [r for r in self.records if r.status == SECURE]
        for rec in flagged + secure:
            lines.append(self._site_line(rec))
        counts = self.counts()
        lines.append(
            f"summary: {counts[SECURE]} secure, {counts[UNKNOWN]} unknown, "
            f"{counts[INCOMPLETE]} incomplete ({self.total_millis} ms)"
        )
        return "\n".join(lines)

    def _site_line(self, rec: SiteRecord) -> str:
        parts = [f"site {rec.site_id:<16} {rec.status}"]
        witness = rec.witness_text()
        if witness:
            parts.append(witness)
        if rec.verdict.subset is not None:
            parts.append(f"offending-subset={list(rec.verdict.subset)}")
        if rec.oracle_note:
            parts.append(f"oracle: {rec.oracle_note}")
        return "  ".join(parts)
