"""Detection outcomes and probability tables shared by both engines."""

from __future__ import annotations

from dataclasses import dataclass, field

from .amplitude import ExactAmp, to_float


@dataclass(frozen=True, order=True)
class Outcome:
    """Occupation pattern over terminal names.

    Names are either a plain terminal id ("D1") or a label-refined id
    ("D1[H]") when the detector resolves internal modes.  ``counts`` is
    kept sorted so equal outcomes compare and hash equal.
    """

    counts: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, occupation) -> "Outcome":
        items = tuple(sorted((name, n) for name, n in dict(occupation).items() if n > 0))
        return cls(items)

    def count(self, name: str) -> int:
        return dict(self.counts).get(name, 0)

    def base_count(self, terminal: str) -> int:
        """Photons at a terminal, summed over label refinements."""
        total = 0
        for name, n in self.counts:
            if name == terminal or name.startswith(terminal + "["):
                total += n
        return total

    def terminals(self) -> set[str]:
        return {name.split("[")[0] for name, _ in self.counts}

    def total_photons(self) -> int:
        return sum(n for _, n in self.counts)

    def label(self) -> str:
        if not self.counts:
            return "vacuum"
        parts = []
        for name, n in self.counts:
            parts.extend([name] * n)
        return "+".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Outcome":
        if text == "vacuum":
            return cls(())
        occ: dict[str, int] = {}
        for part in text.split("+"):
            occ[part] = occ.get(part, 0) + 1
        return cls.of(occ)

    def __str__(self) -> str:
        return self.label()


@dataclass
class OutcomeTable:
    """Normalized probability map with engine provenance.

    Values are ExactAmp (real ring elements) when the producing engine
    ran exactly, plain floats otherwise.
    """

    probs: dict[Outcome, object]
    engine: str
    exact: bool = False
    meta: dict = field(default_factory=dict)

    def __getitem__(self, outcome: Outcome):
        return self.probs.get(outcome, ExactAmp(0) if self.exact else 0.0)

    def __iter__(self):
        return iter(self.probs)

    def items(self):
        return self.probs.items()

    def get_float(self, outcome: Outcome) -> float:
        return to_float(self[outcome])

    def total(self):
        value = ExactAmp(0) if self.exact else 0.0
        for p in self.probs.values():
            value = value + p
        return value

    def as_float_dict(self) -> dict[Outcome, float]:
        return {o: to_float(p) for o, p in self.probs.items()}

    def sorted_outcomes(self) -> list[Outcome]:
        return sorted(self.probs)

    def max_discrepancy(self, other: "OutcomeTable") -> float:
        keys = set(self.probs) | set(other.probs)
        return max(
            (abs(self.get_float(k) - other.get_float(k)) for k in keys),
            default=0.0,
        )

    def rows(self) -> list[dict]:
        out = []
        for outcome in self.sorted_outcomes():
            p = self.probs[outcome]
            row = {"outcome": outcome.label(), "probability": to_float(p)}
            if isinstance(p, ExactAmp):
                row["exact"] = list(p.to_tuple())
            out.append(row)
        return out
