"""Machine-checkable weighted power-sum identities."""
from __future__ import annotations

from dataclasses import dataclass, field
from .forms import Form, format_form
from .serialize import jsonable
from .tower import format_scalar, tower_sign


@dataclass(frozen=True)
class Certificate:
    """``target == sum(weight * form**exponent)`` with non-negative weights."""

    name: str
    target: Form
    terms: tuple
    names: tuple | None = None
    notes: dict = field(default_factory=dict, compare=False)

    def expand(self) -> Form:
        out = Form.zero(self.target.nvars, self.target.degree)
        for w, f, e in self.terms:
            out = out + (f**e) * w
        return out

    def residual(self) -> Form:
        return self.target - self.expand()

    def weights_nonnegative(self) -> bool:
        return all(tower_sign(w) >= 0 for w, _, _ in self.terms)

    def exponents_even(self) -> bool:
        return all(e > 0 and e % 2 == 0 for _, _, e in self.terms)

    def verify(self) -> bool:
        return self.weights_nonnegative() and self.exponents_even() and self.residual().is_zero()

    def transcript(self) -> str:
        names = list(self.names) if self.names else None
        lines = [f"{self.name}:", f"  target = {format_form(self.target, names)}"]
        for w, f, e in self.terms:
            lines.append(f"  + {format_scalar(w)} * ({format_form(f, names)})^{e}")
        lines.append(f"  residual = {format_form(self.residual(), names)}")
        lines.append(f"  verified = {self.verify()}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "target": jsonable(self.target),
            "terms": [
                {"weight": jsonable(w), "form": jsonable(f), "exponent": e} for w, f, e in self.terms
            ],
            "variables": list(self.names) if self.names else None,
            "verified": self.verify(),
        }


def certificate_from_json(obj: dict) -> Certificate:
    from .forms import form_from_json, scalar_from_json

    terms = tuple(
        (scalar_from_json(t["weight"]), form_from_json(t["form"]), int(t["exponent"]))
        for t in obj["terms"]
    )
    names = tuple(obj["variables"]) if obj.get("variables") else None
    return Certificate(obj["name"], form_from_json(obj["target"]), terms, names)
