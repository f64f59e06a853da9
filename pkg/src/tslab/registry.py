"""The four-curve registry, one curve per torsion order m in {2,3,4,5}."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .weierstrass import WeierstrassCurve


@dataclass(frozen=True)
class CurveRegistryEntry:
    label: str
    m: int
    stated_curve: tuple[int, ...]
    working_curve: tuple[int, ...]
    note: str

    @property
    def substituted(self) -> bool:
        return self.stated_curve != self.working_curve

    @property
    def curve(self) -> WeierstrassCurve:
        return WeierstrassCurve(*self.working_curve)


def _parse_coeffs(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(","))


def load_registry() -> dict[str, CurveRegistryEntry]:
    text = resources.files("tslab").joinpath("data/registry.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, m, stated, working, note = line.split(None, 4)
        out[label] = CurveRegistryEntry(label, int(m), _parse_coeffs(stated), _parse_coeffs(working), note)
    return out


def resolve_curve(text: str) -> tuple[str, WeierstrassCurve]:
    """A registry label (m2..m5) or "a1,a2,a3,a4,a6"; returns (name, curve).

    Raises ValueError on anything else, including singular curves.
    """
    reg = load_registry()
    if text in reg:
        return text, reg[text].curve
    if text.strip("[]() ").count(",") != 4:
        raise ValueError(f"unknown curve {text!r}: expected one of {sorted(reg)} or a1,a2,a3,a4,a6")
    return text, WeierstrassCurve.parse(text)
