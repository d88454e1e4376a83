"""Run configuration shared by the command-line front end and the scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

DEFAULT_SEED = 0


class ConfigError(ValueError):
    pass


def parse_range(text: str) -> tuple[int, ...]:
    """``"3"`` -> (3,), ``"1..5"`` -> (1, 2, 3, 4, 5); the range is inclusive."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"cannot read {text!r} as an integer or A..B range") from None
    if hi < lo:
        raise ConfigError(f"empty range {text!r}")
    return tuple(range(lo, hi + 1))


@dataclass
class RunConfig:
    genus: tuple[int, ...] = (8,)
    n: tuple[int, ...] = (1,)
    m: tuple[int, ...] = (1,)
    seed: int = DEFAULT_SEED
    depth: int = 4
    json_out: str | None = None
    quiet: bool = False
    extra: dict = field(default_factory=dict)

    def require_genus(self, minimum: int, what: str) -> None:
        if not self.genus:
            raise ConfigError("no genus given")
        low = min(self.genus)
        if low < minimum:
            raise ConfigError(f"{what} needs genus >= {minimum}, got {low}")

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("json_out")
        out.pop("quiet")
        return out
