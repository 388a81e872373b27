"""Default knobs shared by the library and the command line."""

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class Options:
    precision_bits: int = 128
    tol: float = 1e-8
    height_bound: int = 10**4
    n_max: int = 10**6
    grid: int = 256
    seed: int = 0xC0FFEE
    n_samples: int = 20
    max_dim: int = 64

    def __post_init__(self):
        for name, value in asdict(self).items():
            if name == "seed":
                if value < 0:
                    raise ValueError("seed must be nonnegative")
            elif not value > 0:
                raise ValueError(f"option {name} must be positive, got {value!r}")

    def updated(self, **changes) -> "Options":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULTS = Options()

# symbols carry this many bits beyond the working precision
GUARD_BITS = 32
