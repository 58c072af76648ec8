"""Result row for one (scheme, sweep point, trial) run."""

from dataclasses import dataclass, field


@dataclass
class ExperimentRecord:
    """One Monte Carlo result row; ``seed`` identifies the channel draw so
    rows sharing it are paired across schemes."""

    scheme: str
    sweep_name: str
    sweep_value: float
    seed: int
    ssr: float
    r_u: float
    r_d: float
    iters: int
    tightness: float
    feasible: bool
    wall_clock_ms: float
    trace: object | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.ssr < 0 or abs(self.ssr - (self.r_u + self.r_d)) > 1e-9:
            raise ValueError("sum secrecy rate must equal r_u + r_d and be >= 0")
