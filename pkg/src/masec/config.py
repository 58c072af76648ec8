"""System parameters in linear units, plus plain-text config parsing.

All powers are watts and all gains/ratios are linear inside the engine.
dB and dBm values are accepted at the parsing boundary only: a value
suffixed ``dB`` converts as 10^(x/10), ``dBm`` as 10^((x-30)/10) watts.
"""

import dataclasses
from dataclasses import dataclass


class ConfigError(ValueError):
    """Unknown key or out-of-range parameter value."""

    def __init__(self, key, message):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


@dataclass(frozen=True)
class SystemConfig:
    """All physical and algorithmic parameters.

    Defaults use desk-scale algorithm budgets (smaller swarm/iteration
    counts suited to CI); :meth:`with_full_budget` switches to the full
    100-iteration budgets.
    """

    n_t: int = 4                 # transmit movable antennas at the BS
    n_r: int = 4                 # receive movable antennas at the BS
    region_size: float = 2.0     # side of each square moving region, in wavelengths
    paths: int = 3               # propagation paths per channel (L)
    wavelength: float = 0.1      # meters
    min_distance: float = 0.05   # minimum inter-antenna spacing, meters
    beta: float = 1e-4           # path power gain at 1 m, linear
    alpha: float = 2.8           # path loss exponent
    noise_bs: float = 1e-12      # BS receive noise power, watts
    noise_dl: float = 1e-12      # downlink user noise power, watts
    noise_eve: float = 1e-12     # eavesdropper noise power, watts
    rho: float = 1e-10           # residual self-interference power ratio, linear
    p_bs: float = 0.1            # BS transmit power budget, watts
    p_ul: float = 0.1            # uplink user transmit power, watts
    sca_tol: float = 1e-3        # convergence threshold of the covariance solver
    ao_tol: float = 1e-3         # relative convergence threshold of the outer loop
    particles: int = 40          # swarm size
    sca_iters: int = 30          # max covariance-solver rounds
    pso_iters: int = 40          # max swarm iterations
    ao_iters: int = 15           # max outer alternating iterations
    penalty: float = 100.0       # spacing-violation penalty in the swarm fitness
    omega_min: float = 0.4       # swarm inertia lower bound
    omega_max: float = 0.9       # swarm inertia upper bound
    c1: float = 1.4              # individual learning factor
    c2: float = 1.4              # global learning factor
    trials: int = 20             # Monte Carlo trials per sweep point
    seed: int = 0                # base seed for all derived randomness

    @property
    def half_width(self) -> float:
        """Half side length of each moving region, meters."""
        return 0.5 * self.region_size * self.wavelength

    def with_full_budget(self) -> "SystemConfig":
        """Return a copy using the full algorithm budgets."""
        return dataclasses.replace(
            self, particles=100, sca_iters=100, pso_iters=100, ao_iters=100
        )

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


def check_config(cfg: SystemConfig) -> SystemConfig:
    """Validate a config, raising :class:`ConfigError` naming the bad field."""
    def require(ok, key, message):
        if not ok:
            raise ConfigError(key, message)

    require(cfg.n_t >= 1, "n_t", "need at least one transmit antenna")
    require(cfg.n_r >= 1, "n_r", "need at least one receive antenna")
    require(cfg.paths >= 1, "paths", "need at least one propagation path")
    require(cfg.wavelength > 0, "wavelength", "must be positive")
    require(cfg.region_size >= 0, "region_size", "must be non-negative")
    require(cfg.min_distance >= 0, "min_distance", "must be non-negative")
    require(cfg.beta > 0, "beta", "must be positive")
    require(cfg.alpha >= 0, "alpha", "must be non-negative")
    for key in ("noise_bs", "noise_dl", "noise_eve"):
        require(getattr(cfg, key) > 0, key, "noise power must be positive")
    require(0.0 <= cfg.rho <= 1.0, "rho", "must lie in [0, 1]")
    require(cfg.p_bs > 0, "p_bs", "transmit power must be positive")
    require(cfg.p_ul > 0, "p_ul", "transmit power must be positive")
    require(cfg.sca_tol > 0, "sca_tol", "must be positive")
    require(cfg.ao_tol > 0, "ao_tol", "must be positive")
    require(cfg.particles >= 1, "particles", "need at least one particle")
    require(cfg.sca_iters >= 1, "sca_iters", "must be at least 1")
    require(cfg.pso_iters >= 1, "pso_iters", "must be at least 1")
    require(cfg.ao_iters >= 1, "ao_iters", "must be at least 1")
    require(cfg.penalty > 0, "penalty", "must be positive")
    require(0 < cfg.omega_min <= cfg.omega_max, "omega_min",
            "need 0 < omega_min <= omega_max")
    require(cfg.c1 > 0, "c1", "must be positive")
    require(cfg.c2 > 0, "c2", "must be positive")
    require(cfg.trials >= 1, "trials", "need at least one trial")
    return cfg


_INT_FIELDS = {"n_t", "n_r", "paths", "particles", "sca_iters", "pso_iters",
               "ao_iters", "trials", "seed"}
# fields where a dBm suffix (-> watts) or dB suffix (-> linear ratio) is valid
_POWER_FIELDS = {"p_bs", "p_ul", "noise_bs", "noise_dl", "noise_eve"}
_RATIO_FIELDS = {"rho", "beta"}

# accepted spellings -> tuple of config fields the value feeds
_ALIASES = {
    "N": ("n_t", "n_r"),
    "N_t": ("n_t",),
    "N_r": ("n_r",),
    "A": ("region_size",),
    "L": ("paths",),
    "D": ("min_distance",),
    "lambda": ("wavelength",),
    "noise": ("noise_bs", "noise_dl", "noise_eve"),
    "sigma_B2": ("noise_bs",),
    "sigma_D2": ("noise_dl",),
    "sigma_E2": ("noise_eve",),
    "P_B": ("p_bs",),
    "P_U": ("p_ul",),
    "eps1": ("sca_tol",),
    "eps2": ("ao_tol",),
    "I": ("particles",),
    "M": ("sca_iters",),
    "K": ("pso_iters",),
    "C": ("ao_iters",),
    "eta": ("penalty",),
}
_ALIASES.update({f.name: (f.name,) for f in dataclasses.fields(SystemConfig)})


def _parse_value(key, field, text):
    text = text.strip()
    lowered = text.lower()
    if lowered.endswith("dbm"):
        if field not in _POWER_FIELDS:
            raise ConfigError(key, "dBm suffix only valid on power values")
        return 10.0 ** ((_parse_float(key, text[:-3]) - 30.0) / 10.0)
    if lowered.endswith("db"):
        if field not in _POWER_FIELDS and field not in _RATIO_FIELDS:
            raise ConfigError(key, "dB suffix only valid on power or ratio values")
        return 10.0 ** (_parse_float(key, text[:-2]) / 10.0)
    if field in _INT_FIELDS:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(key, f"expected an integer, got {text!r}") from None
    return _parse_float(key, text)


def _parse_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}") from None


def _apply_items(items, base):
    values = {}
    for key, raw in items:
        fields = _ALIASES.get(key)
        if fields is None:
            raise ConfigError(key, "unknown key")
        for field in fields:
            values[field] = _parse_value(key, field, raw)
    return dataclasses.replace(base, **values)


def _read_pairs(path):
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", f"expected key = value, got {line!r}")
            key, _, raw = line.partition("=")
            pairs.append((key.strip(), raw.strip()))
    return pairs


def parse_config(path=None, overrides=(), base=None) -> SystemConfig:
    """Build a validated config from a key=value file plus override strings.

    ``overrides`` is an iterable of ``key=value`` strings applied after the
    file, e.g. from repeated command-line flags.
    """
    cfg = base if base is not None else SystemConfig()
    if path is not None:
        cfg = _apply_items(_read_pairs(path), cfg)
    pairs = []
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, _, raw = item.partition("=")
        pairs.append((key.strip(), raw.strip()))
    if pairs:
        cfg = _apply_items(pairs, cfg)
    return check_config(cfg)
