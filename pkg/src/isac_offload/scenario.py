"""System parameters and decision variables for the UAV offloading/tracking problem."""

from dataclasses import dataclass, field, fields, replace
import math


class ScenarioError(ValueError):
    """Raised when a parameter violates its admissible range.

    The offending key is available as ``key`` so the CLI can name it.
    """

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


def dbm_to_watt(p_dbm):
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def _positive(name, value):
    if not (value > 0) or not math.isfinite(value):
        raise ScenarioError(name, f"must be a positive finite number, got {value!r}")


def _nonnegative(name, value):
    if not (value >= 0) or math.isnan(value):
        raise ScenarioError(name, f"must be nonnegative, got {value!r}")


@dataclass(frozen=True)
class Scenario:
    """Fixed parameters of one UAV / UE / target configuration (SI units).

    Defaults reproduce the evaluation setting: 27 dBm transmit power,
    1000 m x 1000 m area, UAV at 60 m, and the price/budget defaults used
    throughout the package.
    """

    task_bits: float = 5e6
    cycles_per_bit: float = 10.0
    uav_capacity: float = 6e6
    ue_capacity: float = 5e6
    tx_power: float = field(default_factory=lambda: dbm_to_watt(27.0))
    bandwidth: float = 1e7
    noise_psd: float = 1e-17
    ref_channel_gain: float = 1e-3
    path_loss_exponent: float = 2.0
    rcs: float = 0.1
    wavelength: float = 0.03
    uav_altitude: float = 60.0
    ue_position: tuple = (100.0, 120.0)
    target_position: tuple = (460.0, 290.0)
    area_bounds: tuple = (0.0, 1000.0, 0.0, 1000.0)
    price_bandwidth: float = 50.0
    price_tx_energy: float = 1.0
    price_cycle: float = 10.0
    price_ue_energy: float = 1.0
    energy_per_cycle: float = 1e-9
    beta_max: float = 0.9
    budget: float = 8e8
    weight_latency: float = 1.0
    weight_crb: float = 40.0

    def __post_init__(self):
        for name in ("task_bits", "cycles_per_bit", "ue_capacity",
                     "tx_power", "bandwidth", "noise_psd", "ref_channel_gain",
                     "path_loss_exponent", "rcs", "wavelength", "uav_altitude"):
            _positive(name, getattr(self, name))
        # infinite capacity / budget are legitimate limits
        for name in ("uav_capacity", "budget"):
            value = getattr(self, name)
            if not value > 0:
                raise ScenarioError(name, f"must be positive, got {value!r}")
        for name in ("price_bandwidth", "price_tx_energy", "price_cycle",
                     "price_ue_energy", "energy_per_cycle",
                     "weight_latency", "weight_crb"):
            _nonnegative(name, getattr(self, name))
        if self.weight_latency == 0 and self.weight_crb == 0:
            raise ScenarioError("weight_latency", "weight_latency and weight_crb cannot both be zero")
        if not (0.0 <= self.beta_max < 1.0):
            raise ScenarioError("beta_max", f"must lie in [0, 1), got {self.beta_max!r}")

        object.__setattr__(self, "ue_position", _pair("ue_position", self.ue_position))
        object.__setattr__(self, "target_position", _pair("target_position", self.target_position))
        bounds = tuple(float(b) for b in self.area_bounds)
        if len(bounds) != 4:
            raise ScenarioError("area_bounds", "expected (x_min, x_max, y_min, y_max)")
        x_min, x_max, y_min, y_max = bounds
        if not (x_min < x_max and y_min < y_max):
            raise ScenarioError("area_bounds", f"empty rectangle {bounds}")
        object.__setattr__(self, "area_bounds", bounds)
        for name in ("ue_position", "target_position"):
            px, py = getattr(self, name)
            if not (x_min <= px <= x_max and y_min <= py <= y_max):
                raise ScenarioError(name, f"{(px, py)} lies outside area_bounds {bounds}")

    @property
    def sample_period(self):
        return 1.0 / self.bandwidth

    @property
    def lower_bounds(self):
        """Per-gene lower bounds in (beta, x, y) order."""
        return (0.0, self.area_bounds[0], self.area_bounds[2])

    @property
    def upper_bounds(self):
        return (self.beta_max, self.area_bounds[1], self.area_bounds[3])

    def replace(self, **changes):
        return replace(self, **changes)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def _pair(name, value):
    try:
        a, b = value
        pair = (float(a), float(b))
    except (TypeError, ValueError):
        raise ScenarioError(name, f"expected a pair of numbers, got {value!r}") from None
    if not all(math.isfinite(v) for v in pair):
        raise ScenarioError(name, f"coordinates must be finite, got {pair}")
    return pair


@dataclass(frozen=True)
class Decision:
    """Local processing fraction ``beta`` and UAV horizontal position."""

    beta: float
    x: float
    y: float

    def as_tuple(self):
        return (self.beta, self.x, self.y)


def check_decision(scenario, decision, tol=0.0):
    """Validate a decision against C1 and the area bounds; returns it unchanged."""
    if not isinstance(decision, Decision):
        decision = Decision(*map(float, decision))
    lo, hi = scenario.lower_bounds, scenario.upper_bounds
    for name, value, a, b in zip(("beta", "x", "y"), decision.as_tuple(), lo, hi):
        if not (a - tol <= value <= b + tol):
            raise ValueError(f"{name}={value!r} outside [{a}, {b}]")
    return decision
