import enum
from dataclasses import dataclass
from textwrap import dedent

from .cartesian import DEFAULT_PRODUCT_CAP_BYTES
from .exceptions import InvalidConfiguration


class Precision(int, enum.Enum):
    HALF = 16
    FULL = 32


class Activation(str, enum.Enum):
    RELU = "relu"
    IDENTITY = "identity"


@dataclass
class PlannerSettings:
    product_cap_bytes: int = DEFAULT_PRODUCT_CAP_BYTES
    oracle_limit: int = 8
    oracle_max_group_size: int = 2
    allow_cartesian: bool = True

    def __post_init__(self):
        assert_positive("product_cap_bytes", self.product_cap_bytes)
        assert_positive("oracle_limit", self.oracle_limit)
        if self.oracle_max_group_size < 2:
            raise InvalidConfiguration(
                "oracle_max_group_size must be at least 2, "
                f"got {self.oracle_max_group_size}."
            )
        if not isinstance(self.allow_cartesian, bool):
            raise InvalidConfiguration("allow_cartesian must be a boolean.")

    @property
    def used_settings_message(self) -> str:
        cartesian_msg = (
            "Combining tables with Cartesian products."
            if self.allow_cartesian
            else "Not combining tables."
        )
        return dedent(
            f"""\
            Product size cap: {self.product_cap_bytes} bytes.
            Oracle accepts up to {self.oracle_limit} tables.
            Oracle groups up to {self.oracle_max_group_size} tables.
            {cartesian_msg}
            """
        )


@dataclass
class SimulatorSettings:
    parallel_macs: int = 4096
    clock_ghz: float = 0.2
    broadcast_cycles_per_element: float = 1.0
    gather_cycles_per_element: float = 1.0
    lookup_overhead_ns: float = 0.0
    half_precision_speedup: float = 2.0

    def __post_init__(self):
        assert_positive("parallel_macs", self.parallel_macs)
        assert_positive("clock_ghz", self.clock_ghz)
        assert_positive(
            "broadcast_cycles_per_element", self.broadcast_cycles_per_element
        )
        assert_positive("gather_cycles_per_element", self.gather_cycles_per_element)
        assert_positive("half_precision_speedup", self.half_precision_speedup)
        if not is_number(self.lookup_overhead_ns) or self.lookup_overhead_ns < 0:
            raise InvalidConfiguration(
                "lookup_overhead_ns must not be negative, "
                f"got {self.lookup_overhead_ns}."
            )

    @property
    def used_settings_message(self) -> str:
        return dedent(
            f"""\
            Using {self.parallel_macs} parallel MACs at {self.clock_ghz} GHz.
            Broadcast takes {self.broadcast_cycles_per_element} cycles per element.
            Gather takes {self.gather_cycles_per_element} cycles per element.
            Lookup overhead: {self.lookup_overhead_ns} ns.
            16-bit speedup: {self.half_precision_speedup}x.
            """
        )


@dataclass
class EngineSettings:
    hidden_activation: Activation = Activation.RELU
    parallel_lookups: bool = False
    weights_seed: int = 0

    def __post_init__(self):
        try:
            self.hidden_activation = Activation(self.hidden_activation)
        except ValueError as exc:
            valid_options = ", ".join(activation.value for activation in Activation)
            raise InvalidConfiguration(
                f"'{self.hidden_activation}' is not a valid choice. "
                f"Valid options are: {valid_options}"
            ) from exc
        if not isinstance(self.parallel_lookups, bool):
            raise InvalidConfiguration("parallel_lookups must be a boolean.")
        if not isinstance(self.weights_seed, int) or self.weights_seed < 0:
            raise InvalidConfiguration(
                f"weights_seed must be a non-negative integer, got {self.weights_seed}."
            )

    @property
    def used_settings_message(self) -> str:
        parallel_msg = (
            "Looking up channels in parallel."
            if self.parallel_lookups
            else "Looking up channels sequentially."
        )
        return dedent(
            f"""\
            Hidden layers activation: {self.hidden_activation.value}
            MLP weights seed: {self.weights_seed}
            {parallel_msg}
            """
        )


def is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def assert_positive(name: str, value):
    if not is_number(value) or value <= 0:
        raise InvalidConfiguration(f"{name} must be positive, got {value}.")
