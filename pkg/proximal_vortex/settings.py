from dataclasses import dataclass, replace

from .errors import CapExceededError

# Hard ceiling on exhaustive 2^X enumeration; configurable down, never up.
HARD_EXHAUSTIVE_CAP = 20
DEFAULT_EXHAUSTIVE_CAP = 16

# Fixed seed for the pseudo-random functions and subset samples.
DEFAULT_SEED = 0


@dataclass(frozen=True)
class Limits:
    """
    Numeric knobs shared by every scan.

    Parameters
    ----------
    exhaustive_cap : int
        Largest ground set for which operations quantify over all subsets.
    sample_size : int
        Number of pseudo-random subsets checked (besides all singletons and the
        full set) when a ground set is above ``exhaustive_cap``.
    random_functions : int
        Number of pseudo-random integer-valued functions sampled by
        ``is_amenable_witness``.
    seed : int
        Seed for every pseudo-random draw.
    float_tolerance : float
        Tolerance of float-mode mean comparisons.
    conjugacy_search_cap : int
        Largest ground set for which ``search_conjugacy`` enumerates bijections.
    oracle_cap : int
        Largest ground set for which continuity checks also run the
        subset-pair oracle (a ``2^n x 2^n`` table).
    partitions : int
        Number of contiguous chunks exhaustive scans are split into.
    """

    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    sample_size: int = 64
    random_functions: int = 32
    seed: int = DEFAULT_SEED
    float_tolerance: float = 1e-12
    conjugacy_search_cap: int = 8
    oracle_cap: int = 10
    partitions: int = 1

    def __post_init__(self) -> None:
        if not 1 <= self.exhaustive_cap <= HARD_EXHAUSTIVE_CAP:
            raise ValueError(
                f"exhaustive_cap must be within 1..{HARD_EXHAUSTIVE_CAP}, "
                f"got {self.exhaustive_cap}"
            )
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")

    def with_cap(self, n_max: int) -> "Limits":
        """Lower the exhaustive cap; raising it is refused."""
        if n_max > self.exhaustive_cap:
            raise ValueError(
                f"--n-max {n_max} may only lower the cap ({self.exhaustive_cap})"
            )
        return replace(self, exhaustive_cap=n_max)

    def require_exhaustive(self, n: int, what: str = "exhaustive enumeration") -> None:
        if n > self.exhaustive_cap:
            raise CapExceededError(n, self.exhaustive_cap, what)


DEFAULT_LIMITS = Limits()
