def floor_log2(value: int) -> int:
    """Largest p with 2^p <= value, by bit length (value >= 1)."""
    return value.bit_length() - 1


def ceil_log2(value: int) -> int:
    """Smallest p with 2^p >= value (value >= 1)."""
    return (value - 1).bit_length()


def largest_power_of_two_dividing(value: int) -> int:
    """Exponent of the largest power of two dividing a positive integer."""
    return (value & -value).bit_length() - 1


def entries_bound_basic(n: int) -> int:
    """Cell bound for a basic FAR index over n positions: 3n(ceil(log2(n+1)) + 2)."""
    return 3 * n * (ceil_log2(n + 1) + 2)
