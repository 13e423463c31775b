import dataclasses

import numpy as np

_MASK64 = (1 << 64) - 1
# Odd multiplier for deriving child stream ids; any fixed odd 64-bit constant works.
_CHILD_MULTIPLIER = 0x9E3779B97F4A7C15


@dataclasses.dataclass(frozen=True)
class RngStream:
    """A reproducible random stream addressed by ``(seed, stream)``.

    Backed by numpy's counter-based ``Philox`` bit generator keyed with the
    128-bit value ``stream << 64 | seed``. Equal ``(seed, stream)`` give the
    same draws on every platform, independent of which worker runs them.
    Streams are plain values: send them to workers, never share a generator.
    """

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not 0 <= value <= _MASK64:
                raise ValueError(f"{name} must fit in 64 bits, got {value}")

    @property
    def key(self) -> int:
        return (self.stream << 64) | self.seed

    def generator(self, draw_index: int = 0) -> np.random.Generator:
        """A fresh generator positioned ``draw_index`` Philox blocks into the stream."""
        bit_generator = np.random.Philox(key=self.key)
        if draw_index:
            bit_generator = bit_generator.advance(draw_index)
        return np.random.Generator(bit_generator)

    def child(self, index: int) -> "RngStream":
        """A derived stream, e.g. one per replica or per restart."""
        stream = (self.stream * _CHILD_MULTIPLIER + index + 1) & _MASK64
        return RngStream(seed=self.seed, stream=stream)

    def children(self, count: int) -> list["RngStream"]:
        return [self.child(i) for i in range(count)]
