"""Text snapshots of spin and bond configurations.

A snapshot is a header line ``POTTSLAB v1 kind d n q beta seed sweep``
followed by the payload: one base-36 digit per site (``kind = spin``) or one
``0``/``1`` per edge (``kind = bond``), in the lattice enumeration order,
with a newline after every ``n + 1`` symbols. The header fixes the payload
length, so truncation is always detected.
"""

import dataclasses
import math
from pathlib import Path
from typing import Literal

import numpy as np
import numpy.typing as npt

from ..exc import SnapshotFormatError

MAGIC = "POTTSLAB"
VERSION = "v1"
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_DIGIT_VALUE = {symbol: value for value, symbol in enumerate(_DIGITS)}

SnapshotKind = Literal["spin", "bond"]


def _format_float(value: float) -> str:
    return "inf" if math.isinf(value) else repr(float(value))


@dataclasses.dataclass(frozen=True, eq=False)
class Snapshot:
    kind: SnapshotKind
    d: int
    n: int
    q: int
    beta: float
    seed: int
    sweep: int
    payload: npt.NDArray

    def __post_init__(self) -> None:
        if self.kind not in ("spin", "bond"):
            raise SnapshotFormatError(f"unknown snapshot kind {self.kind!r}")
        if self.kind == "spin" and self.q >= len(_DIGITS):
            raise SnapshotFormatError(f"spin snapshots support q <= 35, got {self.q}")

    @property
    def expected_length(self) -> int:
        if self.kind == "spin":
            return (self.n + 1) ** self.d
        return self.d * self.n * (self.n + 1) ** (self.d - 1)

    @property
    def header(self) -> str:
        return " ".join(
            [
                MAGIC,
                VERSION,
                self.kind,
                str(self.d),
                str(self.n),
                str(self.q),
                _format_float(self.beta),
                str(self.seed),
                str(self.sweep),
            ]
        )

    def render(self) -> str:
        values = np.asarray(self.payload).ravel()
        if values.size != self.expected_length:
            raise SnapshotFormatError(
                f"payload has {values.size} symbols, header implies {self.expected_length}"
            )
        if self.kind == "spin":
            symbols = "".join(_DIGITS[int(v)] for v in values)
        else:
            symbols = "".join("1" if v else "0" for v in values)
        width = self.n + 1
        rows = [symbols[i : i + width] for i in range(0, len(symbols), width)]
        return self.header + "\n" + "\n".join(rows) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Snapshot":
        header, _, body = text.partition("\n")
        fields = header.split()
        if len(fields) != 9 or fields[0] != MAGIC:
            raise SnapshotFormatError(f"not a snapshot header: {header!r}")
        if fields[1] != VERSION:
            raise SnapshotFormatError(f"unsupported snapshot version {fields[1]!r}")
        kind = fields[2]
        if kind not in ("spin", "bond"):
            raise SnapshotFormatError(f"unknown snapshot kind {kind!r}")
        try:
            d, n, q = int(fields[3]), int(fields[4]), int(fields[5])
            beta = float(fields[6])
            seed, sweep = int(fields[7]), int(fields[8])
        except ValueError as exc:
            raise SnapshotFormatError(f"malformed snapshot header: {header!r}") from exc

        symbols = "".join(body.split())
        snapshot_args = dict(kind=kind, d=d, n=n, q=q, beta=beta, seed=seed, sweep=sweep)
        expected = cls(payload=np.empty(0), **snapshot_args).expected_length
        if len(symbols) != expected:
            raise SnapshotFormatError(
                f"snapshot payload truncated or padded: expected {expected} symbols, "
                f"found {len(symbols)}"
            )
        if kind == "spin":
            try:
                payload = np.array([_DIGIT_VALUE[s] for s in symbols], dtype=np.int16)
            except KeyError as exc:
                raise SnapshotFormatError(f"invalid spin symbol {exc.args[0]!r}") from exc
        else:
            if set(symbols) - {"0", "1"}:
                raise SnapshotFormatError("bond payload must contain only 0 and 1")
            payload = np.frombuffer(symbols.encode(), dtype=np.uint8) == ord("1")
        return cls(payload=payload, **snapshot_args)


def save_snapshot(path: str | Path, snapshot: Snapshot) -> None:
    Path(path).write_text(snapshot.render(), encoding="ascii", newline="\n")


def load_snapshot(path: str | Path) -> Snapshot:
    """Read a snapshot file; format problems raise :class:`~pottslab.exc.SnapshotFormatError`."""
    return Snapshot.parse(Path(path).read_text(encoding="ascii"))
