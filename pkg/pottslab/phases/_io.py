"""Partition files.

Header ``PARTITION v1 d n f q``, then one base-36 label per block in
lexicographic block order, a newline after every ``blocks_per_axis`` labels.
"""

from pathlib import Path

import numpy as np

from ..exc import SnapshotFormatError
from ._grid import BlockGrid, PhasePartition

MAGIC = "PARTITION"
VERSION = "v1"
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def render_partition(partition: PhasePartition) -> str:
    grid = partition.grid
    if partition.q >= len(_DIGITS):
        raise SnapshotFormatError(f"partition files support q <= 35, got {partition.q}")
    symbols = "".join(_DIGITS[int(v)] for v in partition.labels.ravel())
    width = grid.blocks_per_axis
    rows = [symbols[i : i + width] for i in range(0, len(symbols), width)]
    header = f"{MAGIC} {VERSION} {grid.d} {grid.n} {grid.f} {partition.q}"
    return header + "\n" + "\n".join(rows) + "\n"


def parse_partition(text: str) -> PhasePartition:
    header, _, body = text.partition("\n")
    fields = header.split()
    if len(fields) != 6 or fields[0] != MAGIC or fields[1] != VERSION:
        raise SnapshotFormatError(f"not a partition header: {header!r}")
    try:
        d, n, f, q = (int(v) for v in fields[2:])
        grid = BlockGrid(d=d, n=n, f=f)
    except ValueError as exc:
        raise SnapshotFormatError(f"malformed partition header: {header!r}") from exc
    symbols = "".join(body.split())
    if len(symbols) != grid.num_blocks:
        raise SnapshotFormatError(
            f"partition payload truncated or padded: expected {grid.num_blocks} "
            f"labels, found {len(symbols)}"
        )
    try:
        labels = np.array([_DIGITS.index(s) for s in symbols], dtype=np.int16)
    except ValueError as exc:
        raise SnapshotFormatError("partition payload holds a non base-36 symbol") from exc
    if labels.size and labels.max() > q:
        raise SnapshotFormatError(f"partition label above q={q}")
    return PhasePartition(grid, q, labels.reshape(grid.shape))


def save_partition(path: str | Path, partition: PhasePartition) -> None:
    Path(path).write_text(render_partition(partition), encoding="ascii", newline="\n")


def load_partition(path: str | Path) -> PhasePartition:
    return parse_partition(Path(path).read_text(encoding="ascii"))
