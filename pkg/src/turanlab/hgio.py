"""Reader and writer for the plain-text ``.hg`` hypergraph format.

Layout::

    n r m
    #parts 3 2 2          (optional partition sidecar)
    0 1 2
    ...

The header is the first non-comment line. Each of the ``m`` edge lines lists
``r`` zero-based vertex ids in increasing order (one-based ``[n]`` is
shifted down by one). Lines starting with ``#`` are comments. Writers always
emit edges in lexicographic order, so output is byte-stable.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .hypercore import Hypergraph


class HgFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def dumps(H: Hypergraph, parts: Sequence[Sequence[int]] | None = None, comments: Sequence[str] = ()) -> str:
    lines = [f"{H.n} {H.r} {len(H)}"]
    if parts is not None:
        lines.append("#parts " + " ".join(str(len(p)) for p in parts))
    lines.extend(f"# {c}" for c in comments)
    lines.extend(" ".join(map(str, e)) for e in H.edge_tuples())
    return "\n".join(lines) + "\n"


def loads(text: str) -> tuple[Hypergraph, list[list[int]] | None]:
    """Parse ``.hg`` text. Returns the hypergraph and the parts, if declared.

    Declared part sizes are expanded to consecutive vertex blocks.
    """
    header: tuple[int, int, int] | None = None
    part_sizes: list[int] | None = None
    edges: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("#parts"):
                try:
                    part_sizes = [int(t) for t in line.split()[1:]]
                except ValueError:
                    raise HgFormatError("malformed #parts line", lineno) from None
            continue
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise HgFormatError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 3 or min(nums) < 0:
                raise HgFormatError("header must be 'n r m' with nonnegative integers", lineno)
            header = (nums[0], nums[1], nums[2])
            if header[1] < 1:
                raise HgFormatError("uniformity r must be positive", lineno)
            continue
        n, r, _ = header
        if len(nums) != r:
            raise HgFormatError(f"expected {r} vertices, got {len(nums)}", lineno)
        if any(v < 0 or v >= n for v in nums):
            raise HgFormatError(f"vertex out of range 0..{n - 1}", lineno)
        if any(a >= b for a, b in zip(nums, nums[1:])):
            raise HgFormatError("edge vertices must be strictly increasing", lineno)
        edges.append(tuple(nums))
    if header is None:
        raise HgFormatError("missing header line")
    n, r, m = header
    if len(edges) != m:
        raise HgFormatError(f"header declares {m} edges but {len(edges)} found")
    H = Hypergraph.from_edges(n, r, edges)
    parts = None
    if part_sizes is not None:
        if sum(part_sizes) != n:
            raise HgFormatError(f"#parts sizes sum to {sum(part_sizes)}, expected {n}")
        parts, start = [], 0
        for size in part_sizes:
            parts.append(list(range(start, start + size)))
            start += size
    return H, parts


def read_hg(path: str | Path) -> tuple[Hypergraph, list[list[int]] | None]:
    return loads(Path(path).read_text())


def write_hg(path: str | Path, H: Hypergraph, parts: Sequence[Sequence[int]] | None = None) -> None:
    Path(path).write_text(dumps(H, parts))
