"""Bipartite stream records, edge-list parsing, and the in-memory graph snapshot."""

from __future__ import annotations

from dataclasses import dataclass, field

COMMENT_PREFIXES = ("%", "#")


class ParseError(ValueError):
    """Raised for a malformed stream line; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class ValidationError(ValueError):
    """Raised for well-formed input that violates a stream constraint."""


@dataclass(slots=True)
class StreamRecord:
    """One stream graph record: an edge insertion (i, j) at timestamp tau."""

    tau: int
    i: int
    j: int


class VertexInterner:
    """Maps external vertex labels to dense integer ids, one namespace per side.

    i-side and j-side labels never share ids, so the same label on both sides
    yields two independent vertices.
    """

    def __init__(self):
        self._maps = {"i": {}, "j": {}}

    def intern(self, label: str, side: str) -> int:
        m = self._maps[side]
        vid = m.get(label)
        if vid is None:
            vid = len(m)
            m[label] = vid
        return vid

    def mapping(self, side: str) -> dict[str, int]:
        return dict(self._maps[side])

    def size(self, side: str) -> int:
        return len(self._maps[side])


@dataclass(slots=True)
class EdgeFormat:
    """Column layout of a whitespace- or character-delimited edge file.

    columns names the fields in file order; recognized names are "i", "j",
    "tau" (alias "t"), and "_" for a column to ignore. delimiter None means
    any run of whitespace.
    """

    columns: tuple[str, ...] = ("i", "j", "tau")
    delimiter: str | None = None

    def __post_init__(self):
        cols = tuple("tau" if c == "t" else c for c in self.columns)
        object.__setattr__(self, "columns", cols)
        for name in ("i", "j", "tau"):
            if cols.count(name) != 1:
                raise ValueError(f"format needs exactly one {name!r} column, got {cols}")

    @classmethod
    def from_string(cls, layout: str) -> "EdgeFormat":
        """Builds a format from a compact layout like "i j tau" or "tau,i,j".

        A comma or semicolon in the layout doubles as the file delimiter;
        otherwise whitespace-delimited files are assumed.
        """
        for delim in (",", ";"):
            if delim in layout:
                return cls(tuple(tok.strip() for tok in layout.split(delim)), delim)
        return cls(tuple(layout.split()), None)


def parse_record(line: str, fmt: EdgeFormat, interner: VertexInterner, line_no: int = 0) -> StreamRecord:
    """Parses one edge line into a StreamRecord with interned vertex ids."""
    parts = line.split(fmt.delimiter)
    if len(parts) < len(fmt.columns):
        raise ParseError(line_no, f"missing field: expected {len(fmt.columns)} columns, got {len(parts)}")
    raw = dict(zip(fmt.columns, parts))
    try:
        tau = int(raw["tau"])
    except ValueError:
        raise ParseError(line_no, f"timestamp {raw['tau']!r} is not an integer") from None
    if tau < 0:
        raise ValidationError(f"line {line_no}: negative timestamp {tau}")
    return StreamRecord(tau=tau, i=interner.intern(raw["i"].strip(), "i"), j=interner.intern(raw["j"].strip(), "j"))


@dataclass(slots=True)
class StreamSource:
    """An ordered stream of records, sorted by timestamp (ties keep input order)."""

    records: list[StreamRecord]
    interner: VertexInterner | None = None

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def unique_timestamp_count(self) -> int:
        return len({r.tau for r in self.records})

    @property
    def average_rate(self) -> float:
        """Mean records per distinct timestamp."""
        n_stamps = self.unique_timestamp_count
        return len(self.records) / n_stamps if n_stamps else 0.0


def load_stream(path: str, fmt: EdgeFormat | None = None) -> StreamSource:
    """Reads an edge file into a StreamSource.

    Lines starting with '%' or '#' and blank lines are skipped. Records are
    stably sorted by timestamp so equal stamps preserve file order.
    """
    fmt = fmt or EdgeFormat()
    interner = VertexInterner()
    records = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith(COMMENT_PREFIXES):
                continue
            records.append(parse_record(stripped, fmt, interner, line_no))
    records.sort(key=lambda r: r.tau)
    return StreamSource(records=records, interner=interner)


def write_stream(source: StreamSource, path: str, delimiter: str = " ") -> None:
    """Writes records as "i j tau" lines (or with the given delimiter)."""
    with open(path, "w") as fh:
        for r in source.records:
            fh.write(f"{r.i}{delimiter}{r.j}{delimiter}{r.tau}\n")


class BipartiteSnapshot:
    """Adjacency-set view of the bipartite graph accumulated from a stream.

    Vertex ids on the i-side and j-side are independent namespaces. Duplicate
    edge insertions are ignored. first_seen_* record the timestamp of the
    record that introduced each vertex. When record_stamps is set, the stamp
    of the record that first inserted each edge is kept for inter-arrival
    analysis.

    Mutation is single-writer; a snapshot handed off at a window boundary is
    safe to read from another thread because the producer starts a fresh one.
    """

    __slots__ = ("i_adj", "j_adj", "edge_count", "first_seen_i", "first_seen_j", "edge_stamps")

    def __init__(self, record_stamps: bool = False):
        self.i_adj: dict[int, set[int]] = {}
        self.j_adj: dict[int, set[int]] = {}
        self.edge_count = 0
        self.first_seen_i: dict[int, int] = {}
        self.first_seen_j: dict[int, int] = {}
        self.edge_stamps: dict[tuple[int, int], int] | None = {} if record_stamps else None

    def insert(self, i: int, j: int, tau: int = 0) -> bool:
        """Adds edge (i, j); returns False for a duplicate, which changes nothing."""
        nbrs = self.i_adj.get(i)
        if nbrs is None:
            self.i_adj[i] = {j}
            self.first_seen_i[i] = tau
        elif j in nbrs:
            return False
        else:
            nbrs.add(j)
        jnbrs = self.j_adj.get(j)
        if jnbrs is None:
            self.j_adj[j] = {i}
            self.first_seen_j[j] = tau
        else:
            jnbrs.add(i)
        self.edge_count += 1
        if self.edge_stamps is not None:
            self.edge_stamps[(i, j)] = tau
        return True

    def has_edge(self, i: int, j: int) -> bool:
        nbrs = self.i_adj.get(i)
        return nbrs is not None and j in nbrs

    def has_vertex(self, v: int, side: str) -> bool:
        return v in (self.i_adj if side == "i" else self.j_adj)

    def degree(self, v: int, side: str) -> int:
        """Degree of v on the given side; 0 for absent vertices (see has_vertex)."""
        adj = self.i_adj if side == "i" else self.j_adj
        nbrs = adj.get(v)
        return len(nbrs) if nbrs is not None else 0

    def adjacency(self, side: str) -> dict[int, set[int]]:
        return self.i_adj if side == "i" else self.j_adj

    def n_vertices(self, side: str) -> int:
        return len(self.i_adj if side == "i" else self.j_adj)

    def edges(self):
        """Yields every (i, j) edge once."""
        for i, nbrs in self.i_adj.items():
            for j in nbrs:
                yield (i, j)

    def first_seen(self, v: int, side: str) -> int | None:
        return (self.first_seen_i if side == "i" else self.first_seen_j).get(v)


def snapshot_from_edges(edges, stamps=None, record_stamps: bool = False) -> BipartiteSnapshot:
    """Builds a snapshot from (i, j) pairs, with optional per-edge stamps."""
    snap = BipartiteSnapshot(record_stamps=record_stamps)
    if stamps is None:
        for i, j in edges:
            snap.insert(i, j)
    else:
        for (i, j), tau in zip(edges, stamps):
            snap.insert(i, j, tau)
    return snap
