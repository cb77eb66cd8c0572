"""digraph6, edge-list and partition text formats."""
from __future__ import annotations

import json

from .digraph import Digraph
from .errors import PreconditionError


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise PreconditionError("digraph6 size field overflow")


def encode_digraph6(d: Digraph) -> str:
    """'&', the vertex count, then n*n row-major adjacency bits in 6-bit groups."""
    n = d.n
    bits = []
    for u in range(n):
        row = d.out[u]
        bits.extend((row >> v) & 1 for v in range(n))
    bits.extend([0] * (-len(bits) % 6))
    chunks = []
    for j in range(0, len(bits), 6):
        val = 0
        for b in bits[j:j + 6]:
            val = val << 1 | b
        chunks.append(chr(val + 63))
    return "&" + _encode_n(n) + "".join(chunks)


def decode_digraph6(text: str) -> Digraph:
    s = text.strip()
    if not s.startswith("&"):
        raise PreconditionError("digraph6 strings start with '&'")
    data = [ord(c) - 63 for c in s[1:]]
    if any(not 0 <= x < 64 for x in data):
        raise PreconditionError("digraph6 byte outside the printable range")
    if not data:
        raise PreconditionError("digraph6 string has no size field")
    if data[0] == 63:
        if len(data) < 4:
            raise PreconditionError("truncated digraph6 size field")
        n = data[1] << 12 | data[2] << 6 | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    need = -(-n * n // 6)
    if len(body) != need:
        raise PreconditionError(f"digraph6 body has {len(body)} bytes, expected {need}")
    out = [0] * n
    k = 0
    for u in range(n):
        for v in range(n):
            byte, off = divmod(k, 6)
            if body[byte] >> (5 - off) & 1:
                if u == v:
                    raise PreconditionError("digraph6 loop bit set")
                out[u] |= 1 << v
            k += 1
    return Digraph.from_masks(n, out)


def format_edge_list(d: Digraph) -> str:
    arcs = d.arc_list()
    lines = [f"{d.n} {len(arcs)}"] + [f"{u} {v}" for u, v in arcs]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Digraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise PreconditionError("edge list must start with 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        arcs = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise PreconditionError(f"malformed edge list: {exc}") from None
    if len(arcs) != m:
        raise PreconditionError(f"edge list declares {m} arcs but lists {len(arcs)}")
    return Digraph(n, arcs)


def read_digraph(path: str) -> Digraph:
    """Edge-list file, or a file whose first line is a digraph6 string."""
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    if text.lstrip().startswith("&"):
        return decode_digraph6(text.split()[0])
    return parse_edge_list(text)


def parse_partition(text: str) -> list[tuple[int, ...]]:
    """One path per non-empty line, vertices separated by spaces, commas or '->'."""
    paths = []
    for ln in text.splitlines():
        tokens = ln.replace("->", " ").replace(",", " ").split()
        if tokens:
            paths.append(tuple(int(t) for t in tokens))
    return paths


def format_partition(paths) -> str:
    return "".join(" ".join(map(str, p)) + "\n" for p in paths)


def parse_vertex_list(text: str) -> frozenset:
    text = text.strip().strip("{}")
    if not text:
        return frozenset()
    return frozenset(int(t) for t in text.replace(",", " ").split())


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
