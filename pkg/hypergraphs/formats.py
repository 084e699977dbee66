"""hypergraphs.formats

Plain-text instance formats.

Graph::

    g <n> <m>
    <a> <b> [w]          (m lines)

Hypergraph::

    h <n> <m>
    [w=<w>] <v1> ... <vk>  (m lines)

Blank lines and lines starting with ``#`` are ignored, except a leading
``# scale c=<c>`` line which carries the scale of a sparsifier. Vertex
tokens that are all nonnegative integers are used as indices; any other
labelling is remapped to 0..n-1 in order of first appearance. Numeric
indices are 0-based; negative integers are rejected.
"""
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import GraphFormatError, InvalidInstanceError
from .structures import Graph, Hypergraph

SCALE_PREFIX = '# scale c='
NEGATIVE_INDEX = re.compile(r"-\d+")


@dataclass(frozen=True, eq=False)
class LoadedInstance:
    instance: object
    labels: list
    scale: float = None

    @property
    def is_hypergraph(self):
        return isinstance(self.instance, Hypergraph)


def _parse_weight(token, line_number):
    try:
        weight = float(token)
    except ValueError:
        raise GraphFormatError(f"weight {token!r} is not a number", line_number) from None
    if not math.isfinite(weight) or weight < 0:
        raise GraphFormatError(f"weight {token!r} must be finite and nonnegative", line_number)
    return weight


def _content_lines(text):
    """(scale, [(line_number, tokens), ...]) with comments removed."""
    scale = None
    lines = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith(SCALE_PREFIX) and not lines:
            value = stripped[len(SCALE_PREFIX):].strip()
            try:
                scale = float(value)
            except ValueError:
                raise GraphFormatError(f"scale {value!r} is not a number", line_number) from None
            continue
        if not stripped or stripped.startswith('#'):
            continue
        lines.append((line_number, stripped.split()))
    return scale, lines


def _parse_header(lines, kind):
    if not lines:
        raise GraphFormatError(f"missing '{kind} <n> <m>' header")
    line_number, tokens = lines[0]
    if len(tokens) != 3 or tokens[0] != kind:
        raise GraphFormatError(f"expected header '{kind} <n> <m>', got {' '.join(tokens)!r}", line_number)
    try:
        n, m = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise GraphFormatError("vertex and edge counts must be integers", line_number) from None
    if n < 0 or m < 0:
        raise GraphFormatError("vertex and edge counts must be nonnegative", line_number)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else None
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", where)
    return n, body


class _LabelTable:
    """Maps vertex tokens to indices once every token of the file is known."""

    def __init__(self, n, rows):
        self.n = n
        tokens = [(line_number, token) for line_number, row in rows for token in row]
        for line_number, token in tokens:
            if NEGATIVE_INDEX.fullmatch(token):
                raise GraphFormatError(f"negative vertex index {token}; indices are 0-based", line_number)
        if all(token.isdigit() for _, token in tokens):
            for line_number, token in tokens:
                if int(token) >= n:
                    raise GraphFormatError(
                        f"vertex {token} out of range [0, {n}); numeric vertex indices are 0-based",
                        line_number,
                    )
            self.index = None
            self.labels = [str(i) for i in range(n)]
            return
        self.index = {}
        for line_number, token in tokens:
            if token not in self.index:
                if len(self.index) == n:
                    raise GraphFormatError(f"more than {n} distinct vertex labels", line_number)
                self.index[token] = len(self.index)
        self.labels = list(self.index) + [None] * (n - len(self.index))

    def __call__(self, token):
        return int(token) if self.index is None else self.index[token]


def read_graph_text(text):
    scale, lines = _content_lines(text)
    n, body = _parse_header(lines, 'g')
    rows, weights = [], []
    for line_number, tokens in body:
        if len(tokens) not in (2, 3):
            raise GraphFormatError("edge lines have the form 'a b [w]'", line_number)
        if tokens[0] == tokens[1]:
            raise GraphFormatError(f"self-loop at vertex {tokens[0]}", line_number)
        rows.append((line_number, tokens[:2]))
        weights.append(_parse_weight(tokens[2], line_number) if len(tokens) == 3 else 1.0)
    table = _LabelTable(n, rows)
    edges = np.array([[table(a), table(b)] for _, (a, b) in rows], dtype=np.int64).reshape(-1, 2)
    return LoadedInstance(Graph(n, edges, weights), table.labels, scale)


def read_hypergraph_text(text):
    scale, lines = _content_lines(text)
    n, body = _parse_header(lines, 'h')
    rows, weights = [], []
    for line_number, tokens in body:
        weight = 1.0
        if tokens and tokens[0].startswith('w='):
            weight = _parse_weight(tokens[0][2:], line_number)
            tokens = tokens[1:]
        if len(set(tokens)) != len(tokens):
            raise GraphFormatError("hyperedge repeats a vertex", line_number)
        rows.append((line_number, tokens))
        weights.append(weight)
    table = _LabelTable(n, rows)
    hyperedges = [[table(token) for token in tokens] for _, tokens in rows]
    return LoadedInstance(Hypergraph(n, hyperedges, weights), table.labels, scale)


def read_instance_text(text):
    """Dispatch on the header letter."""
    _, lines = _content_lines(text)
    if lines and lines[0][1][0] == 'h':
        return read_hypergraph_text(text)
    return read_graph_text(text)


def load_instance(path):
    return read_instance_text(Path(path).read_text())


def parse_graph(path):
    loaded = load_instance(path)
    if loaded.is_hypergraph:
        raise GraphFormatError(f"{path} holds a hypergraph, expected a graph")
    return loaded.instance


def parse_hypergraph(path):
    """A hypergraph file, or a graph file read as a 2-uniform hypergraph."""
    loaded = load_instance(path)
    if loaded.is_hypergraph:
        return loaded.instance
    return Hypergraph.from_graph(loaded.instance)


def _format_weight(weight):
    return repr(float(weight))


def serialize_graph(graph, scale=None):
    lines = [] if scale is None else [f"{SCALE_PREFIX}{float(scale)!r}"]
    lines.append(f"g {graph.n} {graph.m}")
    weighted = not graph.is_unweighted
    for (a, b), weight in zip(graph.edges.tolist(), graph.weights.tolist()):
        lines.append(f"{a} {b} {_format_weight(weight)}" if weighted else f"{a} {b}")
    return '\n'.join(lines) + '\n'


def serialize_hypergraph(hypergraph, scale=None):
    lines = [] if scale is None else [f"{SCALE_PREFIX}{float(scale)!r}"]
    lines.append(f"h {hypergraph.n} {hypergraph.m}")
    for members, weight in zip(hypergraph.hyperedges, hypergraph.weights.tolist()):
        vertices = ' '.join(str(v) for v in members)
        lines.append(vertices if weight == 1.0 else f"w={_format_weight(weight)} {vertices}")
    return '\n'.join(lines) + '\n'


def serialize(instance, scale=None):
    if isinstance(instance, Hypergraph):
        return serialize_hypergraph(instance, scale)
    if isinstance(instance, Graph):
        return serialize_graph(instance, scale)
    raise InvalidInstanceError(f"cannot serialize {type(instance).__name__}")


def label_map_path(output_path):
    output_path = Path(output_path)
    return output_path.with_name(output_path.name + '.labels.json')


def write_label_map(output_path, labels):
    """Persist index -> original label next to an output file."""
    path = label_map_path(output_path)
    path.write_text(json.dumps(labels, indent=2) + '\n')
    return path
