"""sparsifiers.enumeration

Connected vertex sets of bounded size. Each set is produced exactly once,
grown from its smallest vertex by exclusive-neighbourhood extension.
"""


def _extend(subset, extension, closed, root, adjacency, size_cap):
    yield tuple(sorted(subset))
    if len(subset) == size_cap:
        return
    extension = set(extension)
    while extension:
        vertex = min(extension)
        extension.discard(vertex)
        exclusive = {u for u in adjacency[vertex] if u > root and u not in closed}
        yield from _extend(
            subset + (vertex,),
            extension | exclusive,
            closed | set(adjacency[vertex]),
            root,
            adjacency,
            size_cap,
        )


def enumerate_connected_subsets(graph, size_cap, seed_vertices=None):
    """
    Yield every vertex set of size at most ``size_cap`` that induces a
    connected subgraph, as a sorted tuple. With ``seed_vertices`` only the
    sets meeting them are yielded.
    """
    if size_cap < 1:
        raise ValueError(f"size cap must be at least 1, got {size_cap}")
    adjacency = graph.adjacency_lists
    seeds = None if seed_vertices is None else set(seed_vertices)
    for root in range(graph.n):
        extension = {u for u in adjacency[root] if u > root}
        closed = {root, *adjacency[root]}
        for subset in _extend((root,), extension, closed, root, adjacency, size_cap):
            if seeds is None or not seeds.isdisjoint(subset):
                yield subset


def bipartitions(vertices):
    """
    Every split of a vertex tuple into (S, T) with both parts nonempty and
    the smallest vertex in S.
    """
    first, rest = vertices[0], vertices[1:]
    for mask in range(2 ** len(rest) - 1):
        left = [first] + [v for bit, v in enumerate(rest) if mask >> bit & 1]
        right = [v for bit, v in enumerate(rest) if not mask >> bit & 1]
        yield tuple(left), tuple(right)
