"""
Hypergraphs app: graph and hypergraph instances, their Laplacians and
quadratic forms, the bounded-degree cloud reduction and the text formats.
"""
