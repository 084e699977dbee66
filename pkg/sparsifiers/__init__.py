"""
Sparsifiers app: the halving constructions with resampling, the
deterministic density-matrix game, resistance sampling for hypergraphs and
the command pipelines that run them.
"""
