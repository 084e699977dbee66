"""sparsifiers.results"""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class SparsifierResult:
    """
    Selected edge multiset F as indices into the input's edge list (repeats
    allowed) together with the scale c applied to every selected edge.
    """
    edge_indices: np.ndarray
    scale: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        indices = np.asarray(self.edge_indices, dtype=np.int64).reshape(-1)
        indices.setflags(write=False)
        object.__setattr__(self, 'edge_indices', indices)
        object.__setattr__(self, 'scale', float(self.scale))

    @property
    def size(self):
        return int(self.edge_indices.shape[0])

    def selected(self, instance):
        """The unscaled multiset F as an instance of the input's type."""
        return instance.select(self.edge_indices)

    def sparsifier(self, instance):
        """F with every weight multiplied by the scale."""
        return instance.select(self.edge_indices).scaled(self.scale)
