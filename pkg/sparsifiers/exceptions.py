"""sparsifiers.exceptions"""
from hypergraphs.exceptions import SparsificationError


class ResampleCapExceeded(SparsificationError):
    """The resampling loop used up its round budget."""

    def __init__(self, rounds, cap, level=None):
        self.rounds = rounds
        self.cap = cap
        self.level = level
        super().__init__(f"resampling stopped after {rounds} rounds (cap {cap}, level {level})")


class BisectionFailure(SparsificationError):
    """The trace of the regularized iterate is not monotone in the shift."""


class WidthConditionViolated(SparsificationError):
    """eta * X^(1/4) C X^(1/4) left the interval allowed by the learning rate."""

    def __init__(self, step, width):
        self.step = step
        self.width = width
        super().__init__(f"width condition violated at step {step}: {width:.6g} > 1/4")


class SandwichViolation(SparsificationError):
    """A hyperedge quadratic form fell outside its clique bounds."""


class RecertificationFailed(SparsificationError):
    """A halving still violated a core event after every attempt."""

    def __init__(self, level, ratio):
        self.level = level
        self.ratio = ratio
        super().__init__(f"level {level} failed re-certification: deviation ratio {ratio:.6g} > 1")
