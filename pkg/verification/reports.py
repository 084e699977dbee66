"""verification.reports

QualityReport: the outcome of one certificate, serialized as canonical JSON
(sorted keys, fixed indentation) so identical runs give identical files.
"""
import json
from dataclasses import asdict, dataclass, field

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

# absolute tolerance on every excess over a stated bound
PASS_TOLERANCE = 1e-8


class ReportEncoder(DjangoJSONEncoder):
    """DjangoJSONEncoder that also understands numpy scalars and arrays."""

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        return super().default(o)


def canonical_json(payload):
    return json.dumps(payload, cls=ReportEncoder, sort_keys=True, indent=2) + '\n'


def _plain(value):
    return json.loads(json.dumps(value, cls=ReportEncoder))


@dataclass
class QualityReport:
    """
    ``worst_excess`` is the largest amount by which a measured quantity
    exceeded its bound (negative when every bound holds with room), at the
    input ``witness``; ``worst_value`` is the measured quantity there.
    """
    guarantee: str
    epsilon: float
    scale: float
    worst_excess: float
    worst_value: float = 0.0
    witness: object = None
    certificate_eigenvalues: dict = field(default_factory=dict)
    slack_constants: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    seeds: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.witness = _plain(self.witness)

    @property
    def passed(self):
        return bool(self.worst_excess <= PASS_TOLERANCE)

    def as_dict(self):
        payload = asdict(self)
        payload['passed'] = self.passed
        return _plain(payload)

    def to_json(self):
        return canonical_json(self.as_dict())

    def merge(self, other):
        """
        Max-reduction of two reports of the same guarantee. Associative and
        commutative: the worse excess wins, ties go to the smaller witness.
        """
        if (self.guarantee, self.epsilon) != (other.guarantee, other.epsilon):
            raise ValueError(
                f"cannot merge a {self.guarantee} report with a {other.guarantee} report"
            )
        if self.worst_excess != other.worst_excess:
            worst = self if self.worst_excess > other.worst_excess else other
        else:
            worst = min((self, other), key=lambda report: canonical_json(report.witness))
        return QualityReport(
            guarantee=self.guarantee,
            epsilon=self.epsilon,
            scale=worst.scale,
            worst_excess=worst.worst_excess,
            worst_value=max(self.worst_value, other.worst_value),
            witness=worst.witness,
            certificate_eigenvalues=_combine(self.certificate_eigenvalues, other.certificate_eigenvalues, min),
            slack_constants=_combine(self.slack_constants, other.slack_constants, max),
            details=_combine(self.details, other.details, max),
            seeds=sorted(set(self.seeds) | set(other.seeds)),
            config=worst.config,
        )


def _combine(left, right, reduce):
    """Key-wise reduction; non-numeric values keep the smaller canonical form."""
    combined = {}
    for key in sorted(set(left) | set(right)):
        if key not in left or key not in right:
            combined[key] = left.get(key, right.get(key))
            continue
        a, b = left[key], right[key]
        if isinstance(a, (int, float)) and isinstance(b, (int, float)) and not isinstance(a, bool):
            combined[key] = reduce(a, b)
        else:
            combined[key] = min(a, b, key=canonical_json)
    return combined
