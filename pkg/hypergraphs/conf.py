"""hypergraphs.conf

Access to the SPARSIFY settings block. Library functions accept explicit
keyword arguments; ``None`` means "use the configured value".
"""
from django.conf import settings


def sparsify_setting(name, value=None):
    if value is not None:
        return value
    return settings.SPARSIFY[name]
