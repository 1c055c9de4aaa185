"""Similarity measure identifiers and the UNDEFINED sentinel.

Similarities are stored as plain float64.  A similarity that cannot be
computed (too few co-rated items, zero norm, zero variance) is ``-inf``, which
sorts below every real value, so neighbour ranking needs no special casing.
"""

from enum import IntEnum

import numpy as np

UNDEFINED = -np.inf


class Measure(IntEnum):
    EUCLIDEAN = 0
    COSINE = 1
    PEARSON = 2

    @classmethod
    def parse(cls, name):
        if isinstance(name, Measure):
            return name
        try:
            return cls[str(name).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown similarity measure {name!r}; expected one of "
                             f"{', '.join(m.name.lower() for m in cls)}") from None

    @property
    def label(self):
        return self.name.lower()


def is_defined(value):
    """True where a similarity (scalar or array) is a real number."""
    return np.isfinite(value)
