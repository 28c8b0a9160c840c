"""
Tensor-factor bookkeeping: dimension profiles and bipartition cuts.

Party A is the slowest-varying tensor index, so a profile (n_A, n_B) orders
basis states as |00>, |01>, ..., |10>, ... exactly like |ab> kets.
"""

from __future__ import annotations

import math
import re
import string
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .exceptions import InvalidCutError, InvalidProfileError

__all__ = ["DimensionProfile", "Cut", "default_labels"]

_PROFILE_RE = re.compile(r"^\s*\d+(\s*x\s*\d+)*\s*$")


def default_labels(count: int) -> Tuple[str, ...]:
    """Party labels A, B, C, ... for `count` parties."""
    if count > len(string.ascii_uppercase):
        raise InvalidProfileError(f"At most {len(string.ascii_uppercase)} parties are supported, got {count}")
    return tuple(string.ascii_uppercase[:count])


@dataclass(frozen=True)
class DimensionProfile:
    """Ordered subsystem dimensions with party labels."""

    dims: Tuple[int, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise InvalidProfileError("A profile needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise InvalidProfileError(f"All subsystem dimensions must be >= 2, got {dims}")
        labels = tuple(self.labels) if self.labels else default_labels(len(dims))
        if len(labels) != len(dims):
            raise InvalidProfileError(f"{len(labels)} labels given for {len(dims)} subsystems")
        if len(set(labels)) != len(labels):
            raise InvalidProfileError(f"Party labels must be distinct, got {labels}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def parse(cls, spec: str, labels: Optional[Sequence[str]] = None) -> "DimensionProfile":
        """Parse a profile spec such as '2x3' or '2x2x2'."""
        if not isinstance(spec, str) or not _PROFILE_RE.match(spec):
            raise InvalidProfileError(f"Malformed profile spec '{spec}', expected integers joined by 'x' (e.g. 2x3)")
        dims = tuple(int(part) for part in spec.replace(" ", "").split("x"))
        return cls(dims, tuple(labels) if labels else ())

    @classmethod
    def single(cls, dim: int, label: str = "A") -> "DimensionProfile":
        return cls((dim,), (label,))

    @property
    def spec(self) -> str:
        return "x".join(str(d) for d in self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidCutError(f"Unknown party label '{label}' for profile {self.spec} with labels {self.labels}")

    def dim_of(self, parties: Iterable[int]) -> int:
        return math.prod(self.dims[i] for i in parties)

    def subprofile(self, keep: Iterable[int]) -> "DimensionProfile":
        """Profile of the kept parties, in profile order."""
        kept = self.normalize_keep(keep)
        return DimensionProfile(tuple(self.dims[i] for i in kept), tuple(self.labels[i] for i in kept))

    def normalize_keep(self, keep: Iterable[int]) -> Tuple[int, ...]:
        kept = tuple(sorted(set(int(i) for i in keep)))
        if not kept:
            raise InvalidProfileError("Partial trace needs a nonempty set of kept parties")
        if kept[0] < 0 or kept[-1] >= self.n_parties:
            raise InvalidProfileError(f"Kept party indices {kept} out of range for {self.n_parties} parties")
        return kept


@dataclass(frozen=True)
class Cut:
    """A bipartition of a profile's parties into two nonempty groups."""

    left: Tuple[int, ...]
    right: Tuple[int, ...]

    @classmethod
    def parse(cls, spec: str, profile: DimensionProfile) -> "Cut":
        """
        Parse a cut spec such as 'A|BC'.

        Single-character labels may be run together; longer labels are
        comma separated on each side ('Alice|Bob,Carol').
        """
        if not isinstance(spec, str) or spec.count("|") != 1:
            raise InvalidCutError(f"Malformed cut '{spec}', expected exactly one '|' (e.g. A|BC)")
        short_labels = all(len(label) == 1 for label in profile.labels)
        sides = []
        for side in spec.split("|"):
            side = side.strip()
            if short_labels and "," not in side:
                names = list(side)
            else:
                names = [s.strip() for s in side.split(",")]
            sides.append(tuple(profile.index_of(name) for name in names if name))
        return cls.from_groups(sides[0], sides[1], profile)

    @classmethod
    def from_groups(cls, left: Iterable[int], right: Iterable[int], profile: DimensionProfile) -> "Cut":
        left_t = tuple(sorted(set(left)))
        right_t = tuple(sorted(set(right)))
        if not left_t or not right_t:
            raise InvalidCutError("Both sides of a cut must be nonempty")
        if set(left_t) & set(right_t):
            raise InvalidCutError(f"Cut sides overlap: {left_t} and {right_t}")
        if set(left_t) | set(right_t) != set(range(profile.n_parties)):
            raise InvalidCutError(f"Cut {left_t}|{right_t} does not cover all {profile.n_parties} parties")
        return cls(left_t, right_t)

    @classmethod
    def default(cls, profile: DimensionProfile) -> "Cut":
        """First party against the rest."""
        if profile.n_parties < 2:
            raise InvalidCutError(f"Profile {profile.spec} has a single party and cannot be cut")
        return cls((0,), tuple(range(1, profile.n_parties)))

    def label(self, profile: DimensionProfile) -> str:
        join = "" if all(len(label) == 1 for label in profile.labels) else ","
        left = join.join(profile.labels[i] for i in self.left)
        right = join.join(profile.labels[i] for i in self.right)
        return f"{left}|{right}"
