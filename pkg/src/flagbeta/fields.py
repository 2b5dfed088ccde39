"""Arithmetic over the three real division algebras: R, C and the quaternions H.

Every scalar is stored as four real components on the basis (1, i, j, k);
for R and C the trailing components are identically zero.  This gives a single
quaternion code path that serves all three algebras, which is what the matrix
layer and the samplers rely on.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "Field",
    "FieldMismatchError",
    "Scalar",
    "mul",
    "conj",
    "abs2",
    "inv",
    "gaussian_sample",
    "mul4",
    "conj4",
    "abs2_4",
    "gaussian_batch",
]


class FieldMismatchError(ValueError):
    """Two operands carry different base-field tags."""


_KAPPA = {"r": 1, "c": 2, "h": 4}


class Field(enum.Enum):
    """Base-field tag: real numbers, complex numbers or quaternions."""

    REAL = "r"
    COMPLEX = "c"
    QUATERNION = "h"

    @property
    def kappa(self) -> int:
        """Dimension over the reals: 1, 2 or 4."""
        return _KAPPA[self.value]

    @classmethod
    def from_string(cls, s: str) -> "Field":
        key = s.strip().lower()
        aliases = {
            "r": cls.REAL, "real": cls.REAL,
            "c": cls.COMPLEX, "complex": cls.COMPLEX,
            "h": cls.QUATERNION, "quaternion": cls.QUATERNION,
        }
        if key not in aliases:
            raise ValueError(f"unknown field {s!r}; expected one of r, c, h")
        return aliases[key]

    def __repr__(self):
        return f"Field.{self.name}"


# ---------------------------------------------------------------------------
# component-level kernels on (..., 4) float arrays
# ---------------------------------------------------------------------------

def mul4(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Quaternion product on (..., 4) component arrays (broadcasts).

    With zero trailing components this reduces to complex or real
    multiplication, so it is the product for every field.
    """
    x0, x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    y0, y1, y2, y3 = y[..., 0], y[..., 1], y[..., 2], y[..., 3]
    out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=np.float64)
    out[..., 0] = x0 * y0 - x1 * y1 - x2 * y2 - x3 * y3
    out[..., 1] = x0 * y1 + x1 * y0 + x2 * y3 - x3 * y2
    out[..., 2] = x0 * y2 - x1 * y3 + x2 * y0 + x3 * y1
    out[..., 3] = x0 * y3 + x1 * y2 - x2 * y1 + x3 * y0
    return out


def conj4(x: np.ndarray) -> np.ndarray:
    out = x.copy()
    out[..., 1:] *= -1.0
    return out


def abs2_4(x: np.ndarray) -> np.ndarray:
    return np.sum(x * x, axis=-1)


def gaussian_batch(field: Field, rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, 4) array of scalars with kappa iid standard-normal components."""
    out = np.zeros((size, 4))
    out[:, : field.kappa] = rng.standard_normal((size, field.kappa))
    return out


# ---------------------------------------------------------------------------
# scalar values
# ---------------------------------------------------------------------------

class Scalar:
    """One element of R, C or H, stored as 4 real components plus a field tag."""

    __slots__ = ("components", "field")

    def __init__(self, components, field: Field):
        comps = np.asarray(components, dtype=np.float64)
        if comps.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {comps.shape}")
        if np.any(comps[field.kappa:] != 0.0):
            raise ValueError(f"components beyond kappa={field.kappa} must be zero")
        self.components = comps
        self.field = field

    # constructors ---------------------------------------------------------
    @classmethod
    def of(cls, field: Field, *comps: float) -> "Scalar":
        if len(comps) > field.kappa:
            raise ValueError(f"at most {field.kappa} components for {field}")
        full = np.zeros(4)
        full[: len(comps)] = comps
        return cls(full, field)

    @classmethod
    def zero(cls, field: Field) -> "Scalar":
        return cls.of(field)

    @classmethod
    def one(cls, field: Field) -> "Scalar":
        return cls.of(field, 1.0)

    @classmethod
    def unit(cls, field: Field, axis: int) -> "Scalar":
        """Basis element: axis 0 -> 1, 1 -> i, 2 -> j, 3 -> k."""
        if axis >= field.kappa:
            raise ValueError(f"axis {axis} not available for {field}")
        full = np.zeros(4)
        full[axis] = 1.0
        return cls(full, field)

    # helpers --------------------------------------------------------------
    @property
    def real(self) -> float:
        return float(self.components[0])

    def to_complex(self) -> complex:
        if self.field is Field.QUATERNION:
            raise FieldMismatchError("quaternion scalar has no complex form")
        return complex(self.components[0], self.components[1])

    def is_zero(self) -> bool:
        return bool(np.all(self.components == 0.0))

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Scalar"):
        if self.field is not other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __mul__(self, other):
        if isinstance(other, Scalar):
            self._check(other)
            return Scalar(mul4(self.components, other.components), self.field)
        return Scalar(self.components * float(other), self.field)

    def __rmul__(self, other):
        return Scalar(self.components * float(other), self.field)

    def __add__(self, other: "Scalar"):
        self._check(other)
        return Scalar(self.components + other.components, self.field)

    def __sub__(self, other: "Scalar"):
        self._check(other)
        return Scalar(self.components - other.components, self.field)

    def __neg__(self):
        return Scalar(-self.components, self.field)

    def conj(self) -> "Scalar":
        return Scalar(conj4(self.components), self.field)

    def abs2(self) -> float:
        return float(abs2_4(self.components))

    def norm(self) -> float:
        return float(np.sqrt(self.abs2()))

    def inv(self) -> "Scalar":
        a2 = self.abs2()
        if a2 == 0.0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(conj4(self.components) / a2, self.field)

    def __repr__(self):
        comps = ", ".join(f"{c:.6g}" for c in self.components[: self.field.kappa])
        return f"Scalar[{self.field.value}]({comps})"


# ---------------------------------------------------------------------------
# functional interface
# ---------------------------------------------------------------------------

def mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def conj(x: Scalar) -> Scalar:
    return x.conj()


def abs2(x: Scalar) -> float:
    return x.abs2()


def inv(x: Scalar) -> Scalar:
    return x.inv()


def gaussian_sample(field: Field, rng: np.random.Generator) -> Scalar:
    """Scalar with kappa independent standard-normal components."""
    return Scalar(gaussian_batch(field, rng, 1)[0], field)
