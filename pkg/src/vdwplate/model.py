"""Geometry, units, and validity checks for the molecule/plate configuration.

Model units fix the kinetic prefactor and the Coulomb prefactor to 1, so the
free-hydrogen ground energy is exactly E_H = -1/4 and the electron/plate
reference energy is E_H/16 = -1/64.  All energies in the package are reported
in these units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Ground-state energy of free hydrogen in model units.
E_HYDROGEN = -0.25
# Ground-state energy of a single electron bound to a perfectly conducting
# plate by its own image charge: E_HYDROGEN / 16.
E_ELECTRON_PLATE = E_HYDROGEN / 16.0

UNIT_TOL = 1e-12
CENTERING_TOL = 1e-10
COINCIDENCE_TOL = 1e-12


def as_vec3(x) -> np.ndarray:
    """Coerce to a float array whose last axis has length 3; reject non-finite input."""
    a = np.asarray(x, dtype=float)
    if a.shape == () or a.shape[-1] != 3:
        raise ValueError(f"expected 3-component vector(s), got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector components must be finite")
    return a


def unit_vector(v) -> np.ndarray:
    """Validate that v is a unit 3-vector within 1e-12."""
    v = as_vec3(v)
    if v.ndim != 1:
        raise ValueError("plate normal must be a single 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValueError(f"|v| = {np.linalg.norm(v)!r} is not 1 within {UNIT_TOL}")
    return v


def reflect(x, v) -> np.ndarray:
    """Reflect x through the plane orthogonal to the unit vector v through the origin.

    For v = e1 this sends (x1, x2, x3) to (-x1, x2, x3).  Broadcasts over
    leading axes of x.
    """
    v = unit_vector(v)
    x = as_vec3(x)
    return x - 2.0 * (x @ v)[..., None] * v


@dataclass(frozen=True)
class PlateConfig:
    """Half-space interface: unit normal v, distance r from the origin, mirror strength m.

    The plate occupies {x : x.v <= -r}; the physical region is x.v > -r.
    m = 1 is a perfect conductor, 0 < m < 1 a dielectric.
    """

    v: np.ndarray
    r: float
    m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "v", unit_vector(self.v))
        self.v.setflags(write=False)
        if not self.r > 0:
            raise ValueError(f"plate distance r must be positive, got {self.r}")
        if not 0.0 < self.m <= 1.0:
            raise ValueError(f"reflection coefficient m must be in (0, 1], got {self.m}")

    @classmethod
    def normalized(cls, v, r: float, m: float = 1.0) -> "PlateConfig":
        """Build a PlateConfig normalizing v explicitly (never silently)."""
        v = as_vec3(v)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize a zero plate normal")
        return cls(v / n, r, m)

    def signed_distance(self, x) -> np.ndarray:
        """Distance of x from the plate plane, positive inside the physical half-space."""
        return as_vec3(x) @ self.v + self.r

    def mirror(self, x) -> np.ndarray:
        """Mirror image of x with respect to the plate plane {x.v = -r}."""
        x = as_vec3(x)
        return x - 2.0 * self.signed_distance(x)[..., None] * self.v


@dataclass(frozen=True)
class Molecule:
    """Fixed nuclei (Born-Oppenheimer) plus an electron count.

    charges holds the atomic numbers Z_k, positions the nuclear coordinates y_k.
    """

    charges: np.ndarray
    positions: np.ndarray
    n_electrons: int

    def __post_init__(self):
        z = np.asarray(self.charges, dtype=float)
        y = as_vec3(self.positions)
        if y.ndim == 1:
            y = y[None, :]
        if z.ndim != 1 or y.shape != (z.size, 3):
            raise ValueError("need one 3-vector position per nuclear charge")
        if np.any(z <= 0) or np.any(z != np.round(z)):
            raise ValueError("nuclear charges must be positive integers")
        object.__setattr__(self, "charges", z)
        object.__setattr__(self, "positions", y)
        self.charges.setflags(write=False)
        self.positions.setflags(write=False)

    @classmethod
    def hydrogen(cls) -> "Molecule":
        return cls(np.array([1.0]), np.zeros((1, 3)), 1)

    @classmethod
    def helium(cls) -> "Molecule":
        return cls(np.array([2.0]), np.zeros((1, 3)), 2)

    @property
    def total_charge(self) -> float:
        return float(self.charges.sum())

    def charge_center(self) -> np.ndarray:
        return self.charges @ self.positions / self.total_charge

    def recentered(self) -> "Molecule":
        """Return a copy translated so the charge-weighted center sits at the origin."""
        return Molecule(self.charges, self.positions - self.charge_center(), self.n_electrons)


@dataclass
class ValidationReport:
    """Outcome of validate_molecule: one entry per violated invariant."""

    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return "; ".join(self.violations)


def validate_molecule(mol: Molecule, plate: PlateConfig | None = None) -> ValidationReport:
    """Check neutrality, charge centering, and (given a plate) the nuclei-side condition.

    Diagnostic only: returns a report, never raises.
    """
    report = ValidationReport()
    if mol.n_electrons != round(mol.total_charge):
        report.violations.append(
            f"not neutral: N = {mol.n_electrons} but sum of Z = {mol.total_charge:g}"
        )
    center = mol.charges @ mol.positions
    if np.linalg.norm(center) > CENTERING_TOL:
        report.violations.append(
            f"not centered: |sum Z_k y_k| = {np.linalg.norm(center):.3e} > {CENTERING_TOL}"
        )
    if plate is not None:
        dist = plate.signed_distance(mol.positions)
        bad = np.nonzero(dist <= 0)[0]
        for k in bad:
            report.violations.append(
                f"nucleus {k} violates the side condition: y.v = {mol.positions[k] @ plate.v:g} <= -r = {-plate.r:g}"
            )
    return report


@dataclass(frozen=True)
class TrapezoidCheck:
    lhs: float
    rhs: float
    holds: bool


def trapezoid_inequality(a: float, c: float, b: float) -> TrapezoidCheck:
    """Check 2/b <= 1/a + 1/c for an isosceles trapezoid.

    a and c are the parallel side lengths, b the diagonal.  Realizability
    requires b >= (a+c)/2 (the diagonal is the hypotenuse of a right triangle
    with leg (a+c)/2); equality in the inequality occurs exactly in the
    degenerate collinear case a = b = c.
    """
    if min(a, c, b) <= 0:
        raise ValueError("side and diagonal lengths must be positive")
    if b < (a + c) / 2.0 * (1.0 - 1e-12):
        raise ValueError(f"no isosceles trapezoid has diagonal {b} < (a+c)/2 = {(a + c) / 2}")
    lhs = 2.0 / b
    rhs = 1.0 / a + 1.0 / c
    return TrapezoidCheck(lhs, rhs, lhs <= rhs)


# ---------------------------------------------------------------------------
# Plain-text configuration files: `key = value` lines, `#` comments, nuclei
# as repeated `nucleus = Z x y z` lines.
# ---------------------------------------------------------------------------

_SCALAR_KEYS = {
    "r": float,
    "m": float,
    "n_electrons": int,
    "n_xi": int,
    "n_rho": int,
    "L_xi": float,
    "L_rho": float,
    "h": float,
    "tol": float,
    "max_iter": int,
    "seed": int,
}


@dataclass
class RunFileConfig:
    """Key/value content of a configuration file, pre-split into typed fields."""

    values: dict
    nuclei: list

    def molecule(self) -> Molecule | None:
        if not self.nuclei:
            return None
        charges = np.array([z for z, _ in self.nuclei], dtype=float)
        positions = np.array([p for _, p in self.nuclei], dtype=float)
        n = self.values.get("n_electrons", int(round(charges.sum())))
        return Molecule(charges, positions, n)

    def plate(self) -> PlateConfig | None:
        if "v" not in self.values or "r" not in self.values:
            return None
        return PlateConfig(self.values["v"], self.values["r"], self.values.get("m", 1.0))


def parse_config(text: str) -> RunFileConfig:
    values: dict = {}
    nuclei: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, rhs = line.partition("=")
        key, rhs = key.strip(), rhs.strip()
        if key == "nucleus":
            parts = rhs.split()
            if len(parts) != 4:
                raise ValueError(f"config line {lineno}: nucleus needs 'Z x y z'")
            nuclei.append((float(parts[0]), [float(p) for p in parts[1:]]))
        elif key == "v":
            comps = [float(p) for p in rhs.replace(",", " ").split()]
            if len(comps) != 3:
                raise ValueError(f"config line {lineno}: v needs three components")
            values["v"] = np.array(comps)
        elif key in _SCALAR_KEYS:
            values[key] = _SCALAR_KEYS[key](rhs)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return RunFileConfig(values, nuclei)


def load_config(path) -> RunFileConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
