"""Interferometer layouts and gravitational phase rates.

Three named configurations of n massive particles, each delocalized over D
spatial arms:

* ``parallel`` -- particles on a line with spacing d = d_min, arms offset
  orthogonally to the separation axis, spanning a total width delta_x.
* ``linear``   -- particles and arms all on one axis, spacing
  d = d_min + delta_x so that no two arms of different particles come
  closer than d_min.
* ``star``     -- three particles on an equilateral triangle of edge
  d = d_min, outer arms pointing radially outward by delta_x.

Every joint arm configuration (j_1 ... j_n) accumulates phase at a rate set
by the pairwise Newtonian couplings, rate = (1/hbar) sum_{i<k} G m^2 / r_ik,
with r_ik the Euclidean distance between the occupied arms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

SETUP_KINDS = ("parallel", "linear", "star")

# CODATA values, kept on the parameter object so tests can pin them.
GRAVITATIONAL_CONSTANT = 6.674e-11      # m^3 kg^-1 s^-2
HBAR = 1.054571817e-34                  # J s


@dataclass(frozen=True)
class PhysicalParams:
    """Masses, distances and times of the interferometric setup (SI units)."""

    mass: float = 1e-14          # kg
    d_min: float = 200e-6        # m, minimum approach of any two arms
    delta_x: float = 250e-6      # m, superposition width
    tau: float = 2.5             # s, interaction time
    G: float = GRAVITATIONAL_CONSTANT
    hbar: float = HBAR

    def __post_init__(self):
        for name in ("mass", "d_min", "delta_x", "tau", "G", "hbar"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class SetupGeometry:
    """Arm coordinates of one configuration.

    ``positions[i][j]`` is the 2-D coordinate (meters) of arm j of particle
    i; ``d`` is the base separation between neighbouring particles.
    """

    kind: str
    n: int
    D: int
    d: float
    positions: np.ndarray = field(repr=False)  # shape (n, D, 2)

    def arm(self, particle: int, arm: int) -> np.ndarray:
        return self.positions[particle, arm]


@dataclass(frozen=True)
class BranchPhaseTable:
    """Phase rate (rad/s) of every joint branch, flat MSB-first indexing."""

    n: int
    D: int
    rates: np.ndarray  # shape (D**n,)

    def rate(self, branch) -> float:
        """Rate of the branch labelled by per-particle arm indices."""
        idx = 0
        for j in branch:
            idx = idx * self.D + j
        return float(self.rates[idx])


def build_setup(kind: str, n: int, D: int, params: PhysicalParams) -> SetupGeometry:
    """Lay out arm coordinates for one of the named configurations.

    For D > 2 the parallel setup places D equally spaced arms spanning the
    full width delta_x; the linear and star layouts are two-arm only.
    """
    if kind not in SETUP_KINDS:
        raise ValueError(f"unknown setup kind {kind!r}, expected one of {SETUP_KINDS}")
    if D < 2:
        raise ValueError("each particle needs at least 2 arms (D >= 2)")
    if kind == "star":
        if n != 3 or D != 2:
            raise ValueError("star setup requires n = 3 and D = 2")
    elif n not in (2, 3):
        raise ValueError(f"{kind} setup requires n in (2, 3), got n = {n}")
    if kind == "linear" and D != 2:
        raise ValueError("linear setup is defined for D = 2 only")

    dx = params.delta_x
    if kind == "parallel":
        d = params.d_min
        offsets = [j * dx / (D - 1) for j in range(D)]
        pos = np.array([[(i * d, off) for off in offsets] for i in range(n)])
    elif kind == "linear":
        d = params.d_min + dx
        pos = np.array([[(i * d, 0.0), (i * d + dx, 0.0)] for i in range(n)])
    else:  # star
        d = params.d_min
        radius = d / np.sqrt(3.0)  # circumradius of the inner triangle
        pos = np.empty((3, 2, 2))
        for i in range(3):
            angle = np.pi / 2 + i * 2 * np.pi / 3
            u = np.array([np.cos(angle), np.sin(angle)])
            pos[i, 0] = radius * u
            pos[i, 1] = (radius + dx) * u
    return SetupGeometry(kind=kind, n=n, D=D, d=d, positions=pos)


def branch_distance(setup: SetupGeometry, i: int, j_i: int, k: int, j_k: int) -> float:
    """Euclidean distance between arm j_i of particle i and arm j_k of particle k."""
    if i == k:
        raise ValueError("branch_distance requires two distinct particles")
    for p, j in ((i, j_i), (k, j_k)):
        if not (0 <= p < setup.n and 0 <= j < setup.D):
            raise ValueError(f"invalid particle/arm index ({p}, {j})")
    return float(np.linalg.norm(setup.arm(i, j_i) - setup.arm(k, j_k)))


def phase_table(setup: SetupGeometry, params: PhysicalParams) -> BranchPhaseTable:
    """Gravitational phase rate of every joint branch.

    rate(j_1 ... j_n) = (1/hbar) * sum_{i<k} G m^2 / r(i, j_i, k, j_k)
    """
    n, D = setup.n, setup.D
    coupling = params.G * params.mass**2 / params.hbar  # rad m / s
    rates = np.empty(D**n)
    for idx, branch in enumerate(itertools.product(range(D), repeat=n)):
        total = 0.0
        for i in range(n):
            for k in range(i + 1, n):
                total += coupling / branch_distance(setup, i, branch[i], k, branch[k])
        rates[idx] = total
    return BranchPhaseTable(n=n, D=D, rates=rates)


def load_config(path) -> dict:
    """Read a plain-text key/value config (``key = value``, ``#`` comments).

    Recognised keys: kind, n, D, m, d_min, delta_x, tau.  Returns a dict of
    parsed values; numeric fields are floats, n and D are ints.
    """
    known = {"kind": str, "n": int, "D": int, "m": float,
             "d_min": float, "delta_x": float, "tau": float}
    out: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = known[key](value)
    return out


def params_from_config(config: dict, base: PhysicalParams | None = None) -> PhysicalParams:
    """PhysicalParams with config overrides (m, d_min, delta_x, tau) applied."""
    base = base or PhysicalParams()
    return PhysicalParams(
        mass=config.get("m", base.mass),
        d_min=config.get("d_min", base.d_min),
        delta_x=config.get("delta_x", base.delta_x),
        tau=config.get("tau", base.tau),
        G=base.G,
        hbar=base.hbar,
    )
