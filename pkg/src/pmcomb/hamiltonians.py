"""Heisenberg generators for the pumped comb and its phase modulation.

Qumodes are indexed 1..N in units of the free spectral range and the pump
sits at p = N + 1, so mode j is two-mode squeezed with p - j. Array index
``j - 1`` holds mode j.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import symplectic
from .bessel import MAX_ORDER, bessel_j_signed
from .exceptions import InvalidSpecError


class Scheme(str, enum.Enum):
    EXTRINSIC = "extrinsic"  # EPR comb first, then an external modulator
    INTRINSIC = "intrinsic"  # modulator inside the OPO, one joint evolution


@dataclass(frozen=True)
class CombSpec:
    N: int
    r: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2 or self.N % 2:
            raise InvalidSpecError(f"N must be an even positive integer, got {self.N!r}")
        if not math.isfinite(self.r) or self.r < 0:
            raise InvalidSpecError(f"squeezing gain r must be finite and >= 0, got {self.r!r}")

    @property
    def p(self) -> int:
        return self.N + 1

    def epr_pairs(self) -> list[tuple[int, int]]:
        """The EPR matching ``(j, p - j)`` for j = 1..N/2."""
        return [(j, self.p - j) for j in range(1, self.N // 2 + 1)]


@dataclass(frozen=True)
class ToneSpec:
    omega: int
    m: float
    phi: float = math.pi / 2

    def __post_init__(self):
        if int(self.omega) != self.omega or self.omega < 1:
            raise InvalidSpecError(f"tone frequency must be a positive integer, got {self.omega!r}")
        if not math.isfinite(self.m) or self.m < 0:
            raise InvalidSpecError(f"modulation index must be finite and >= 0, got {self.m!r}")
        if not math.isfinite(self.phi):
            raise InvalidSpecError("tone phase must be finite")

    @property
    def alpha(self) -> float:
        return self.m / 2

    def validate_for(self, N: int) -> None:
        if self.omega >= N:
            raise InvalidSpecError(f"tone omega={self.omega} couples nothing for N={N}")


def tms_generator(comb: CombSpec) -> np.ndarray:
    """Generator of two-mode squeezing between every pair (j, p - j).

    dQ_j/dt = r Q_{p-j} and dP_j/dt = -r P_{p-j}, so Q_j - Q_{p-j} and
    P_j + P_{p-j} are the squeezed combinations.
    """
    N = comb.N
    G = np.zeros((2 * N, 2 * N))
    j = np.arange(N)
    k = comb.p - 1 - j - 1  # array index of mode p - j
    G[j, k] = comb.r
    G[N + j, N + k] = -comb.r
    return G


def _single_tone(N: int, tone: ToneSpec) -> np.ndarray:
    # From da_k/dt = -i alpha (e^{-i phi} a_{k-W} + e^{i phi} a_{k+W}) with
    # a = (Q + iP)/sqrt(2): real part couples Q->Q and P->P, imaginary part Q<->P.
    tone.validate_for(N)
    W = tone.omega
    s, c = math.sin(tone.phi), math.cos(tone.phi)
    re = np.zeros((N, N))
    im = np.zeros((N, N))
    k = np.arange(N - W)
    re[k, k + W] = tone.alpha * s
    re[k + W, k] = -tone.alpha * s
    im[k, k + W] = -tone.alpha * c
    im[k + W, k] = -tone.alpha * c
    if abs(s) < 1e-15:
        re[:] = 0.0
    if abs(c) < 1e-15:
        im[:] = 0.0
    return symplectic.from_blocks(re, -im, im, re)


def pm_generator(N: int, tones: Iterable[ToneSpec]) -> np.ndarray:
    """Sum of single-tone phase-modulation generators on modes 1..N.

    Couplings that would leave the comb are dropped. At phi = pi/2 a tone
    gives dQ_j/dt = alpha (Q_{j+W} - Q_{j-W}) and the same for P.
    """
    G = np.zeros((2 * N, 2 * N))
    for tone in tones:
        G += _single_tone(N, tone)
    return G


def combined_generator(comb: CombSpec, tones: Iterable[ToneSpec]) -> np.ndarray:
    return tms_generator(comb) + pm_generator(comb.N, tones)


def evolution(comb: CombSpec, tones: Sequence[ToneSpec], scheme: Scheme | str) -> np.ndarray:
    """Symplectic matrix of the full evolution for the chosen scheme."""
    scheme = Scheme(scheme)
    for tone in tones:
        tone.validate_for(comb.N)
    if scheme is Scheme.EXTRINSIC:
        s_tms = symplectic.expm(tms_generator(comb), 1.0)
        s_pm = symplectic.expm(pm_generator(comb.N, tones), 1.0)
        return symplectic.compose(s_pm, s_tms)
    return symplectic.expm(combined_generator(comb, tones), 1.0)


def build_state(comb: CombSpec, tones: Sequence[ToneSpec], scheme: Scheme | str) -> np.ndarray:
    """Covariance matrix of the comb after squeezing and modulation."""
    return symplectic.covariance_from_symplectic(evolution(comb, tones, scheme))


def pm_symplectic_bessel_reference(m: float, N: int, boundary: str = "half_line") -> np.ndarray:
    """Closed-form Q-block of a single Omega=1, phi=pi/2 modulation.

    ``boundary="half_line"`` returns ``J_{k-j}(m) - (-1)^j J_{k+j}(m)``: the
    exact propagator of a chain that ends at mode 1 and extends forever
    upward. It matches the truncated comb except within the Bessel bandwidth
    of mode N.

    ``boundary="box"`` adds the images of the upper wall (period 2(N+1)) and
    is exact for the comb truncated to 1..N.
    """
    if m < 0:
        raise InvalidSpecError("modulation index must be >= 0")
    if boundary not in ("half_line", "box"):
        raise InvalidSpecError(f"unknown boundary convention {boundary!r}")
    j = np.arange(1, N + 1)[:, None]
    k = np.arange(1, N + 1)[None, :]
    J = bessel_j_signed(MAX_ORDER, m)
    sign_j = np.where(j % 2 == 0, 1.0, -1.0)
    if boundary == "half_line":
        return J(k - j) - sign_j * J(k + j)
    period = 2 * (N + 1)
    # images beyond |order| > MAX_ORDER are below 1e-100 for m <= 10
    reach = MAX_ORDER // period + 2
    M = np.zeros((N, N))
    for n in range(-reach, reach + 1):
        image_sign = -1.0 if (n * (N + 1)) % 2 else 1.0
        M += image_sign * (J(k - j + n * period) - sign_j * J(k + j + n * period))
    return M
