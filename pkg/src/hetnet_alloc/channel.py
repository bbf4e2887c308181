"""HetNet layout and uplink channel realizations.

All powers are carried in milliwatts; decibel quantities only appear at the
configuration boundary.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, InvalidArgument

PRB_BANDWIDTH_HZ = 180_000.0


class BsKind(enum.Enum):
    MACRO = "macro"
    PICO = "pico"


# (intercept dB, slope dB/decade), distance in km
_PATH_LOSS_LAW = {
    BsKind.MACRO: (128.0, 37.6),
    BsKind.PICO: (140.7, 36.7),
}


def path_loss_db(kind: BsKind, distance_m: float) -> float:
    """Distance-dependent path loss in dB for a macro or pico cell."""
    if not distance_m > 0:
        raise InvalidArgument(f"distance must be positive, got {distance_m!r}")
    intercept, slope = _PATH_LOSS_LAW[kind]
    return intercept + slope * math.log10(distance_m / 1000.0)


def attenuation_gain(kind: BsKind, distance_m: float) -> float:
    """Linear power gain ``10**(-PL/10)``; always below one at cellular range."""
    return 10.0 ** (-path_loss_db(kind, distance_m) / 10.0)


def dbm_to_mw(x_dbm):
    if np.ndim(x_dbm):
        return 10.0 ** (np.asarray(x_dbm, dtype=float) / 10.0)
    return 10.0 ** (float(x_dbm) / 10.0)


def mw_to_dbm(x_mw):
    if np.ndim(x_mw):
        return 10.0 * np.log10(np.asarray(x_mw, dtype=float))
    return 10.0 * math.log10(x_mw)


def noise_power_mw(density_dbm_hz: float, bandwidth_hz: float) -> float:
    """Thermal noise over ``bandwidth_hz`` given a per-hertz density."""
    if not bandwidth_hz > 0:
        raise InvalidArgument(f"bandwidth must be positive, got {bandwidth_hz!r}")
    return dbm_to_mw(density_dbm_hz + 10.0 * math.log10(bandwidth_hz))


def draw_fading(rng: np.random.Generator, size=None):
    """Rayleigh power gain |h|^2.

    The amplitude is Rayleigh with scale 1/sqrt(2), so the power gain is
    exponential with unit mean.
    """
    amp = rng.rayleigh(scale=1.0 / math.sqrt(2.0), size=size)
    return amp * amp


@dataclass(frozen=True)
class BaseStation:
    id: int
    kind: BsKind
    position: tuple[float, float]


@dataclass(frozen=True)
class UserTerminal:
    id: int
    position: tuple[float, float]
    home_bs: int
    op_index: int | None = None

    @property
    def is_outpatient(self) -> bool:
        return self.op_index is not None


@dataclass(frozen=True)
class ScenarioConfig:
    """Scenario parameters; the defaults describe the three-cell reference layout."""

    n_mbs: int = 1
    n_pbs: int = 2
    n_prbs_per_bs: int = 5
    n_users: int = 10
    n_normal_users: int = 7
    noise_density_dbm_hz: float = -162.0
    pm_dbm: float = 23.0
    p_dbm: float = 17.0
    mbs_range_m: tuple[float, float] = (300.0, 600.0)
    pbs_range_m: tuple[float, float] = (40.0, 100.0)
    prb_bandwidth_hz: float = PRB_BANDWIDTH_HZ
    pbs_offset_m: float = 400.0
    users_per_bs: tuple[int, ...] | None = None
    placement_seed: int = 7

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        kw = dict(data)
        for key in ("mbs_range_m", "pbs_range_m", "users_per_bs"):
            if kw.get(key) is not None:
                kw[key] = tuple(kw[key])
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("mbs_range_m", "pbs_range_m", "users_per_bs"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    def ring_split(self) -> tuple[int, ...]:
        n_bs = self.n_mbs + self.n_pbs
        if self.users_per_bs is not None:
            return tuple(self.users_per_bs)
        if (self.n_mbs, self.n_pbs, self.n_users) == (1, 2, 10):
            return (4, 3, 3)
        base, extra = divmod(self.n_users, n_bs)
        return tuple(base + (1 if i < extra else 0) for i in range(n_bs))


@dataclass(frozen=True)
class Scenario:
    base_stations: tuple[BaseStation, ...]
    users: tuple[UserTerminal, ...]
    prbs_per_bs: int
    tx_power_per_prb_mw: float
    max_power_per_connection_mw: float
    noise_density_dbm_hz: float
    prb_bandwidth_hz: float = PRB_BANDWIDTH_HZ

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_bs(self) -> int:
        return len(self.base_stations)

    @property
    def n_normal_users(self) -> int:
        return sum(not u.is_outpatient for u in self.users)

    @property
    def total_prbs(self) -> int:
        return self.prbs_per_bs * self.n_bs

    @property
    def prb_cap(self) -> int:
        """Most PRBs one user can hold under the per-connection power limit."""
        # guard against 199.526/50.119 landing a hair under an exact integer
        return int(math.floor(self.max_power_per_connection_mw / self.tx_power_per_prb_mw + 1e-12))

    @property
    def outpatient_mask(self) -> np.ndarray:
        return np.array([u.is_outpatient for u in self.users])

    def distances(self) -> np.ndarray:
        """User-to-BS distance matrix in meters, shape (K, B)."""
        up = np.array([u.position for u in self.users], dtype=float)
        bp = np.array([b.position for b in self.base_stations], dtype=float)
        return np.linalg.norm(up[:, None, :] - bp[None, :, :], axis=2)

    def attenuation(self) -> np.ndarray:
        d = self.distances()
        a = np.empty_like(d)
        for j, bs in enumerate(self.base_stations):
            for i in range(d.shape[0]):
                a[i, j] = attenuation_gain(bs.kind, d[i, j])
        return a

    def noise_mw_per_prb(self) -> float:
        return noise_power_mw(self.noise_density_dbm_hz, self.prb_bandwidth_hz)


def _annulus_point(rng, center, lo, hi):
    radius = math.sqrt(rng.uniform(lo * lo, hi * hi))
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return (center[0] + radius * math.cos(angle), center[1] + radius * math.sin(angle))


def generate_scenario(config: ScenarioConfig | None = None, rng: np.random.Generator | None = None) -> Scenario:
    """Place one MBS at the origin, PBSs on a circle around it, and users in rings.

    Users are assigned to home cells by a random permutation (default split
    4/3/3), then dropped uniformly over the annulus of their home cell. Ids
    ``1..n_normal_users`` are normal users, the remaining ids outpatients.
    """
    cfg = config or ScenarioConfig()
    if rng is None:
        rng = np.random.default_rng(cfg.placement_seed)
    if cfg.n_users < 1:
        raise ConfigError("scenario needs at least one user")
    if not 0 <= cfg.n_normal_users <= cfg.n_users:
        raise ConfigError("n_normal_users must lie in [0, n_users]")
    if cfg.n_mbs != 1:
        raise ConfigError("exactly one macro base station is supported")
    if cfg.n_pbs < 0 or cfg.n_prbs_per_bs < 1:
        raise ConfigError("need n_pbs >= 0 and n_prbs_per_bs >= 1")
    for name in ("mbs_range_m", "pbs_range_m"):
        lo, hi = getattr(cfg, name)
        if not 0 < lo < hi:
            raise ConfigError(f"{name} must satisfy 0 < lo < hi, got {(lo, hi)}")
    if cfg.pm_dbm < cfg.p_dbm:
        raise ConfigError("per-connection maximum power PM must be at least the per-PRB power P")
    split = cfg.ring_split()
    if len(split) != cfg.n_mbs + cfg.n_pbs or sum(split) != cfg.n_users or min(split) < 0:
        raise ConfigError(f"users_per_bs {split} does not distribute {cfg.n_users} users over the cells")

    stations = [BaseStation(1, BsKind.MACRO, (0.0, 0.0))]
    for j in range(cfg.n_pbs):
        ang = 2.0 * math.pi * j / max(cfg.n_pbs, 1)
        stations.append(BaseStation(
            j + 2, BsKind.PICO,
            (cfg.pbs_offset_m * math.cos(ang), cfg.pbs_offset_m * math.sin(ang))))

    homes = np.repeat(np.arange(len(stations)), split)
    homes = homes[rng.permutation(cfg.n_users)]
    users = []
    for idx in range(cfg.n_users):
        home = stations[int(homes[idx])]
        lo, hi = cfg.mbs_range_m if home.kind is BsKind.MACRO else cfg.pbs_range_m
        pos = _annulus_point(rng, home.position, lo, hi)
        uid = idx + 1
        op = uid - cfg.n_normal_users if uid > cfg.n_normal_users else None
        users.append(UserTerminal(uid, pos, home.id, op))

    return Scenario(
        base_stations=tuple(stations),
        users=tuple(users),
        prbs_per_bs=cfg.n_prbs_per_bs,
        tx_power_per_prb_mw=float(dbm_to_mw(cfg.p_dbm)),
        max_power_per_connection_mw=float(dbm_to_mw(cfg.pm_dbm)),
        noise_density_dbm_hz=cfg.noise_density_dbm_hz,
        prb_bandwidth_hz=cfg.prb_bandwidth_hz,
    )


@dataclass(frozen=True)
class ChannelRealization:
    """Received powers for every (user k, PRB n, BS b).

    ``q_mw[k, n, b] == (P * h[k, n, b]) * a[k, b]`` holds bit-exactly.
    """

    q_mw: np.ndarray
    h: np.ndarray
    a: np.ndarray
    noise_mw_per_prb: float
    _digest: str = field(default="", repr=False, compare=False)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.q_mw.shape

    def snr(self) -> np.ndarray:
        """Interference-free SINR q/sigma per (k, n, b)."""
        return self.q_mw / self.noise_mw_per_prb

    def digest(self) -> str:
        return self._digest


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def realize_channel(s: Scenario, rng: np.random.Generator, fading=None) -> ChannelRealization:
    """Draw i.i.d. fading per (k, n, b) and combine it with path loss.

    ``fading`` overrides the random draw (array broadcastable to (K, N, B));
    the rng is then left untouched.
    """
    shape = (s.n_users, s.prbs_per_bs, s.n_bs)
    if fading is None:
        h = draw_fading(rng, size=shape)
    else:
        h = np.broadcast_to(np.asarray(fading, dtype=float), shape).copy()
        if np.any(h <= 0):
            raise InvalidArgument("fading gains must be strictly positive")
    a = s.attenuation()
    q = (s.tx_power_per_prb_mw * h) * a[:, None, :]
    q, h, a = _freeze(q), _freeze(h), _freeze(a)
    noise = s.noise_mw_per_prb()
    digest = hashlib.sha256(q.tobytes() + np.float64(noise).tobytes()).hexdigest()
    return ChannelRealization(q, h, a, noise, digest)


def channel_from_arrays(q_mw, noise_mw_per_prb: float) -> ChannelRealization:
    """Wrap a hand-built received-power tensor.

    Meant for toy instances where powers are chosen directly: the result
    reads as unit fading and attenuation, with ``q`` taken as given.
    """
    q = _freeze(q_mw)
    if q.ndim != 3 or np.any(q <= 0):
        raise InvalidArgument("q_mw must be a strictly positive (K, N, B) array")
    if not noise_mw_per_prb > 0:
        raise InvalidArgument("noise power must be positive")
    h = _freeze(np.ones_like(q))
    a = _freeze(np.ones((q.shape[0], q.shape[2])))
    digest = hashlib.sha256(q.tobytes() + np.float64(noise_mw_per_prb).tobytes()).hexdigest()
    return ChannelRealization(q, h, a, float(noise_mw_per_prb), digest)
