"""Engine configuration: tuning constants and feature toggles.

Values the source material pins (tone frequencies, the 15° quest-turn
quantum, collider factor 2.0, max attempts) live here next to artifact
constants (walk speed, radii) that are documented rather than magic.
Config documents use the same structured-text dialect as scenes; any
field may be omitted and defaults apply.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

from .docs import DocumentError, dumps_canonical, loads


@dataclass(frozen=True)
class NavStickConfig:
    deadzone: float = 0.5
    empty_dir_audio: str = "silent"  # "silent" | "default_tone"
    min_quantum_ms: float = 150.0
    poi_hold_tone_hz: float = 440.0
    non_poi_tone_hz: float = 1320.0
    announce_rate_cps: float = 15.0
    empty_tone_distance_m: float = 30.0

    def __post_init__(self):
        if not 0.0 < self.deadzone < 1.0:
            raise DocumentError(f"deadzone {self.deadzone} outside (0, 1)")
        if self.min_quantum_ms <= 0:
            raise DocumentError("min_quantum_ms must be > 0")
        if self.empty_dir_audio not in ("silent", "default_tone"):
            raise DocumentError(f"unknown empty_dir_audio '{self.empty_dir_audio}'")


def default_proximity_radii() -> dict[str, float]:
    return {
        "checkpoint": 3.0,
        "pressure_pad": 2.0,
        "door": 3.0,
        "enemy_stationary": 4.0,
        "enemy_roaming": 4.0,
    }


@dataclass(frozen=True)
class EnhanceConfig:
    enabled: bool = True
    quest_display: bool = True
    auto_turn: bool = True
    proximity: bool = True
    footsteps: bool = True
    vertical_aim: bool = True
    collider_scale: float = 2.0  # 1.0 means no scaling
    quest_turn_deg: float = 15.0
    quest_tone_distance_m: float = 2.0
    proximity_radii: dict[str, float] = field(default_factory=default_proximity_radii)
    proximity_hysteresis_m: float = 0.25
    stride_m: float = 0.7

    def __post_init__(self):
        if self.collider_scale < 1.0:
            raise DocumentError("collider_scale must be >= 1.0")


@dataclass(frozen=True)
class EngineConfig:
    tick_rate: int = 60
    walk_speed_mps: float = 2.0
    turn_rate_dps: float = 120.0
    checkpoint_radius_m: float = 1.5
    gate_open_delay_s: float = 3.0
    enemy_audible_range_m: float = 15.0
    miss_distance_m: float = 30.0
    tool: str = "both"  # "navstick" | "navmenu" | "both"
    navstick: NavStickConfig = field(default_factory=NavStickConfig)
    enhance: EnhanceConfig = field(default_factory=EnhanceConfig)

    @property
    def dt_ms(self) -> float:
        return 1000.0 / self.tick_rate

    @property
    def dt_s(self) -> float:
        return 1.0 / self.tick_rate

    def __post_init__(self):
        if self.tool not in ("navstick", "navmenu", "both"):
            raise DocumentError(f"unknown tool '{self.tool}'")


def study1_config() -> EngineConfig:
    """Baseline-comparison setup: no quality-of-life enhancements, silent
    empty directions."""
    return EngineConfig(enhance=replace(EnhanceConfig(), enabled=False, collider_scale=1.0))


def explorer_config() -> EngineConfig:
    """Adventure-game setup: all enhancements on, default tone for empty
    directions."""
    return EngineConfig(navstick=NavStickConfig(empty_dir_audio="default_tone"))


def save_config(cfg: EngineConfig) -> str:
    return dumps_canonical(asdict(cfg))


def load_config(text: str) -> EngineConfig:
    doc = loads(text)
    if not isinstance(doc, dict):
        raise DocumentError("config must be an object")
    return config_from_doc(doc)


def config_from_doc(doc: dict) -> EngineConfig:
    def sub(cls, defaults, key):
        got = doc.get(key, {})
        if not isinstance(got, dict):
            raise DocumentError(f"'{key}' must be an object")
        known = {f for f in defaults.__dataclass_fields__}  # type: ignore[attr-defined]
        unknown = set(got) - known
        if unknown:
            raise DocumentError(f"unknown {key} fields: {sorted(unknown)}")
        return replace(defaults, **got)

    navstick = sub(NavStickConfig, NavStickConfig(), "navstick")
    enhance = sub(EnhanceConfig, EnhanceConfig(), "enhance")
    top = {k: v for k, v in doc.items() if k not in ("navstick", "enhance")}
    known = {f for f in EngineConfig.__dataclass_fields__}
    unknown = set(top) - known
    if unknown:
        raise DocumentError(f"unknown config fields: {sorted(unknown)}")
    return replace(EngineConfig(), navstick=navstick, enhance=enhance, **top)


NAMED_CONFIGS = {
    "default": EngineConfig,
    "study1": study1_config,
    "explorer": explorer_config,
}
