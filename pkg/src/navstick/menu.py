"""Baseline surveying: an alphabetical linear menu of nearby POIs.

Opening announces the target count; D-pad steps announce items with
speech rendered at each item's location. Steps clamp at the ends (no
wrap) and truncate any playing menu speech under the same minimum
quantum rule as the scrub tool. The item list is a snapshot taken at
open time.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Optional, Union

from .config import NavStickConfig
from .events import EventLog
from .geometry import heading_vec, shape_center, world_angle
from .scene import Entity, PlayerPose, Scene
from .stick import MENU, ScrubState, SpeechChannel, announcement_duration_ms


class MenuError(ValueError):
    pass


class SelectionError(ValueError):
    pass


class TeleportError(ValueError):
    pass


@dataclass
class MenuState:
    open: bool = False
    items: tuple[str, ...] = ()  # entity ids, alphabetical by name
    cursor: Optional[int] = None
    press_seq: int = 0  # distinguishes repeated announcements of one item


def area_pois(scene: Scene) -> list[Entity]:
    pois = [
        e
        for e in scene.entities
        if e.alive and e.is_poi and scene.in_area(shape_center(e.shape))
    ]
    pois.sort(key=lambda e: (e.name.lower(), e.id))
    return pois


def menu_open(
    scene: Scene,
    pose: PlayerPose,
    *,
    tick: int,
    channel: SpeechChannel,
    sink: EventLog,
    cfg: NavStickConfig,
) -> MenuState:
    pois = area_pois(scene)
    state = MenuState(open=True, items=tuple(e.id for e in pois), cursor=None)
    text = f"{len(pois)} targets"
    channel.request(
        tick, MENU, ("count", state.press_seq), text, pose.position, None, announcement_duration_ms(text, cfg), sink
    )
    sink.game(tick, "menu_opened", {"count": len(pois), "items": list(state.items)})
    return state


def menu_step(
    state: MenuState,
    direction: str,
    scene: Scene,
    *,
    tick: int,
    channel: SpeechChannel,
    sink: EventLog,
    cfg: NavStickConfig,
) -> MenuState:
    if not state.open:
        raise MenuError("step on a closed menu")
    if direction not in ("up", "down"):
        raise MenuError(f"unknown direction '{direction}'")
    if not state.items:
        return state
    if state.cursor is None:
        cursor = 0 if direction == "down" else len(state.items) - 1
    else:
        cursor = state.cursor + (1 if direction == "down" else -1)
        cursor = max(0, min(len(state.items) - 1, cursor))  # clamp, re-announce
    state.cursor = cursor
    state.press_seq += 1
    entity = scene.entity(state.items[cursor])
    channel.request(
        tick,
        MENU,
        ("item", entity.id, state.press_seq),
        entity.name,
        shape_center(entity.shape),
        entity.id,
        announcement_duration_ms(entity.name, cfg),
        sink,
    )
    sink.game(tick, "menu_step", {"index": cursor, "entity": entity.id, "direction": direction})
    return state


def menu_close(state: MenuState, *, tick: int, channel: SpeechChannel, sink: EventLog) -> MenuState:
    if state.open:
        channel.release(tick, MENU, sink)
        sink.game(tick, "menu_closed", {})
    state.open = False
    state.cursor = None
    return state


def price_text(price: str) -> str:
    value = Decimal(price)
    dollars = int(value)
    cents = int((value - dollars) * 100)
    parts = []
    if dollars or not cents:
        parts.append(f"{dollars} dollar" + ("" if dollars == 1 else "s"))
    if cents:
        parts.append(f"{cents} cent" + ("" if cents == 1 else "s"))
    return " ".join(parts)


def selected_entity_id(state: Union[MenuState, ScrubState]) -> Optional[str]:
    if isinstance(state, MenuState):
        if state.open and state.cursor is not None:
            return state.items[state.cursor]
        return None
    key = state.slice_key
    if key is not None and key[0] == "poi":
        return key[1]
    return None


def query_price(
    state: Union[MenuState, ScrubState],
    scene: Scene,
    *,
    tick: int,
    channel: SpeechChannel,
    sink: EventLog,
    cfg: NavStickConfig,
) -> str:
    """Announce the selected item's price at the item's position."""
    eid = selected_entity_id(state)
    if eid is None:
        raise SelectionError("no item selected")
    entity = scene.entity(eid)
    if entity.price is None:
        raise SelectionError(f"'{eid}' has no price")
    text = price_text(entity.price)
    # dedicated owner: price speech is a query response, not slice audio,
    # so the scrub machine's leave logic must not clobber it
    channel.request(
        tick,
        "price",
        ("price", eid, tick),
        text,
        shape_center(entity.shape),
        entity.id,
        announcement_duration_ms(text, cfg),
        sink,
    )
    return text


def teleport(pose: PlayerPose, target: str, scene: Scene) -> PlayerPose:
    """Jump adjacent to the target: 0.5 m back toward the old position,
    facing the target. Only scenes that enable teleport allow it."""
    if not scene.teleport_enabled:
        raise TeleportError("teleport disabled for this scene")
    try:
        entity = scene.entity(target)
    except KeyError:
        raise TeleportError(f"unknown target '{target}'") from None
    if not entity.is_poi or not entity.alive:
        raise TeleportError(f"'{target}' is not a live POI")
    center = shape_center(entity.shape)
    approach = pose.position - center
    if approach.norm() < 1e-9:
        approach = heading_vec(pose.heading).scaled(-1.0)
    unit = approach.scaled(1.0 / approach.norm())
    new_pos = center + unit.scaled(0.5)
    heading = world_angle(center - new_pos)
    return PlayerPose(new_pos, heading)
