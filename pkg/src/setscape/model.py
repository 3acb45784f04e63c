"""Domain model for annotated network modules and their active set system.

An annotated module is a small node-link network plus a family of overlapping
annotation sets with significance p-values.  Nodes are encoded for layout as
weighted bit vectors over the *active system*: first every interaction (an
implicit 2-element set at fixed weight 1), then the user-selected annotation
sets in selection order.

All types are immutable values; the operations here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import UnknownIdError, ValidationError

INTERACTION_WEIGHT = 1.0


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    score: float = 0.0
    info_url: str | None = None


@dataclass(frozen=True)
class Interaction:
    source: str
    target: str

    @property
    def key(self) -> str:
        return f"{self.source}--{self.target}"

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.source, self.target))


@dataclass(frozen=True)
class AnnotationSet:
    id: str
    label: str
    category: str
    p_value: float
    members: frozenset[str]
    info_url: str | None = None


@dataclass(frozen=True)
class AnnotatedModule:
    """Validated module: nodes, interactions, annotation sets, categories."""

    nodes: tuple[Node, ...]
    interactions: tuple[Interaction, ...]
    annotation_sets: tuple[AnnotationSet, ...]
    categories: tuple[str, ...]

    def __post_init__(self) -> None:
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate node id(s): {', '.join(dup)}")
        for n in self.nodes:
            if not n.label:
                raise ValidationError(f"node {n.id!r} has an empty label")
        known = set(ids)
        seen_pairs: set[frozenset[str]] = set()
        for e in self.interactions:
            if e.source == e.target:
                raise ValidationError(f"self-interaction on node {e.source!r}")
            for ref in (e.source, e.target):
                if ref not in known:
                    raise ValidationError(
                        f"interaction {e.key} references unknown node {ref!r}")
            if e.pair in seen_pairs:
                raise ValidationError(f"duplicate interaction {e.key}")
            seen_pairs.add(e.pair)
        set_ids = [s.id for s in self.annotation_sets]
        if len(set(set_ids)) != len(set_ids):
            dup = sorted({i for i in set_ids if set_ids.count(i) > 1})
            raise ValidationError(f"duplicate set id(s): {', '.join(dup)}")
        for s in self.annotation_sets:
            if not s.members:
                raise ValidationError(f"set {s.id!r} has no members")
            for ref in sorted(s.members):
                if ref not in known:
                    raise ValidationError(
                        f"set {s.id!r} references unknown node {ref!r}")
            if not (0.0 < s.p_value <= 1.0):
                raise ValidationError(
                    f"set {s.id!r} has p-value {s.p_value} outside (0, 1]")
            if s.category not in self.categories:
                raise ValidationError(
                    f"set {s.id!r} has unlisted category {s.category!r}")

    @cached_property
    def node_by_id(self) -> Mapping[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def set_by_id(self) -> Mapping[str, AnnotationSet]:
        return {s.id: s for s in self.annotation_sets}

    @cached_property
    def interaction_by_key(self) -> Mapping[str, Interaction]:
        return {e.key: e for e in self.interactions}

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def sets_containing(self, node_id: str) -> tuple[str, ...]:
        if node_id not in self.node_by_id:
            raise UnknownIdError(f"unknown node id {node_id!r}")
        return tuple(s.id for s in self.annotation_sets if node_id in s.members)

    def neighbors(self, node_id: str) -> tuple[str, ...]:
        if node_id not in self.node_by_id:
            raise UnknownIdError(f"unknown node id {node_id!r}")
        out = []
        for e in self.interactions:
            if e.source == node_id:
                out.append(e.target)
            elif e.target == node_id:
                out.append(e.source)
        return tuple(out)

    def incident_interactions(self, node_id: str) -> tuple[str, ...]:
        if node_id not in self.node_by_id:
            raise UnknownIdError(f"unknown node id {node_id!r}")
        return tuple(e.key for e in self.interactions
                     if node_id in (e.source, e.target))


@dataclass(frozen=True)
class ActiveEntry:
    """One dimension of the bit-vector encoding."""

    kind: Literal["interaction", "set"]
    key: str  # "src--tgt" for interactions, set id for annotation sets
    weight: float
    members: frozenset[str]

    @property
    def identity(self) -> str:
        return f"{self.kind}:{self.key}"


@dataclass(frozen=True)
class ActiveSystem:
    """Ordered active sets: all interactions first, then selected sets."""

    entries: tuple[ActiveEntry, ...]

    def __post_init__(self) -> None:
        for e in self.entries:
            if e.weight <= 0:
                raise ValidationError(f"non-positive weight on {e.identity}")
            if e.kind == "interaction" and e.weight != INTERACTION_WEIGHT:
                raise ValidationError(
                    f"interaction {e.key} must keep weight {INTERACTION_WEIGHT}")

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.entries], dtype=np.float64)

    @cached_property
    def selected_set_ids(self) -> tuple[str, ...]:
        return tuple(e.key for e in self.entries if e.kind == "set")

    def index_of_set(self, set_id: str) -> int:
        for i, e in enumerate(self.entries):
            if e.kind == "set" and e.key == set_id:
                return i
        raise UnknownIdError(f"set {set_id!r} is not active")


def assemble_active_system(module: AnnotatedModule,
                           selection: Sequence[str] = (),
                           weights: Mapping[str, float] | None = None,
                           ) -> ActiveSystem:
    """Active system for a selection, in selection order, interactions first."""
    weights = dict(weights or {})
    entries = [ActiveEntry("interaction", e.key, INTERACTION_WEIGHT, e.pair)
               for e in module.interactions]
    seen: set[str] = set()
    for sid in selection:
        if sid not in module.set_by_id:
            raise UnknownIdError(f"unknown set id {sid!r}")
        if sid in seen:
            raise ValidationError(f"set {sid!r} selected twice")
        seen.add(sid)
        s = module.set_by_id[sid]
        entries.append(ActiveEntry("set", sid, float(weights.get(sid, 1.0)),
                                   s.members))
    return ActiveSystem(tuple(entries))


@dataclass(frozen=True)
class MembershipMatrix:
    """Per-node weighted bit vectors over the active system."""

    item_ids: tuple[str, ...]
    rows: np.ndarray = field(repr=False)  # shape (|items|, M), float64
    active: ActiveSystem

    def row_for(self, node_id: str) -> np.ndarray:
        try:
            return self.rows[self.item_ids.index(node_id)]
        except ValueError:
            raise UnknownIdError(f"unknown node id {node_id!r}") from None


def build_membership_matrix(module: AnnotatedModule,
                            active: ActiveSystem) -> MembershipMatrix:
    """Encode every node: component i is w_i if the node is in S_i, else 0."""
    item_ids = module.node_ids()
    index = {nid: i for i, nid in enumerate(item_ids)}
    rows = np.zeros((len(item_ids), active.dimension), dtype=np.float64)
    for j, entry in enumerate(active.entries):
        for node_id in entry.members:
            rows[index[node_id], j] = entry.weight
    rows.flags.writeable = False
    return MembershipMatrix(item_ids, rows, active)


def set_algebra(module: AnnotatedModule, set_ids: Iterable[str],
                mode: Literal["union", "intersection"]) -> tuple[str, ...]:
    """Union or intersection of set members, in module node order.

    The intersection of an empty selection is the empty set, not the node
    universe.
    """
    groups = []
    for sid in set_ids:
        if sid not in module.set_by_id:
            raise UnknownIdError(f"unknown set id {sid!r}")
        groups.append(module.set_by_id[sid].members)
    if mode not in ("union", "intersection"):
        raise ValidationError(f"unknown mode {mode!r}")
    if not groups:
        return ()
    if mode == "union":
        result = frozenset().union(*groups)
    else:
        result = frozenset.intersection(*groups)
    return tuple(nid for nid in module.node_ids() if nid in result)


def rank_sets(module: AnnotatedModule, category: str,
              top_k: int | None = None) -> tuple[AnnotationSet, ...]:
    """Sets of one category by ascending p-value; ties break on id."""
    if category not in module.categories:
        raise UnknownIdError(f"unknown category {category!r}")
    ranked = sorted((s for s in module.annotation_sets if s.category == category),
                    key=lambda s: (s.p_value, s.id))
    if top_k is not None:
        ranked = ranked[:max(0, top_k)]
    return tuple(ranked)
