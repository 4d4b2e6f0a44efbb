"""Concept regions over the quality dimensions: config, membership, typicality.

A concept anchors at most one axis-aligned interval box per domain; the
conjunction of its boxes is the concept region. Centroids are box
midpoints; typicality falls off with interval-scaled distance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Dict, Mapping, Tuple

from .dimensions import DOMAIN_DIMENSIONS, DimensionId, Domain, PerspectiveVector


class ConfigError(ValueError):
    """Invalid space configuration document."""


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


def _validate_interval(dim: DimensionId, bounds) -> Tuple[float, float]:
    try:
        lo, hi = float(bounds[0]), float(bounds[1])
    except (TypeError, ValueError, IndexError):
        raise ConfigError(f"interval for {dim.name} must be a [lo, hi] pair") from None
    if not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
        raise ConfigError(f"interval for {dim.name} must lie within [0, 1]")
    if lo > hi:
        raise ConfigError(f"interval for {dim.name} has lo {lo} > hi {hi}")
    return (lo, hi)


@dataclass(frozen=True)
class RegionSpec:
    """One interval box inside a single domain."""

    domain: Domain
    bounds: Mapping[DimensionId, Tuple[float, float]]

    def __post_init__(self):
        if not self.bounds:
            raise ConfigError(f"region in domain {self.domain.value} declares no bounds")
        allowed = DOMAIN_DIMENSIONS[self.domain]
        clean = {}
        for dim, interval in self.bounds.items():
            if not isinstance(dim, DimensionId):
                raise ConfigError(f"unknown dimension {dim!r}")
            if dim not in allowed:
                raise ConfigError(
                    f"dimension {dim.name} does not belong to domain {self.domain.value}"
                )
            clean[dim] = _validate_interval(dim, interval)
        object.__setattr__(self, "bounds", clean)


@dataclass(frozen=True)
class TrendConstraint:
    """Required signed change of one dimension over a ply window."""

    dimension: DimensionId
    direction: Direction
    min_delta: float
    window: int

    def __post_init__(self):
        if not isinstance(self.dimension, DimensionId):
            raise ConfigError(f"unknown trend dimension {self.dimension!r}")
        if not isinstance(self.direction, Direction):
            raise ConfigError(f"invalid trend direction {self.direction!r}")
        if not 0.0 <= self.min_delta <= 1.0:
            raise ConfigError(f"trend min_delta {self.min_delta} outside [0, 1]")
        if self.window < 2:
            raise ConfigError(f"trend window {self.window} must be >= 2")


@dataclass(frozen=True)
class ConceptSpec:
    name: str
    regions: Tuple[RegionSpec, ...]
    trends: Tuple[TrendConstraint, ...] = ()
    min_run_plies: int = 1
    convergence_threshold: float = 0.0

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise ConfigError("concept name must be a non-empty string")
        regions = tuple(self.regions)
        trends = tuple(self.trends)
        object.__setattr__(self, "regions", regions)
        object.__setattr__(self, "trends", trends)
        if not regions:
            raise ConfigError(f"concept {self.name} declares no regions")
        domains = [r.domain for r in regions]
        if len(set(domains)) != len(domains):
            raise ConfigError(f"concept {self.name} declares a domain more than once")
        if self.min_run_plies < 1:
            raise ConfigError(f"concept {self.name}: min_run_plies must be >= 1")
        if not -1.0 <= self.convergence_threshold <= 1.0:
            raise ConfigError(f"concept {self.name}: convergence_threshold outside [-1, 1]")

    def declared_bounds(self) -> Dict[DimensionId, Tuple[float, float]]:
        """All intervals of this concept, keyed by dimension, in vector order."""
        merged: Dict[DimensionId, Tuple[float, float]] = {}
        for region in self.regions:
            merged.update(region.bounds)
        return {dim: merged[dim] for dim in sorted(merged)}


@dataclass(frozen=True)
class SpaceConfig:
    version: str
    concepts: Tuple[ConceptSpec, ...]

    def __post_init__(self):
        concepts = tuple(self.concepts)
        object.__setattr__(self, "concepts", concepts)
        if not concepts:
            raise ConfigError("configuration declares no concepts")
        names = [c.name for c in concepts]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate concept names in configuration")

    def concept(self, name: str) -> ConceptSpec:
        for c in self.concepts:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "concepts": [
                {
                    "name": c.name,
                    "regions": [
                        {
                            "domain": r.domain.value,
                            "bounds": {
                                dim.name: [lo, hi] for dim, (lo, hi) in sorted(r.bounds.items())
                            },
                        }
                        for r in c.regions
                    ],
                    "trends": [
                        {
                            "dimension": t.dimension.name,
                            "direction": t.direction.value,
                            "min_delta": t.min_delta,
                            "window": t.window,
                        }
                        for t in c.trends
                    ],
                    "min_run_plies": c.min_run_plies,
                    "convergence_threshold": c.convergence_threshold,
                }
                for c in self.concepts
            ],
        }


def _parse_dimension(name) -> DimensionId:
    try:
        return DimensionId[name]
    except (KeyError, TypeError):
        raise ConfigError(f"unknown dimension {name!r}") from None


def config_from_dict(doc: dict) -> SpaceConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration document must be a JSON object")
    version = doc.get("version")
    if not isinstance(version, str):
        raise ConfigError("configuration needs a string 'version'")
    raw_concepts = doc.get("concepts")
    if not isinstance(raw_concepts, list) or not raw_concepts:
        raise ConfigError("configuration needs a non-empty 'concepts' list")
    concepts = []
    for raw in raw_concepts:
        if not isinstance(raw, dict):
            raise ConfigError("each concept must be an object")
        regions = []
        for raw_region in raw.get("regions", []):
            try:
                domain = Domain(raw_region.get("domain"))
            except ValueError:
                raise ConfigError(f"unknown domain {raw_region.get('domain')!r}") from None
            bounds = {
                _parse_dimension(dim): interval
                for dim, interval in (raw_region.get("bounds") or {}).items()
            }
            regions.append(RegionSpec(domain=domain, bounds=bounds))
        trends = []
        for raw_trend in raw.get("trends", []):
            try:
                direction = Direction(raw_trend.get("direction"))
            except ValueError:
                raise ConfigError(
                    f"invalid trend direction {raw_trend.get('direction')!r}"
                ) from None
            trends.append(
                TrendConstraint(
                    dimension=_parse_dimension(raw_trend.get("dimension")),
                    direction=direction,
                    min_delta=float(raw_trend.get("min_delta", 0.0)),
                    window=int(raw_trend.get("window", 2)),
                )
            )
        concepts.append(
            ConceptSpec(
                name=raw.get("name"),
                regions=tuple(regions),
                trends=tuple(trends),
                min_run_plies=int(raw.get("min_run_plies", 1)),
                convergence_threshold=float(raw.get("convergence_threshold", 0.0)),
            )
        )
    return SpaceConfig(version=version, concepts=tuple(concepts))


def load_config(path) -> SpaceConfig:
    """Load and validate a configuration JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration {path} is not valid JSON: {exc}") from exc
    return config_from_dict(doc)


def default_config() -> SpaceConfig:
    """The packaged default configuration, calibrated on the labeled games."""
    text = resources.files("chesslens.data").joinpath("default_space.json").read_text("utf-8")
    return config_from_dict(json.loads(text))


def seed_config() -> SpaceConfig:
    """The hand-authored pre-calibration regions.

    This is the starting point the packaged default was fitted from; use it
    as the base when recalibrating against a new labeled set.
    """
    text = resources.files("chesslens.data").joinpath("seed_space.json").read_text("utf-8")
    return config_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Geometry.


def membership(v: PerspectiveVector, c: ConceptSpec) -> bool:
    """True iff every declared interval of every region contains v (closed)."""
    for region in c.regions:
        for dim, (lo, hi) in region.bounds.items():
            x = v[dim]
            if x < lo or x > hi:
                return False
    return True


def centroid(c: ConceptSpec) -> Dict[DimensionId, float]:
    """Midpoint of each declared interval; undeclared dimensions absent."""
    return {dim: (lo + hi) / 2.0 for dim, (lo, hi) in c.declared_bounds().items()}


def scaled_distance(v, c: ConceptSpec) -> float:
    """Interval-scaled distance of v to the centroid over declared dims.

    Accepts any object indexable by DimensionId. Point intervals contribute
    0 on exact match, else 1 + |difference|.
    """
    bounds = c.declared_bounds()
    total = 0.0
    for dim, (lo, hi) in bounds.items():
        mid = (lo + hi) / 2.0
        halfwidth = (hi - lo) / 2.0
        x = v[dim]
        if halfwidth == 0.0:
            term = 0.0 if x == mid else 1.0 + abs(x - mid)
        else:
            term = (x - mid) / halfwidth
        total += term * term
    return math.sqrt(total / len(bounds))


def typicality(v: PerspectiveVector, c: ConceptSpec) -> float:
    """1 at the centroid, decaying to 0 at interval-scaled distance 1."""
    return max(0.0, 1.0 - scaled_distance(v, c))
