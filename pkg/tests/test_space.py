"""Tests for concept-space configuration and geometry."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from chesslens.dimensions import (
    DIMENSIONS,
    DOMAIN_DIMENSIONS,
    DimensionId,
    Domain,
    PerspectiveVector,
)
from chesslens.space import (
    ConceptSpec,
    ConfigError,
    Direction,
    RegionSpec,
    SpaceConfig,
    TrendConstraint,
    centroid,
    config_from_dict,
    default_config,
    load_config,
    membership,
    scaled_distance,
    typicality,
)


def vec(**overrides):
    values = {d.name: 0.0 for d in DIMENSIONS}
    values.update(overrides)
    return PerspectiveVector(**values)


def one_box(domain, bounds):
    return ConceptSpec(name="probe", regions=(RegionSpec(domain=domain, bounds=bounds),))


# ---------------------------------------------------------------------------
# Validation.


def test_interval_reversed_rejected():
    with pytest.raises(ConfigError):
        one_box(Domain.TERRITORY, {DimensionId.CTR: (0.9, 0.2)})


def test_interval_outside_unit_rejected():
    with pytest.raises(ConfigError):
        one_box(Domain.TERRITORY, {DimensionId.CTR: (-0.1, 0.5)})
    with pytest.raises(ConfigError):
        one_box(Domain.TERRITORY, {DimensionId.CTR: (0.5, 1.2)})


def test_dimension_in_wrong_domain_rejected():
    # MAT belongs to the force domain, not territory
    with pytest.raises(ConfigError):
        one_box(Domain.TERRITORY, {DimensionId.MAT: (0.0, 0.5)})


def test_empty_region_rejected():
    with pytest.raises(ConfigError):
        one_box(Domain.FORCE, {})


def test_concept_without_regions_rejected():
    with pytest.raises(ConfigError):
        ConceptSpec(name="empty", regions=())


def test_duplicate_domain_rejected():
    r1 = RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MAT: (0.0, 0.5)})
    r2 = RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MOB: (0.0, 0.5)})
    with pytest.raises(ConfigError):
        ConceptSpec(name="dup", regions=(r1, r2))


def test_duplicate_concept_names_rejected():
    c = one_box(Domain.FORCE, {DimensionId.MAT: (0.0, 0.5)})
    with pytest.raises(ConfigError):
        SpaceConfig(version="x", concepts=(c, c))


def test_trend_validation():
    with pytest.raises(ConfigError):
        TrendConstraint(DimensionId.MAT, Direction.DECREASING, min_delta=1.5, window=4)
    with pytest.raises(ConfigError):
        TrendConstraint(DimensionId.MAT, Direction.DECREASING, min_delta=0.1, window=1)


def test_min_run_and_threshold_validation():
    region = RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MAT: (0.0, 0.5)})
    with pytest.raises(ConfigError):
        ConceptSpec(name="bad", regions=(region,), min_run_plies=0)
    with pytest.raises(ConfigError):
        ConceptSpec(name="bad", regions=(region,), convergence_threshold=1.5)


def test_config_from_dict_errors():
    with pytest.raises(ConfigError):
        config_from_dict([])
    with pytest.raises(ConfigError):
        config_from_dict({"version": "x"})
    with pytest.raises(ConfigError):
        config_from_dict({"version": "x", "concepts": []})
    bad_domain = {
        "version": "x",
        "concepts": [
            {
                "name": "c",
                "regions": [{"domain": "ocean", "bounds": {"CTR": [0.0, 1.0]}}],
            }
        ],
    }
    with pytest.raises(ConfigError):
        config_from_dict(bad_domain)
    bad_dim = {
        "version": "x",
        "concepts": [
            {
                "name": "c",
                "regions": [{"domain": "territory", "bounds": {"XYZ": [0.0, 1.0]}}],
            }
        ],
    }
    with pytest.raises(ConfigError):
        config_from_dict(bad_dim)
    bad_direction = {
        "version": "x",
        "concepts": [
            {
                "name": "c",
                "regions": [{"domain": "territory", "bounds": {"CTR": [0.0, 1.0]}}],
                "trends": [
                    {"dimension": "MAT", "direction": "sideways", "min_delta": 0.1, "window": 4}
                ],
            }
        ],
    }
    with pytest.raises(ConfigError):
        config_from_dict(bad_direction)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.json")


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


def test_default_config_contents():
    cfg = default_config()
    assert isinstance(cfg.version, str) and cfg.version
    names = {c.name for c in cfg.concepts}
    assert names == {"king_attack", "positional_sacrifice", "space_domination"}
    # every concept constrains at least one dimension in [0, 1]
    for c in cfg.concepts:
        bounds = c.declared_bounds()
        assert bounds
        for lo, hi in bounds.values():
            assert 0.0 <= lo <= hi <= 1.0


def test_to_dict_round_trip():
    cfg = default_config()
    again = config_from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()


def test_declared_bounds_vector_order():
    c = ConceptSpec(
        name="multi",
        regions=(
            RegionSpec(domain=Domain.CONFLICT, bounds={DimensionId.PRS: (0.5, 1.0)}),
            RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MOB: (0.5, 1.0)}),
        ),
    )
    assert list(c.declared_bounds()) == [DimensionId.MOB, DimensionId.PRS]


# ---------------------------------------------------------------------------
# Membership.


def test_membership_closed_boundaries():
    c = one_box(Domain.TERRITORY, {DimensionId.CTR: (0.3, 0.7)})
    assert membership(vec(CTR=0.3), c)
    assert membership(vec(CTR=0.7), c)
    assert membership(vec(CTR=0.5), c)
    assert not membership(vec(CTR=0.29999), c)
    assert not membership(vec(CTR=0.70001), c)


def test_membership_is_a_conjunction():
    c = ConceptSpec(
        name="both",
        regions=(
            RegionSpec(domain=Domain.TERRITORY, bounds={DimensionId.CTR: (0.5, 1.0)}),
            RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MOB: (0.5, 1.0)}),
        ),
    )
    assert membership(vec(CTR=0.6, MOB=0.6), c)
    assert not membership(vec(CTR=0.6, MOB=0.4), c)
    assert not membership(vec(CTR=0.4, MOB=0.6), c)


def test_membership_ignores_undeclared_dimensions():
    c = one_box(Domain.FORCE, {DimensionId.MAT: (0.4, 0.6)})
    assert membership(vec(MAT=0.5, VUL=1.0, CTR=1.0), c)


# ---------------------------------------------------------------------------
# Centroid, distance, typicality.


def test_centroid_is_box_midpoint():
    cfg = default_config()
    ka = cfg.concept("king_attack")
    mid = centroid(ka)
    for dim, (lo, hi) in ka.declared_bounds().items():
        assert mid[dim] == pytest.approx((lo + hi) / 2.0)


def test_typicality_one_at_centroid():
    c = ConceptSpec(
        name="c",
        regions=(
            RegionSpec(domain=Domain.TERRITORY, bounds={DimensionId.CTR: (0.2, 0.8)}),
            RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MOB: (0.4, 1.0)}),
        ),
    )
    at_mid = vec(CTR=0.5, MOB=0.7)
    assert typicality(at_mid, c) == pytest.approx(1.0, abs=1e-12)
    assert scaled_distance(at_mid, c) == pytest.approx(0.0, abs=1e-12)


def test_typicality_zero_at_box_corner():
    # every declared dimension at an interval endpoint sits at scaled distance 1
    c = ConceptSpec(
        name="c",
        regions=(
            RegionSpec(domain=Domain.TERRITORY, bounds={DimensionId.CTR: (0.2, 0.8)}),
            RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MOB: (0.4, 1.0)}),
        ),
    )
    corner = vec(CTR=0.8, MOB=0.4)
    assert scaled_distance(corner, c) == pytest.approx(1.0, abs=1e-12)
    assert typicality(corner, c) == pytest.approx(0.0, abs=1e-12)


def test_typicality_half_at_half_scaled_offset():
    c = one_box(Domain.TERRITORY, {DimensionId.CTR: (0.2, 0.8)})
    # halfwidth 0.3, so 0.65 sits halfway between centroid and edge
    assert typicality(vec(CTR=0.65), c) == pytest.approx(0.5)


def test_point_interval_distance():
    c = one_box(Domain.TERRITORY, {DimensionId.CTR: (0.6, 0.6)})
    assert scaled_distance(vec(CTR=0.6), c) == 0.0
    assert typicality(vec(CTR=0.6), c) == 1.0
    # off a point interval: term is 1 + |difference|, so never typical
    assert scaled_distance(vec(CTR=0.7), c) == pytest.approx(1.1)
    assert typicality(vec(CTR=0.7), c) == 0.0


def test_typicality_clamped_outside_region():
    c = one_box(Domain.TERRITORY, {DimensionId.CTR: (0.4, 0.6)})
    assert typicality(vec(CTR=1.0), c) == 0.0


# ---------------------------------------------------------------------------
# Property tests.

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, width=32)


@st.composite
def concepts(draw):
    regions = []
    for domain in Domain:
        dims = sorted(DOMAIN_DIMENSIONS[domain])
        chosen = draw(st.sets(st.sampled_from(dims), min_size=0, max_size=len(dims)))
        bounds = {}
        for dim in chosen:
            a = draw(unit)
            b = draw(unit)
            lo, hi = min(a, b), max(a, b)
            bounds[dim] = (lo, hi)
        if bounds:
            regions.append(RegionSpec(domain=domain, bounds=bounds))
    if not regions:
        regions.append(
            RegionSpec(domain=Domain.FORCE, bounds={DimensionId.MAT: (0.25, 0.75)})
        )
    return ConceptSpec(name="drawn", regions=tuple(regions))


@settings(max_examples=200, deadline=None)
@given(concepts(), st.lists(unit, min_size=7, max_size=7))
def test_centroid_always_member_and_typical(concept, fill):
    values = list(fill)
    for dim, mid in centroid(concept).items():
        values[dim] = mid
    v = PerspectiveVector(*values)
    assert membership(v, concept)
    assert typicality(v, concept) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(concepts(), st.lists(unit, min_size=7, max_size=7))
def test_typicality_in_unit_interval(concept, fill):
    v = PerspectiveVector(*fill)
    assert 0.0 <= typicality(v, concept) <= 1.0


@settings(max_examples=200, deadline=None)
@given(concepts(), st.lists(unit, min_size=7, max_size=7))
def test_membership_matches_interval_check(concept, fill):
    v = PerspectiveVector(*fill)
    expected = all(
        lo <= v[dim] <= hi for dim, (lo, hi) in concept.declared_bounds().items()
    )
    assert membership(v, concept) == expected


@settings(max_examples=200, deadline=None)
@given(concepts(), st.lists(unit, min_size=7, max_size=7))
def test_member_vectors_score_at_least_zero(concept, fill):
    # inside the box every squared term is at most 1 so distance stays <= 1
    values = list(fill)
    for dim, (lo, hi) in concept.declared_bounds().items():
        mid = (lo + hi) / 2.0
        halfwidth = (hi - lo) / 2.0
        offset = values[dim] * 2.0 - 1.0
        values[dim] = min(hi, max(lo, mid + offset * halfwidth))
    v = PerspectiveVector(*values)
    assert membership(v, concept)
    assert scaled_distance(v, concept) <= 1.0 + 1e-9
