"""Geometry primitives: haversine, tangent plane, circle projection."""

import math

import numpy as np
import pytest

from driftsearch.geo import (
    EARTH,
    EarthModel,
    GeoPoint,
    LocalVector,
    from_local,
    haversine_km,
    haversine_km_arrays,
    latlon_to_local,
    local_to_latlon,
    project_to_circle,
    to_local,
)


class TestGeoPoint:
    def test_valid(self):
        p = GeoPoint(34.5, 127.8)
        assert p.lat == 34.5 and p.lon == 127.8

    def test_longitude_wraps(self):
        assert GeoPoint(0.0, 190.0).lon == pytest.approx(-170.0)
        assert GeoPoint(0.0, -200.0).lon == pytest.approx(160.0)

    def test_latitude_rejected(self):
        with pytest.raises(ValueError):
            GeoPoint(91.0, 0.0)
        with pytest.raises(ValueError):
            GeoPoint(-90.5, 0.0)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            GeoPoint(float("nan"), 0.0)
        with pytest.raises(ValueError):
            GeoPoint(0.0, float("inf"))


class TestEarthModel:
    def test_default_radius(self):
        assert EARTH.radius_km == 6371.0

    def test_meters_per_degree(self):
        # 2*pi*R / 360 degrees.
        expected = 2.0 * math.pi * 6371.0 * 1000.0 / 360.0
        assert EARTH.meters_per_degree == pytest.approx(expected)

    def test_invalid_radius(self):
        with pytest.raises(ValueError):
            EarthModel(0.0)


class TestHaversine:
    def test_zero_distance(self):
        p = GeoPoint(12.3, 45.6)
        assert haversine_km(p, p) == 0.0

    def test_equatorial_degree(self):
        # One degree of longitude on the equator is one 360th of the equator.
        d = haversine_km(GeoPoint(0.0, 0.0), GeoPoint(0.0, 1.0))
        assert d == pytest.approx(2.0 * math.pi * 6371.0 / 360.0, rel=1e-12)

    def test_quarter_meridian(self):
        d = haversine_km(GeoPoint(0.0, 0.0), GeoPoint(90.0, 0.0))
        assert d == pytest.approx(math.pi * 6371.0 / 2.0, rel=1e-12)

    def test_antipodal(self):
        d = haversine_km(GeoPoint(0.0, 0.0), GeoPoint(0.0, 180.0))
        assert d == pytest.approx(math.pi * 6371.0, rel=1e-12)

    def test_symmetry(self):
        a, b = GeoPoint(51.5, -0.12), GeoPoint(48.85, 2.35)
        assert haversine_km(a, b) == pytest.approx(haversine_km(b, a))

    def test_known_city_pair(self):
        # Nashville (BNA) to Los Angeles (LAX), the textbook haversine example:
        # 2887.26 km on a 6372.8 km sphere, rescaled to this mean radius.
        d = haversine_km(GeoPoint(36.12, -86.67), GeoPoint(33.94, -118.40))
        assert d == pytest.approx(2887.2599 * 6371.0 / 6372.8, abs=0.01)

    def test_array_version_matches_scalar(self):
        rng = np.random.default_rng(3)
        lat1, lat2 = rng.uniform(-80, 80, 20), rng.uniform(-80, 80, 20)
        lon1, lon2 = rng.uniform(-180, 180, 20), rng.uniform(-180, 180, 20)
        batch = haversine_km_arrays(lat1, lon1, lat2, lon2)
        for i in range(20):
            single = haversine_km(GeoPoint(lat1[i], lon1[i]), GeoPoint(lat2[i], lon2[i]))
            assert batch[i] == pytest.approx(single, rel=1e-12)

    def test_array_broadcasting(self):
        lat = np.array([0.0, 10.0, 20.0])
        lon = np.array([0.0, 1.0, 2.0])
        grid = haversine_km_arrays(lat[:, None], lon[:, None], lat[None, :], lon[None, :])
        assert grid.shape == (3, 3)
        assert np.allclose(np.diag(grid), 0.0)
        assert np.allclose(grid, grid.T)


class TestTangentPlane:
    def test_round_trip(self):
        anchor = GeoPoint(34.0, 127.0)
        p = GeoPoint(34.03, 127.05)
        back = from_local(to_local(p, anchor), anchor)
        assert back.lat == pytest.approx(p.lat, abs=1e-12)
        assert back.lon == pytest.approx(p.lon, abs=1e-12)

    def test_north_displacement(self):
        anchor = GeoPoint(10.0, 20.0)
        v = to_local(GeoPoint(10.01, 20.0), anchor)
        assert v.east_m == pytest.approx(0.0, abs=1e-9)
        assert v.north_m == pytest.approx(0.01 * EARTH.meters_per_degree)

    def test_east_displacement_shrinks_with_latitude(self):
        v_eq = to_local(GeoPoint(0.0, 1.0), GeoPoint(0.0, 0.0))
        v_60 = to_local(GeoPoint(60.0, 1.0), GeoPoint(60.0, 0.0))
        assert v_60.east_m == pytest.approx(v_eq.east_m * math.cos(math.radians(60.0)), rel=1e-9)

    def test_local_distance_matches_haversine_at_small_scale(self):
        anchor = GeoPoint(34.0, 127.0)
        p = GeoPoint(34.02, 127.03)
        v = to_local(p, anchor)
        planar_km = math.hypot(v.east_m, v.north_m) / 1000.0
        assert planar_km == pytest.approx(haversine_km(anchor, p), rel=1e-4)

    def test_array_helpers_match_scalars(self):
        anchor = GeoPoint(33.5, 126.5)
        pts = [GeoPoint(33.52, 126.48), GeoPoint(33.47, 126.55)]
        east, north = latlon_to_local([p.lat for p in pts], [p.lon for p in pts], anchor)
        for i, p in enumerate(pts):
            v = to_local(p, anchor)
            assert east[i] * 1000.0 == pytest.approx(v.east_m, rel=1e-12)
            assert north[i] * 1000.0 == pytest.approx(v.north_m, rel=1e-12)
        lat, lon = local_to_latlon(east, north, anchor)
        for i, p in enumerate(pts):
            assert lat[i] == pytest.approx(p.lat, abs=1e-12)
            assert lon[i] == pytest.approx(p.lon, abs=1e-12)

    def test_non_finite_vector_rejected(self):
        with pytest.raises(ValueError):
            LocalVector(float("nan"), 0.0)


class TestProjectToCircle:
    CENTER = GeoPoint(34.0, 127.0)

    def test_inside_is_identity(self):
        p = from_local(LocalVector(500.0, -300.0), self.CENTER)
        assert project_to_circle(p, self.CENTER, 2.0) is p

    def test_outside_lands_on_boundary(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            angle = rng.uniform(0.0, 2.0 * math.pi)
            dist_m = rng.uniform(2100.0, 50000.0)
            p = from_local(LocalVector(dist_m * math.cos(angle), dist_m * math.sin(angle)), self.CENTER)
            q = project_to_circle(p, self.CENTER, 2.0)
            d = haversine_km(q, self.CENTER)
            assert d <= 2.0
            # Lands on (or a hair inside) the boundary; from 50 km out the
            # tangent-plane contraction can undershoot by a couple of meters.
            assert d == pytest.approx(2.0, abs=5e-3)

    def test_idempotent(self):
        p = from_local(LocalVector(9000.0, 100.0), self.CENTER)
        q = project_to_circle(p, self.CENTER, 3.0)
        assert project_to_circle(q, self.CENTER, 3.0) is q

    def test_center_maps_to_center(self):
        assert project_to_circle(self.CENTER, self.CENTER, 1.0) == self.CENTER

    def test_direction_preserved(self):
        p = from_local(LocalVector(8000.0, 6000.0), self.CENTER)
        q = project_to_circle(p, self.CENTER, 1.0)
        v = to_local(q, self.CENTER)
        # Same bearing as the original offset (atan2 of a positive scalar multiple).
        assert math.atan2(v.north_m, v.east_m) == pytest.approx(math.atan2(6000.0, 8000.0), abs=1e-9)
