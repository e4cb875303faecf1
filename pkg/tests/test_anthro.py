import math
import random

import pytest

from medgraph.anthro import (
    BUILTIN_PALETTES,
    PASSPORT_PALETTE,
    WHO_PALETTE,
    InvalidPalette,
    NonPositiveMeasure,
    XOutOfRange,
    ZonePalette,
    classify,
    format_z,
    legacy_symbol,
    load_palette,
    profile_at,
    value_for_z,
    zscore,
)
from medgraph.standards import Row, StandardDataset, Indicator, Sex, XUnit

from oracles import zscore_dense


class TestProfile:
    def test_grid_point_returns_stored_row(self, girls):
        p = profile_at(girls, 45.0)
        assert p.values == {-3: 1.9, -2: 2.1, -1: 2.3, 0: 2.5}

    def test_midpoint_interpolation(self, girls):
        p = profile_at(girls, 45.25)
        assert p.values[-3] == pytest.approx((1.9 + 2.0) / 2, abs=1e-12)

    def test_out_of_range(self, girls):
        with pytest.raises(XOutOfRange) as exc:
            profile_at(girls, 44.0)
        assert exc.value.min_x == 45.0 and exc.value.max_x == 47.0

    def test_continuity_at_grid_knots(self, girls):
        eps = 1e-9
        for row in girls.rows[1:-1]:
            left = profile_at(girls, row.x - eps)
            right = profile_at(girls, row.x + eps)
            for z in girls.z_labels:
                assert left.values[z] == pytest.approx(row.values[z], abs=1e-6)
                assert right.values[z] == pytest.approx(row.values[z], abs=1e-6)


class TestZScore:
    def test_between_minus3_and_minus2(self, girls):
        r = zscore(girls, 45.0, 2.0, PASSPORT_PALETTE)
        assert r.z == pytest.approx(-2.5, abs=1e-9)
        assert r.band == (-3, -2)
        assert r.zone == "yellow"

    def test_on_median(self, girls):
        assert zscore(girls, 45.0, 2.5).z == 0.0

    def test_on_stored_sd_line(self, girls):
        assert zscore(girls, 45.0, 2.1).z == -2.0

    def test_grid_exactness_all_cells(self, girls, boys):
        for ds in (girls, boys):
            for row in ds.rows:
                for z, v in row.values.items():
                    assert abs(zscore(ds, row.x, v).z - z) <= 1e-12

    def test_non_positive_measure(self, girls):
        with pytest.raises(NonPositiveMeasure):
            zscore(girls, 45.0, 0.0)

    def test_band_convention_lower_open(self, girls):
        # z exactly on a label belongs to the band below: lower < z <= upper
        assert zscore(girls, 45.0, 2.5).band == (-1, 0)
        assert zscore(girls, 45.0, 2.1).band == (-3, -2)

    def test_band_open_at_extremes(self, girls):
        assert zscore(girls, 45.0, 1.8).band == (None, -3)
        assert zscore(girls, 45.0, 3.0).band == (0, None)


class TestValueForZ:
    def test_inverse_of_interior_score(self, girls):
        assert value_for_z(girls, 45.0, -2.5) == pytest.approx(2.0, abs=1e-12)

    def test_identity_on_grid(self, girls):
        for row in girls.rows:
            for z, v in row.values.items():
                assert value_for_z(girls, row.x, z) == pytest.approx(v, abs=1e-12)

    def test_extrapolation_below(self, girls):
        # lowest band slope continues: 1.9 - 0.5 * (2.1 - 1.9)
        assert value_for_z(girls, 45.0, -3.5) == pytest.approx(1.8, abs=1e-12)


class TestClassify:
    def test_passport_yellow(self):
        assert classify(-2.5, PASSPORT_PALETTE) == "yellow"

    def test_innermost(self):
        assert classify(0.0, WHO_PALETTE) == "green"
        assert classify(0.0, PASSPORT_PALETTE) == "green"

    def test_boundary_belongs_inner(self):
        assert classify(-2.0, PASSPORT_PALETTE) == "green"
        assert classify(2.0, WHO_PALETTE) == "yellow"
        assert classify(-3.0, PASSPORT_PALETTE) == "yellow"

    def test_symmetry(self):
        rng = random.Random(7)
        for _ in range(500):
            z = rng.uniform(-6, 6)
            for pal in BUILTIN_PALETTES.values():
                assert classify(z, pal) == classify(-z, pal)

    def test_who_palette_red_outside_two(self):
        assert classify(2.3, WHO_PALETTE) == "red"
        assert classify(1.5, WHO_PALETTE) == "yellow"


class TestFormatting:
    @pytest.mark.parametrize(
        "z,expected",
        [(-1.24, "-1.2"), (0.0, "0.0"), (-2.55, "-2.6"), (1.25, "1.3"), (-0.04, "0.0"), (2.0, "2.0")],
    )
    def test_format_z(self, z, expected):
        assert format_z(z) == expected

    def test_legacy_pair(self):
        assert legacy_symbol(-2.5) == (">-3", "<-2")
        assert legacy_symbol(0.5) == (">0", "<1")

    def test_legacy_exact(self):
        assert legacy_symbol(-2.0) == "=-2"
        assert legacy_symbol(-2.0 + 1e-12) == "=-2"
        assert legacy_symbol(0.0) == "=0"


class TestPalettes:
    def test_load_palette(self, tmp_path):
        f = tmp_path / "clinic.palette"
        f.write_text("# local scheme\nname=clinic\n1.5=green\n2.5=#ffcc00\ninf=red\n")
        pal = load_palette(f)
        assert pal.name == "clinic"
        assert classify(2.0, pal) == "#ffcc00"

    def test_bounds_must_increase(self):
        with pytest.raises(InvalidPalette):
            ZonePalette("bad", ((2.0, "green"), (1.0, "yellow"), (math.inf, "red")))

    def test_final_bound_must_be_inf(self):
        with pytest.raises(InvalidPalette):
            ZonePalette("bad", ((2.0, "green"), (3.0, "yellow")))

    def test_unknown_color(self):
        with pytest.raises(InvalidPalette):
            ZonePalette("bad", ((math.inf, "blurple"),))


def random_dataset(rng: random.Random, max_rows=5) -> StandardDataset:
    n_rows = rng.randint(2, max_rows)
    xs = sorted(rng.sample(range(1, 400), n_rows))
    labels = tuple(sorted(rng.sample(range(-3, 4), rng.randint(2, 7))))
    rows = []
    for x in xs:
        base = rng.uniform(1.0, 30.0)
        vals = {}
        v = base
        for z in labels:
            v += rng.uniform(0.05, 3.0)
            vals[z] = round(v, 4)
        rows.append(Row(x=float(x), values=vals))
    return StandardDataset(
        id="rand",
        indicator=Indicator.CUSTOM,
        sex=Sex.ANY,
        x_unit=XUnit.AGE_DAYS,
        x_label="",
        y_label="",
        z_labels=labels,
        rows=tuple(rows),
    )


class TestProperties:
    def test_strict_monotonicity_in_y(self):
        rng = random.Random(42)
        for _ in range(200):
            ds = random_dataset(rng)
            x = rng.uniform(ds.min_x, ds.max_x)
            y1 = rng.uniform(0.1, 50.0)
            y2 = y1 + rng.uniform(1e-6, 10.0)
            assert zscore(ds, x, y1).z < zscore(ds, x, y2).z

    def test_inverse_round_trip(self):
        rng = random.Random(43)
        for _ in range(500):
            ds = random_dataset(rng)
            x = rng.uniform(ds.min_x, ds.max_x)
            z = rng.uniform(-3.5, 3.5)
            y = value_for_z(ds, x, z)
            if y <= 0:
                continue
            assert abs(zscore(ds, x, y).z - z) <= 1e-9

    def test_dense_sampling_oracle_agreement(self, girls):
        rng = random.Random(44)
        for _ in range(25):
            ds = random_dataset(rng)
            for _ in range(4):
                x = rng.uniform(ds.min_x, ds.max_x)
                z_target = rng.uniform(-4.5, 4.5)
                y = value_for_z(ds, x, z_target)
                if y <= 0:
                    continue
                assert zscore(ds, x, y).z == pytest.approx(
                    zscore_dense(ds, x, y), abs=1e-9
                )
        # and on the real fixture
        for y in (1.7, 2.0, 2.25, 2.5, 2.9):
            assert zscore(girls, 45.3, y).z == pytest.approx(
                zscore_dense(girls, 45.3, y), abs=1e-9
            )
