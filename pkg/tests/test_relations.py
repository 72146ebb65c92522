"""Relation evaluation: truncation, the three sums, inversion, classification."""
from __future__ import annotations

import random

import pytest

from welsurge import (
    Classification,
    ExcludedClass,
    HClass,
    InvariantKey,
    InvariantTable,
    LatticeMismatch,
    MissingEntry,
    OddPairing,
    PreconditionFailed,
    QUADRIC,
    SurfaceModel,
    TangencyMismatch,
    TangencyVector,
    Unbounded,
    arithmetic_genus,
    blowup_plane,
    classify_quadric,
    compose_check,
    correspondence,
    format_tangency,
    gdf_coefficient,
    genus_decreasing,
    invert_relative,
    pair,
    parse_class,
    parse_tangency,
    pullback_class,
    truncation_bound,
    unscrew_relation,
    wall_cross,
)
from welsurge.fixtures import example_models, example_run, example_table

D_EX1 = parse_class("(6;-2,-2,-2,-2,-2,-2)")
S_EX1 = parse_class("(2;-1,-1,-1,-1,-1,-1)")
D_EX2 = parse_class("(6;-2,-2,-2,-2,-2,-2,-2)")
S_EX2 = parse_class("(2;-1,-1,-1,-1,-1,-1,0)")


def absolute_key(surface_id, d, r, components=("P",)):
    return InvariantKey(surface_id, d, components, tuple(r))


def relative_key(surface_id, divisor, d, r, components=("P",)):
    return InvariantKey(surface_id, d, components, tuple(r), relative_to=divisor)


# ---------------------------------------------------------------- truncation


def test_truncation_bound_on_both_examples():
    x1 = SurfaceModel.blowup_plane("X1", 6)
    assert truncation_bound(x1, D_EX1, S_EX1, 1, 0) == 2
    x2 = SurfaceModel.blowup_plane("X2", 7)
    assert truncation_bound(x2, D_EX2, S_EX2, 1, 0) == 2


def test_truncation_bound_zero_when_genus_already_at_target():
    x1 = SurfaceModel.blowup_plane("X1", 6)
    g = arithmetic_genus(x1, D_EX1)
    assert truncation_bound(x1, D_EX1, S_EX1, 1, g) == 0


def test_truncation_never_past_a_real_crossing():
    # Every index beyond the bound has genus strictly below the target.
    x1 = SurfaceModel.blowup_plane("X1", 6)
    for g_target in (0, 1, 2):
        bound = truncation_bound(x1, D_EX1, S_EX1, 1, g_target)
        for k in range(bound + 1, bound + 5):
            assert arithmetic_genus(x1, D_EX1 - k * S_EX1) < g_target
        # The bound itself is tight: one step earlier the constraint still holds.
        if bound > 0:
            assert arithmetic_genus(x1, D_EX1 - (bound - 1) * S_EX1) >= g_target


def test_truncation_unbounded_cases():
    x1 = SurfaceModel.blowup_plane("X1", 6)
    line = parse_class("(1;0,0,0,0,0,0)")
    with pytest.raises(Unbounded):
        truncation_bound(x1, D_EX1, line, 1, 0)  # step.step = +1
    zero = HClass(blowup_plane(6), (0,) * 7)
    nullstep = parse_class("(1;-1,0,0,0,0,0)")  # step.step = 0
    assert pair(nullstep, nullstep) == 0
    with pytest.raises(Unbounded):
        truncation_bound(x1, zero, nullstep, 1, 0)  # zero drift, genus never drops


def test_truncation_linear_case_on_quadric():
    q = SurfaceModel.quadric("Q")
    d = HClass(QUADRIC, (3, 4))
    ruling = HClass(QUADRIC, (1, 0))
    # genus(d - k*l1) = 6 - 3k, so the crossing is exactly at k = 2.
    assert truncation_bound(q, d, ruling, 1, 0) == 2
    with pytest.raises(Unbounded):
        truncation_bound(q, HClass(QUADRIC, (-3, -4)), ruling, 1, 0)


def test_truncation_with_doubled_step():
    x1 = SurfaceModel.blowup_plane("X1", 6)
    single = truncation_bound(x1, D_EX1, S_EX1, 1, 0)
    doubled = truncation_bound(x1, D_EX1, S_EX1, 2, 0)
    assert doubled <= single
    assert arithmetic_genus(x1, D_EX1 - 2 * (doubled + 1) * S_EX1) < 0


# ------------------------------------------------------- genus decreasing


@pytest.mark.parametrize(
    "number, expected",
    [(1, {(5, 1): 36, (3, 1): 12, (1, 1): -4}), (2, {(3, 1): 12, (1, 1): 8})],
)
def test_genus_decreasing_reproduces_examples(number, expected):
    models = example_models(number)
    table = example_table(number)
    run = example_run(number)
    for r, value in expected.items():
        result = genus_decreasing(
            table, models[run.y_id], models[run.x_id], run.d, run.sphere, r
        )
        assert result.value == value
        assert result.value == result.check_sum()
        assert [t.coefficient for t in result.terms] == [1, -4]
        assert [t.k for t in result.terms] == [1, 2]


def test_genus_decreasing_term_keys_and_sources():
    models = example_models(1)
    table = example_table(1)
    result = genus_decreasing(table, models["Y1"], models["X1"], D_EX1, S_EX1, (5, 1))
    first, second = result.terms
    assert first.key == absolute_key("X1", parse_class("(4;-1,-1,-1,-1,-1,-1)"), (5,))
    assert second.key == absolute_key("X1", parse_class("(2;0,0,0,0,0,0)"), (5,))
    assert "r0=6" in first.source


def test_genus_decreasing_preconditions():
    models = example_models(1)
    table = example_table(1)
    y, x = models["Y1"], models["X1"]
    with pytest.raises(PreconditionFailed, match="genus"):
        genus_decreasing(table, y, x, D_EX1, S_EX1, (5,))
    with pytest.raises(PreconditionFailed, match="last entry"):
        genus_decreasing(table, y, x, D_EX1, S_EX1, (5, 3))
    with pytest.raises(PreconditionFailed, match="d.S"):
        genus_decreasing(table, y, x, D_EX1 + S_EX1, S_EX1, (5, 1))
    with pytest.raises(PreconditionFailed, match="surgery"):
        genus_decreasing(table, y, x, D_EX1, parse_class("(1;0,0,0,0,0,0)"), (5, 1))
    with pytest.raises(PreconditionFailed, match="invalid"):
        # Even point count on the crosscap component violates parity.
        genus_decreasing(table, y, x, D_EX1, S_EX1, (4, 1))


def test_genus_decreasing_lenient_vs_strict():
    models = example_models(1)
    table = example_table(1)
    partial = InvariantTable()
    key = absolute_key("X1", parse_class("(4;-1,-1,-1,-1,-1,-1)"), (5,))
    partial.insert(key, table.value(key))

    lenient = genus_decreasing(partial, models["Y1"], models["X1"], D_EX1, S_EX1, (5, 1))
    assert lenient.value == 40
    assert lenient.terms[1].missing
    assert any("treated as 0" in w for w in lenient.warnings)

    strict = genus_decreasing(
        partial, models["Y1"], models["X1"], D_EX1, S_EX1, (5, 1), strict=True
    )
    assert strict.undefined
    assert strict.value is None
    with pytest.raises(MissingEntry):
        strict.require_value()


# ------------------------------------------------------------- degeneration


def toy_relative_table(values, r=(5,)):
    """Relative entries at shifts k=1.. with the example-1 classes."""
    table = InvariantTable()
    for k, value in values.items():
        table.insert(relative_key("Z1", S_EX1, D_EX1 - k * S_EX1, r), value, f"toy k={k}")
    return table


def make_z():
    return SurfaceModel.blowup_plane("Z1", 6)


def test_unscrew_single_term():
    table = toy_relative_table({1: 7})
    result = unscrew_relation(table, make_z(), D_EX1, S_EX1, (5,), components=("P",))
    assert result.value == 7


def test_unscrew_two_terms():
    table = toy_relative_table({1: 3, 2: 5})
    result = unscrew_relation(table, make_z(), D_EX1, S_EX1, (5,), components=("P",))
    assert result.value == 3 - 4 * 5
    assert [t.coefficient for t in result.terms] == [1, -4]


def test_unscrew_coefficient_sequence():
    # (-1)^(k-1) * k * 2^(k-1) for k = 1.. is 1, -4, 12, -32, 80, ...
    big = SurfaceModel.blowup_plane("Z1", 6)
    d = 6 * big.c1
    table = InvariantTable()
    result = unscrew_relation(table, big, d, S_EX1, (5,), components=("P",))
    coeffs = [t.coefficient for t in result.terms[:5]]
    assert coeffs == [1, -4, 12, -32, 80]


def test_unscrew_preconditions():
    table = InvariantTable()
    with pytest.raises(PreconditionFailed, match="E.E"):
        unscrew_relation(table, make_z(), D_EX1, parse_class("(1;0,0,0,0,0,0)"), (5,), components=("P",))
    with pytest.raises(PreconditionFailed, match="d.E"):
        unscrew_relation(table, make_z(), D_EX1 + S_EX1, S_EX1, (5,), components=("P",))


# ----------------------------------------------- correspondence and inverse


def test_correspondence_identity_when_only_k0():
    table = toy_relative_table({0: 11})
    result = correspondence(table, make_z(), D_EX1, S_EX1, (5,), components=("P",))
    assert result.terms[0].coefficient == 1
    assert result.value == 11


def test_correspondence_first_coefficients_at_orthogonal_class():
    a, b = 13, -4
    table = toy_relative_table({0: a, 1: b})
    # d.E = 0: coefficient at k is C(2k, k), so 1, 2, 6, 20 ...
    result = correspondence(table, make_z(), D_EX1, S_EX1, (5,), components=("P",))
    assert [t.coefficient for t in result.terms[:2]] == [1, 2]
    assert result.value == a + 2 * b


def test_correspondence_odd_pairing_rejected():
    z = make_z()
    d = D_EX1 + parse_class("(0;1,0,0,0,0,0)")  # d.E becomes odd
    with pytest.raises(OddPairing):
        correspondence(InvariantTable(), z, d, S_EX1, (5,), components=("P",))
    with pytest.raises(OddPairing):
        invert_relative(InvariantTable(), z, d, S_EX1, (5,), components=("P",))


def test_correspondence_negative_pairing_rejected():
    z = make_z()
    d = D_EX1 + 2 * S_EX1  # d.E = -4
    assert pair(d, S_EX1) == -4
    with pytest.raises(PreconditionFailed):
        correspondence(InvariantTable(), z, d, S_EX1, (5,), components=("P",))


def test_invert_coefficients_at_orthogonal_class():
    table = InvariantTable()
    a, b = 9, 2
    table.insert(absolute_key("Z1", D_EX1, (5,)), a)
    table.insert(absolute_key("Z1", D_EX1 - 2 * S_EX1, (5,)), b)
    result = invert_relative(table, make_z(), D_EX1, S_EX1, (5,), components=("P",))
    # Coefficients at p = 0: k=0 gives C(0,0) + C(-1,0) = 1, k=1 gives -(C(1,0)+C(0,0)) = -2.
    assert [t.coefficient for t in result.terms[:2]] == [1, -2]
    assert result.value == a - 2 * b
    assert any("negative upper index" in w for w in result.warnings)


def test_inversion_round_trip_small():
    surface = SurfaceModel.blowup_plane("Z1", 6)
    d = 40 * surface.c1  # huge genus headroom, no clipping
    values = {0: 5, 1: -3, 2: 7}
    absolute = InvariantTable()
    for j, value in values.items():
        absolute.insert(absolute_key("Z1", d - (2 * j) * S_EX1, (5,)), value)

    bound = truncation_bound(surface, d, S_EX1, 2, 0)
    relative = InvariantTable()
    for k in range(bound + 1):
        res = invert_relative(
            absolute, surface, d - (2 * k) * S_EX1, S_EX1, (5,), components=("P",)
        )
        relative.insert(relative_key("Z1", S_EX1, d - (2 * k) * S_EX1, (5,)), res.value)

    for j, value in values.items():
        res = correspondence(
            relative, surface, d - (2 * j) * S_EX1, S_EX1, (5,), components=("P",)
        )
        assert res.value == value


def test_inversion_round_trip_randomized():
    rng = random.Random(90125)
    lattice = blowup_plane(6)
    surface = SurfaceModel.blowup_plane("Z1", 6)
    for _ in range(25):
        p = rng.randrange(0, 6)
        depth = rng.randrange(1, 21)
        # d = t*c1 - p*E has d.E = 2p and plenty of genus headroom.
        d = 40 * surface.c1 - p * S_EX1
        assert pair(d, S_EX1) == 2 * p
        values = [rng.randrange(-99, 100) for _ in range(depth + 1)]
        absolute = InvariantTable()
        for j, value in enumerate(values):
            absolute.insert(absolute_key("Z1", d - (2 * j) * S_EX1, (5,)), value)
        bound = truncation_bound(surface, d, S_EX1, 2, 0)
        relative = InvariantTable()
        for k in range(bound + 1):
            res = invert_relative(
                absolute, surface, d - (2 * k) * S_EX1, S_EX1, (5,), components=("P",)
            )
            relative.insert(relative_key("Z1", S_EX1, d - (2 * k) * S_EX1, (5,)), res.value)
        for j, value in enumerate(values):
            res = correspondence(
                relative, surface, d - (2 * j) * S_EX1, S_EX1, (5,), components=("P",)
            )
            assert res.value == value, (p, depth, j)


# ------------------------------------------------------ pipeline equivalence


def pipeline_value(table, surface_z, model_x, d, sphere, r_prime):
    """Relative table via inversion, then the degeneration sum."""
    bound = truncation_bound(model_x.surface, d, sphere, 1, len(r_prime) - 1)
    relative = InvariantTable()
    for k in range(1, bound + 1):
        res = invert_relative(
            table, model_x, d - k * sphere, sphere, r_prime, components=("P",)
        )
        relative.insert(
            relative_key(surface_z.id, sphere, d - k * sphere, r_prime), res.value
        )
    return unscrew_relation(
        relative, surface_z, d, sphere, r_prime, components=("P",)
    ).value


@pytest.mark.parametrize("number", [1, 2])
def test_pipeline_matches_genus_decreasing_on_fixtures(number):
    models = example_models(number)
    table = example_table(number)
    run = example_run(number)
    z = SurfaceModel.blowup_plane("Z", models[run.x_id].surface.lattice.n)
    for r in run.r_rows:
        direct = genus_decreasing(
            table, models[run.y_id], models[run.x_id], run.d, run.sphere, r
        ).value
        composed = pipeline_value(
            table, z, models[run.x_id], run.d, run.sphere, r[:-1]
        )
        assert composed == direct


def test_pipeline_matches_on_randomized_tables():
    rng = random.Random(2112)
    models = example_models(1)
    x = models["X1"]
    z = SurfaceModel.blowup_plane("Z", 6)
    d = 6 * x.surface.c1  # truncation depth 7: room for 6 random shifts
    for _ in range(20):
        table = InvariantTable()
        values = {}
        for i in range(1, 7):
            values[i] = rng.randrange(-50, 51)
            table.insert(absolute_key("X1", d - i * S_EX1, (5,)), values[i])
        direct = genus_decreasing(table, models["Y1"], x, d, S_EX1, (5, 1)).value
        assert direct == sum(gdf_coefficient(i) * values[i] for i in values)
        assert pipeline_value(table, z, x, d, S_EX1, (5,)) == direct


# ------------------------------------------------------------ compose check


def test_compose_check_passes_to_depth_40():
    report = compose_check(40)
    assert report.passed
    assert report.first_failure is None
    assert report.series.coefficient(1) == 1
    assert report.series.coefficient(2) == -4
    assert all(report.series.coefficient(i) == gdf_coefficient(i) for i in range(1, 41))


def test_compose_check_requires_depth_two():
    with pytest.raises(ValueError):
        compose_check(1)


# ------------------------------------------------------------ wall crossing


def test_wall_cross_arithmetic():
    assert wall_cross(8, 2) == 12
    assert wall_cross(7, 0) == 7
    assert wall_cross(0, 5) == 10


def test_wall_cross_links_the_two_example_tables():
    # The degree-2 base values are the corrections solved from the degree-3 column.
    t1 = example_table(1)
    t2 = example_table(2)
    d1 = parse_class("(4;-1,-1,-1,-1,-1,-1)")
    d2 = pullback_class(d1)
    assert d2 == parse_class("(4;-1,-1,-1,-1,-1,-1,-2)")
    for low, high in ((3, 5), (1, 3)):
        base = t1.value(absolute_key("X1", d1, (low,)))
        target = t1.value(absolute_key("X1", d1, (high,)))
        correction = t2.value(absolute_key("X2", d2, (low,)))
        assert wall_cross(base, correction) == target


def test_pullback_class_shape():
    d = parse_class("(2;0,0,0,0,0,0)")
    lifted = pullback_class(d)
    assert lifted.lattice == blowup_plane(7)
    assert lifted.coeffs == (2, 0, 0, 0, 0, 0, 0, -2)
    with pytest.raises(LatticeMismatch):
        pullback_class(HClass(QUADRIC, (1, 1)))


# ------------------------------------------------------------ tangency data


def test_tangency_vector_norms():
    t = TangencyVector.of({1: 2, 3: 1})
    assert t.size == 3
    assert t.weight == 5
    assert TangencyVector.zero().weight == 0
    assert (2 * TangencyVector.delta(1)).entries == ((1, 2),)


def test_tangency_parse_format():
    assert parse_tangency("1:2,3:1") == TangencyVector.of({1: 2, 3: 1})
    assert parse_tangency("0") == TangencyVector.zero()
    assert parse_tangency("") == TangencyVector.zero()
    assert parse_tangency("2") == TangencyVector.delta(2)
    assert format_tangency(TangencyVector.of({2: 1})) == "2:1"
    assert format_tangency(TangencyVector.zero()) == "0"


def test_tangency_vector_validation():
    with pytest.raises(ValueError):
        TangencyVector(((0, 1),))
    with pytest.raises(ValueError):
        TangencyVector(((1, 1), (1, 2)))


# ----------------------------------------------------------- classification


def ruling(i):
    return HClass(QUADRIC, (1, 0) if i == 1 else (0, 1))


DIAGONAL = HClass(QUADRIC, (1, 1))
D1 = TangencyVector.delta(1)
ZERO = TangencyVector.zero()


def test_classifier_unique_cases():
    for i in (1, 2):
        got = classify_quadric(ruling(i), D1, ZERO, 0)
        assert got == Classification.unique(1, i)
        got = classify_quadric(ruling(i), ZERO, D1, 1)
        assert got == Classification.unique(2, i)
    assert classify_quadric(DIAGONAL, TangencyVector.delta(1, 2), ZERO, 1) == Classification.unique(3)
    assert classify_quadric(DIAGONAL, TangencyVector.delta(2), ZERO, 1) == Classification.unique(4)


def test_classifier_empty_cases():
    assert classify_quadric(DIAGONAL, D1, D1, 1).is_empty
    assert classify_quadric(DIAGONAL, TangencyVector.delta(2), ZERO, 0).is_empty
    assert classify_quadric(ruling(1), D1, ZERO, 1).is_empty
    assert classify_quadric(HClass(QUADRIC, (2, 1)), TangencyVector.of({1: 3}), ZERO, 1).is_empty


def test_classifier_errors():
    with pytest.raises(ExcludedClass):
        classify_quadric(HClass(QUADRIC, (2, 0)), TangencyVector.of({1: 4}), ZERO, 0)
    with pytest.raises(ExcludedClass):
        classify_quadric(HClass(QUADRIC, (0, 3)), TangencyVector.of({1: 6}), ZERO, 0)
    with pytest.raises(TangencyMismatch):
        classify_quadric(DIAGONAL, D1, ZERO, 1)
    with pytest.raises(PreconditionFailed):
        classify_quadric(HClass(QUADRIC, (0, 0)), ZERO, ZERO, 0)
    with pytest.raises(PreconditionFailed):
        classify_quadric(DIAGONAL, TangencyVector.delta(2), ZERO, 2)
    with pytest.raises(LatticeMismatch):
        classify_quadric(parse_class("(1;0)"), D1, ZERO, 0)


def tangency_vectors_of_weight(w):
    """All tangency vectors of total contact order w (partitions of w)."""
    def partitions(n, max_part):
        if n == 0:
            yield ()
            return
        for part in range(min(n, max_part), 0, -1):
            for rest in partitions(n - part, part):
                yield (part,) + rest

    out = []
    for shape in partitions(w, w if w else 1):
        counts: dict[int, int] = {}
        for part in shape:
            counts[part] = counts.get(part, 0) + 1
        out.append(TangencyVector.of(counts))
    return out


def test_classifier_swap_symmetry():
    for p in range(0, 3):
        for q in range(0, 3):
            if (p, q) == (0, 0) or (p == 0 and q >= 2) or (q == 0 and p >= 2):
                continue
            d = HClass(QUADRIC, (p, q))
            swapped = HClass(QUADRIC, (q, p))
            for wa in range(0, p + q + 1):
                for alpha in tangency_vectors_of_weight(wa):
                    for beta in tangency_vectors_of_weight(p + q - wa):
                        for off in (0, 1):
                            got = classify_quadric(d, alpha, beta, off)
                            mirrored = classify_quadric(swapped, alpha, beta, off)
                            assert got.outcome == mirrored.outcome
                            assert got.case == mirrored.case
                            if got.ruling is not None:
                                assert mirrored.ruling == 3 - got.ruling


# ----------------------------------------------------------- result objects


def test_every_result_recomputes_from_breakdown():
    models = example_models(1)
    table = example_table(1)
    results = [
        genus_decreasing(table, models["Y1"], models["X1"], D_EX1, S_EX1, r)
        for r in ((5, 1), (3, 1), (1, 1))
    ]
    results.append(
        unscrew_relation(toy_relative_table({1: 3, 2: 5}), make_z(), D_EX1, S_EX1, (5,), components=("P",))
    )
    for result in results:
        assert result.value == result.check_sum()
        assert result.value == sum(t.coefficient * t.resolved for t in result.terms)
