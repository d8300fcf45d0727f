import cmath
import math

import pytest

import minsurf


def sqrt13():
    s = math.sqrt(13.0)
    return minsurf.Configuration([-(11 + 3 * s) / 2, (-7 + s) / 6, 1.0], [0.25, 0.75, -1.0])


def test_binomial_squares():
    assert minsurf.binom_sq_coeffs(3) == [1, 9, 9, 1]
    with pytest.raises(minsurf.RangeError):
        minsurf.binom_sq_coeffs(26)


def test_roots_of_f2():
    roots, simple, _ = minsurf.poly_roots(minsurf.binom_sq_coeffs(2))
    expected = [-2 - math.sqrt(3), -2 + math.sqrt(3)]
    assert all(simple)
    assert minsurf.root_set_distance(roots, expected) < 1e-14


def test_legendre_config_balances():
    c = minsurf.legendre_config(5)
    assert len(c) == 6
    report = minsurf.balance_residuals(c)
    assert report.max_abs <= 1e-9
    assert report.jacobian.shape == (6, 6)


def test_asymmetric_example_and_solver():
    assert minsurf.balance_residuals(sqrt13()).max_abs <= 1e-12
    start = minsurf.legendre_config(2)
    start.necksizes = [0.25, 0.75, -1.0]
    result = minsurf.solve_balance(start, {2})
    assert minsurf.root_set_distance(result.config.points, sqrt13().points) < 1e-10


def test_solver_failure_carries_best_iterate():
    c = minsurf.legendre_config(4)
    c.points = [p * complex(1.5, 0.4) for p in c.points[:4]] + [1.0]
    with pytest.raises(minsurf.IterationFailure) as info:
        minsurf.solve_balance(c, {4}, max_iter=1)
    assert len(info.value.best_iterate) == 5


def test_bad_configuration_raises():
    with pytest.raises(minsurf.ConfigurationError):
        minsurf.Configuration([1.0, 1.0], [1.0, -1.0])
    with pytest.raises(minsurf.PoleError):
        minsurf.height_differential(sqrt13(), 1.0)


def test_periods():
    c = sqrt13()
    x = minsurf.contour_period(c, 0.0, minsurf.default_radius(c, 3))
    assert math.dist(x, (0.0, -math.pi, 0.0)) < 1e-8
    for k in range(3):
        assert max(map(abs, minsurf.contour_period(c, c.points[k], minsurf.default_radius(c, k)))) < 1e-8
    # residue of G dh at p_k from the contour agrees with the closed form
    res = minsurf.contour_gdh_residue(c, c.points[0], minsurf.default_radius(c, 0))
    assert cmath.isclose(res, minsurf.gdh_residue(c, 0), abs_tol=1e-9)


def test_conditions_and_json():
    report = minsurf.verify_conditions(minsurf.legendre_config(3))
    assert report["all_passed"]
    c = sqrt13()
    c.label = "three ends"
    back = minsurf.Configuration.from_json(c.to_json())
    assert back.points == c.points and back.label == "three ends"


def test_mesh():
    mesh = minsurf.build_mesh(minsurf.legendre_config(2))
    assert mesh.seam_defect() <= 1e-6
    assert mesh.max_puncture_loop_defect() <= 1e-6
    obj = mesh.to_obj()
    assert obj.count("\nf ") == len(mesh.faces)
    assert obj == minsurf.build_mesh(minsurf.legendre_config(2)).to_obj()
