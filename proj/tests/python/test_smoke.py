import math

import pytest

import spherevol as sv


def test_canonical_volumes_match_the_bound():
    assert sv.volume(sv.AngleField.canonical(1))["value"] == pytest.approx(2 * math.pi**2, rel=1e-9)
    for k in range(2, 5):
        v = sv.volume(sv.AngleField.canonical(k))["value"]
        assert v == pytest.approx(sv.lower_bound(k), rel=1e-6)


def test_indices_and_mirror():
    f = sv.AngleField.canonical(4)
    assert sv.poincare_indices(f) == (4, -2)
    assert sv.poincare_indices(f.mirrored()) == (-2, 4)


def test_python_callable_field():
    f = sv.AngleField.from_callable(lambda a, b: 2.0 * b + 0.1 * math.sin(a), 2)
    report = sv.verify_bound(f)
    assert report["k"] == 3
    assert not report["violation"]
    assert report["margin"] > 0.0


def test_ellipse_routes_agree():
    for k in range(1, 13):
        assert abs(sv.ellipse_length(k) - sv.ellipse_length_agm(k)) < 1e-10


def test_chain_audit():
    assert sv.audit_chain(sv.AngleField.canonical(3), 3)["all_equal"]
    assert sv.audit_chain(sv.AngleField.canonical(1), 1)["first_violation"] == 3


def test_klein_bottle_mesh(tmp_path):
    mesh = sv.graph_surface_mesh(4, 32, 128)
    topo = mesh.topology()
    assert topo["euler"] == 0 and not topo["orientable"] and topo["closed"]
    assert mesh.area() == pytest.approx(sv.lower_bound(4), rel=5e-3)
    path = tmp_path / "m.off"
    mesh.write_off(str(path))
    assert path.read_text().startswith("nOFF")


def test_minimality_and_checks():
    assert sv.sup_mean_curvature(sv.AngleField.canonical(2, 0.0), 10, 20) < 1e-8
    assert sv.ruled_decomposition_check(4, 500)["passed"]
    assert not sv.ruled_decomposition_check(3, 500)["passed"]
    assert sv.immersion_rank_check(2, 500)["passed"]


def test_optimize_descends():
    r = sv.optimize(3, n_alpha=8, n_beta=16, seed=3)
    trace = r["trace"]
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert trace[-1] >= r["bound"] - r["tol_disc"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(sv.InvalidArgument):
        sv.graph_surface_mesh(3, 8, 16)
    with pytest.raises(sv.SpherevolError):
        sv.AngleField.canonical(0)
    with pytest.raises(sv.NotConverged):
        sv.volume(sv.AngleField.canonical(3), rel_tol=1e-18)
