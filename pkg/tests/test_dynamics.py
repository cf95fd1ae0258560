import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from signless.dynamics import (
    PotentialParams,
    breathing_mode_check,
    energy,
    gradient,
    hamiltonian,
    principal_window,
    quadratic_energy,
    random_unit_state,
    simulate,
    stability_diagram,
    stable_by_condition,
    system_spectrum,
)
from signless.errors import DegenerateWindowError, InvalidParameterError
from signless.graph import Graph, barabasi_albert, complete, cycle, path, star
from signless.spectral import decompose_graph

from conftest import graphs, random_graph


def test_params_require_positive_b():
    with pytest.raises(InvalidParameterError):
        PotentialParams(1.0, 0.0)
    PotentialParams(5.0, 0.1)  # a is unrestricted


def test_energy_examples():
    p = PotentialParams(0.0, 1.0)
    assert energy(path(2), p, [0, 0]) == 0
    assert energy(path(2), p, [1, -1]) == 0
    # two ordered pairs, each b/2 * (1+1)^2
    assert energy(path(2), p, [1, 1]) == pytest.approx(4)
    assert quadratic_energy(path(2), p, [1, 1]) == pytest.approx(4)


def test_energy_dimension_mismatch():
    with pytest.raises(InvalidParameterError):
        energy(path(3), PotentialParams(0, 1), [1, 2])
    with pytest.raises(InvalidParameterError):
        gradient(path(3), PotentialParams(0, 1), [1, 2])


def test_gradient_examples():
    p = PotentialParams(0.0, 1.0)
    np.testing.assert_array_equal(gradient(path(2), p, [0, 0]), [0, 0])
    np.testing.assert_allclose(gradient(path(2), p, [1, 1]), [4, 4])


@settings(max_examples=100, deadline=None)
@given(graphs(), st.floats(-5, 5), st.floats(0.01, 5), st.integers(0, 2**32 - 1))
def test_energy_identity(g, a, b, seed):
    p = PotentialParams(a, b)
    x = np.random.default_rng(seed).standard_normal(g.n)
    lhs, rhs = energy(g, p, x), quadratic_energy(g, p, x)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_gradient_central_difference(rng):
    g = barabasi_albert(20, 3, 1)
    p = PotentialParams(-0.7, 1.3)
    x = rng.standard_normal(g.n)
    grad = gradient(g, p, x)
    h = 1e-4
    E = np.eye(g.n)
    fd = np.array([(energy(g, p, x + h * E[i]) - energy(g, p, x - h * E[i])) / (2 * h) for i in range(g.n)])
    np.testing.assert_allclose(fd, grad, atol=1e-6)


def test_system_spectrum_examples():
    dec = decompose_graph(star(4))
    sp = system_spectrum(dec, PotentialParams(-1.0, 2.0))
    assert sp.lambdas[0] == pytest.approx(1.0)
    assert sp.stability == "unstable"

    sp = system_spectrum(decompose_graph(complete(3)), PotentialParams(0.0, 1.0))
    assert sp.lambdas[-1] == pytest.approx(-4 * (3 - 1))

    dec = decompose_graph(complete(4))
    sp = system_spectrum(dec, PotentialParams(-3.0, 1.0))
    assert sp.lambdas[0] == pytest.approx(-1.0)
    assert sp.stability == "stable"
    H = hamiltonian(complete(4), PotentialParams(-3.0, 1.0))
    assert -np.linalg.eigvalsh(H).min() == pytest.approx(-1.0)


def test_marginal_class():
    dec = decompose_graph(cycle(4))
    assert system_spectrum(dec, PotentialParams(0.0, 1.0)).stability == "marginal"


def test_modes_align_with_lambdas(rng):
    g = random_graph(rng, 12, 0.4)
    p = PotentialParams(-0.5, 0.8)
    sp = system_spectrum(decompose_graph(g), p)
    H = hamiltonian(g, p)
    np.testing.assert_allclose(-H @ sp.modes, sp.modes * sp.lambdas, atol=1e-9)


def test_principal_window_examples():
    lo, hi = principal_window(decompose_graph(star(5)), 1.0)
    assert (lo, hi) == pytest.approx((-2.0, 0.0), abs=1e-12)
    sp = system_spectrum(decompose_graph(star(5)), PotentialParams(-1.0, 1.0))
    assert sp.lambdas[0] == pytest.approx(1.0)
    assert sp.lambdas[1] == pytest.approx(-1.0)
    H = hamiltonian(star(5), PotentialParams(-1.0, 1.0))
    np.testing.assert_allclose(np.sort(-np.linalg.eigvalsh(H))[::-1][:2], [1, -1], atol=1e-12)


def test_principal_window_errors():
    with pytest.raises(DegenerateWindowError):
        principal_window(decompose_graph(complete(4)), 1.0)
    with pytest.raises(DegenerateWindowError):
        principal_window(decompose_graph(cycle(5)), 1.0)
    with pytest.raises(InvalidParameterError):
        principal_window(decompose_graph(Graph(1, frozenset())), 1.0)
    with pytest.raises(InvalidParameterError):
        principal_window(decompose_graph(star(5)), -1.0)


def test_window_sign_pattern(rng):
    for _ in range(20):
        g = barabasi_albert(30, 2, int(rng.integers(1 << 30)))
        dec = decompose_graph(g)
        b = float(rng.uniform(0.1, 3))
        lo, hi = principal_window(dec, b)
        inside = system_spectrum(dec, PotentialParams(lo + (hi - lo) * rng.uniform(0.05, 0.95), b))
        assert inside.lambdas[0] > 0 > inside.lambdas[1]
        above = system_spectrum(dec, PotentialParams(hi + 0.1, b))
        assert above.lambdas[0] < 0
        below = system_spectrum(dec, PotentialParams(lo - 0.1, b))
        assert below.lambdas[1] > 0


def test_stability_diagram_examples():
    data = stability_diagram(decompose_graph(cycle(8)), (0.0, 2.0), samples=5)
    expected = sorted({2 + 2 * math.cos(2 * math.pi * i / 8) for i in range(5)}, reverse=True)
    np.testing.assert_allclose(data.q, expected, atol=1e-9)
    np.testing.assert_allclose(data.slopes, -2 * data.q)
    assert np.all(np.diff(data.slopes) > 0)
    np.testing.assert_allclose(data.a[:, -1], -4 * data.q)

    assert len(stability_diagram(decompose_graph(complete(4))).q) == 2
    single = stability_diagram(decompose_graph(Graph(1, frozenset())))
    assert single.q.tolist() == [0.0] and np.all(single.a == 0)


def test_stability_diagram_csv():
    data = stability_diagram(decompose_graph(complete(4)), (0, 1), samples=3)
    lines = data.lines_csv().splitlines()
    assert lines[0] == "q,slope" and len(lines) == 3
    poly = data.polyline_csv().splitlines()
    assert poly[0] == "q,b,a" and len(poly) == 1 + 2 * 3


def test_simulate_rejects_zero_and_bad_steps():
    p = PotentialParams(-1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        simulate(star(5), p, x0=np.zeros(5))
    with pytest.raises(InvalidParameterError):
        simulate(star(5), p, t_max=0)
    with pytest.raises(InvalidParameterError):
        simulate(star(5), p, method="rk4", dt=0.1)  # dt * 9 > 0.1
    with pytest.raises(InvalidParameterError):
        simulate(star(5), p, method="euler")


def test_simulate_from_principal_eigenspace_stays_there():
    dec = decompose_graph(star(5))
    x0 = dec.vector(dec.n - 1) * 3.0
    traj = simulate(star(5), PotentialParams(-1.0, 1.0), x0=x0, t_max=5, dt=0.1, dec=dec)
    assert np.all(traj.dist_to_E1 < 1e-12)


def test_simulate_from_other_eigenspace_decays_along_it():
    g = star(5)
    dec = decompose_graph(g)
    x0 = dec.vector(0)  # q_1 mode, lambda_n < 0 for a = -1, b = 1
    traj = simulate(g, PotentialParams(-1.0, 1.0), x0=x0, t_max=2, dt=0.1, dec=dec)
    dirs = traj.directions()
    np.testing.assert_allclose(np.abs(dirs @ x0), 1, atol=1e-12)
    assert np.all(np.diff(np.linalg.norm(traj.states, axis=1)) < 0)


def test_simulate_convergence_rate():
    g = star(5)
    traj = simulate(g, PotentialParams(-1.0, 1.0), t_max=10, dt=0.05, seed=3)
    dec = decompose_graph(g)
    c = np.abs(dec.eigenvectors.T @ traj.states[0])
    const = np.linalg.norm(c[:-1]) / c[-1]
    bound = const * np.exp(-2 * traj.t) * (1 + 1e-9)
    assert np.all(traj.dist_to_E1 <= bound + 1e-15)
    assert traj.dist_to_E1[-1] < 1e-6


def test_simulate_monotone_after_transient(rng):
    for _ in range(5):
        g = barabasi_albert(25, 2, int(rng.integers(1 << 30)))
        dec = decompose_graph(g)
        lo, hi = principal_window(dec, 1.0)
        x0 = random_unit_state(g.n, int(rng.integers(1 << 30)))
        assert abs(dec.vector(g.n - 1) @ x0) > 1e-12
        t_max = 40 / (hi - lo)
        traj = simulate(g, PotentialParams((lo + hi) / 2, 1.0), x0=x0, t_max=t_max, dt=t_max / 400, dec=dec)
        d = traj.dist_to_E1
        assert d[-1] < d[0] and d[-1] < 1e-6
        tail = d[len(d) // 4:]
        assert np.all(np.diff(tail) <= 1e-12)


def test_rk4_matches_exact_modal(rng):
    g = random_graph(rng, 10, 0.4)
    dec = decompose_graph(g)
    p = PotentialParams(-0.3, 0.5)
    lam_max = np.abs(system_spectrum(dec, p).lambdas).max()
    dt = 0.01 / lam_max
    a = simulate(g, p, t_max=2.0, dt=dt, method="exact_modal", dec=dec, seed=5)
    b = simulate(g, p, t_max=2.0, dt=dt, method="rk4", dec=dec, seed=5)
    np.testing.assert_allclose(a.t, b.t)
    assert np.max(np.abs(a.directions() - b.directions())) < 1e-6


def test_overflow_truncates():
    g = complete(5)
    traj = simulate(g, PotentialParams(-1000.0, 1.0), t_max=1.0, dt=0.01)
    assert traj.truncated
    assert np.all(np.isfinite(traj.states))
    assert np.linalg.norm(traj.final_state) <= 1e100
    assert len(traj.t) == len(traj.states) == len(traj.dist_to_E1) < 101


def test_trajectory_csv_header():
    traj = simulate(path(3), PotentialParams(-0.5, 1.0), t_max=0.1, dt=0.05)
    lines = traj.to_csv().splitlines()
    assert lines[0] == "t,x_0,x_1,x_2,dist_E1"
    assert len(lines) == 1 + 3
    assert np.all(np.diff(traj.t) > 0)


def test_breathing_mode_examples():
    assert breathing_mode_check(decompose_graph(complete(10)))
    assert not breathing_mode_check(decompose_graph(cycle(4)), which="lambda_1")
    assert breathing_mode_check(decompose_graph(Graph(1, frozenset())))
    # the path's principal mode alternates in sign, it is not a breathing mode
    assert not breathing_mode_check(decompose_graph(path(6)), which="lambda_1")
    with pytest.raises(InvalidParameterError):
        breathing_mode_check(decompose_graph(path(3)), which="middle")


def test_stability_condition_equivalence(rng):
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(2, 15)), rng.random())
        dec = decompose_graph(g)
        p = PotentialParams(float(rng.uniform(-10, 5)), float(rng.uniform(0.05, 3)))
        sp = system_spectrum(dec, p)
        assert stable_by_condition(dec.eigenvalues[-1], p) == (sp.lambdas[0] < 0)
