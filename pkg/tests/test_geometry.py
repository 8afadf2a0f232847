import sympy as sp
import pytest

from geolin3.cas import RationalFunction as RF, extensions, var
from geolin3.geometry import (
    Connection,
    GeodesicSystem2,
    Metric,
    RiemannTensor,
    SingularMetricError,
    check_bianchi2,
    christoffel,
    covariant_hessian,
    is_flat,
    lower,
    metric_residuals,
    riemann,
)
import oracles

x, y = var("x"), var("y")
EX3 = GeodesicSystem2(0, 0, -x / y**2, 0, -1 / x, 1 / y)
EX2 = GeodesicSystem2(0, 0, x, 0, -1 / x, 0)
EQ46 = ((y**2 + 1 / y**2) / 2, (x * y - x / y**3) / 2, (x**2 + x**2 / y**4) / 2)


def test_identity_metric_has_zero_connection():
    conn = christoffel(Metric.from_pqr(1, 0, 1))
    assert all(v.is_zero() for plane in conn.gamma for row in plane for v in row)


def test_polar_metric_connection():
    G = christoffel(Metric.from_pqr(1, 0, x**2)).gamma
    assert G[0][1][1] == -x
    assert G[1][0][1] == G[1][1][0] == 1 / x
    assert G[0][0][0].is_zero() and G[1][1][1].is_zero()
    assert is_flat(christoffel(Metric.from_pqr(1, 0, x**2)))


def test_eq46_metric_reproduces_example3_gauge():
    conn = christoffel(Metric.from_pqr(*EQ46))
    assert GeodesicSystem2.from_connection(conn) == EX3


def test_connection_matches_sympy_oracle():
    p, q, r = (x**2 + y, x / y, 1 + y**2)
    conn = christoffel(Metric.from_pqr(p, q, r))
    ref = oracles.christoffel(sp.Matrix([[oracles.x**2 + oracles.y, oracles.x / oracles.y],
                                         [oracles.x / oracles.y, 1 + oracles.y**2]]),
                              (oracles.x, oracles.y))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                assert oracles.is_zero(oracles.to_sympy(conn.gamma[i][j][k]) - ref[i][j][k])


def test_non_flat_fixture():
    metric = Metric.from_pqr(1, 0, x**3)
    conn = christoffel(metric)
    R = riemann(conn)
    assert R.mixed[0][1][0][1] == -3 * x / 4
    cov = lower(R, metric).covariant
    assert cov[0][1][0][1] == -3 * x / 4
    assert check_bianchi2(R, conn)
    assert not is_flat(conn)


def test_zero_connection_and_tensor():
    conn = Connection.zero(2)
    R = riemann(conn)
    assert R.is_zero()
    assert check_bianchi2(R, conn)
    assert lower(R, Metric.from_pqr(1, 0, 1)).is_zero()


def test_flat_example3_lowered_tensor_vanishes():
    metric = Metric.from_pqr(*EQ46)
    R = lower(riemann(christoffel(metric)), metric)
    assert all(v.is_zero() for v in oracles_flatten(R.covariant))


def oracles_flatten(a):
    if isinstance(a, tuple):
        for v in a:
            yield from oracles_flatten(v)
    else:
        yield a


def test_corrupted_tensor_fails_bianchi():
    # in two dimensions the cyclic sum always repeats an index, so corrupt in three
    z = var("z")
    conn = christoffel(Metric(((1, 0, 0), (0, x**2, 0), (0, 0, x**2 * y**2))))
    R = riemann(conn)
    assert check_bianchi2(R, conn)
    mixed = [[[list(row) for row in plane] for plane in block] for block in R.mixed]
    mixed[0][1][0][1] = mixed[0][1][0][1] + z
    mixed[0][1][1][0] = -mixed[0][1][0][1]
    corrupted = RiemannTensor(tuple(tuple(tuple(tuple(r) for r in p) for p in b) for b in mixed))
    assert not check_bianchi2(corrupted, conn)


def test_singular_metric_rejected():
    with pytest.raises(SingularMetricError):
        christoffel(Metric.from_pqr(1, x, x**2))


def test_metric_residuals_examples():
    assert all(r.is_zero() for r in metric_residuals(EX3, *EQ46))
    assert all(r.is_zero() for r in metric_residuals(GeodesicSystem2.zero(), 1, 0, 1))
    assert all(r.is_zero() for r in metric_residuals(EX2, 1, 0, x**2))
    assert not all(r.is_zero() for r in metric_residuals(EX2, 1, 0, x**3))


def test_covariant_hessian_examples():
    conn = EX3.connection()
    assert all(h.is_zero() for h in covariant_hessian(conn, x * y))
    assert all(h.is_zero() for h in covariant_hessian(conn, x / y))
    assert not all(h.is_zero() for h in covariant_hessian(conn, x))


def test_covariant_hessian_with_trig_symbols():
    extensions.declare("s", {"x": 0, "y": var("c")})
    extensions.declare("c", {"x": 0, "y": -var("s")})
    extensions.declare_relation(var("s") ** 2 + var("c") ** 2, 1)
    conn = EX2.connection()
    for u in (x * var("c"), x * var("s")):
        assert all(h.is_zero() for h in covariant_hessian(conn, u))


def test_three_dimensional_metric_is_supported():
    metric = Metric(((1, 0, 0), (0, x**2, 0), (0, 0, x**2 * y**2)))
    conn = christoffel(metric)
    R = riemann(conn)
    assert check_bianchi2(R, conn)
    assert not R.is_zero()
    assert conn.gamma[2][0][2] == 1 / x


def test_curvature_oracle_agrees_on_non_flat_fixture():
    G = oracles.christoffel(sp.Matrix([[1, 0], [0, oracles.x**3]]), (oracles.x, oracles.y))
    R = oracles.riemann(G, (oracles.x, oracles.y))
    assert sp.simplify(R[0, 1, 0, 1] + sp.Rational(3, 4) * oracles.x) == 0
