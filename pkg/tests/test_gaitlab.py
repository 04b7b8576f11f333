import numpy as np
import pytest

from swim3d.gaitlab import (
    CoordinateSeries,
    FieldSlice,
    Gait,
    Harmonic,
    RetracedPath,
    SliceSpec,
    curvature_of_field,
    curvature_slice,
    eval_gait,
    sample_field,
)
from swim3d.model import DragParams

PAR = DragParams()


class TestEvalGait:
    def test_zero_coefficients(self):
        gait = Gait(period=2.0, theta1=CoordinateSeries(0.7), phi2=CoordinateSeries(-0.3))
        shape, sdot = eval_gait(gait, 0.37)
        assert shape.theta1 == pytest.approx(0.7)
        assert shape.phi2 == pytest.approx(-0.3)
        assert np.allclose(sdot.as_array(), 0.0)

    def test_single_sine_harmonic(self):
        # theta1 = a sin(2 pi t / T) is cos with phase -pi/2
        a, T = 0.4, 2.0
        gait = Gait(
            period=T, theta1=CoordinateSeries(0.1, (Harmonic(1, a, -np.pi / 2),))
        )
        shape, sdot = eval_gait(gait, 0.0)
        assert shape.theta1 == pytest.approx(0.1)
        assert sdot.dtheta1 == pytest.approx(2 * np.pi * a / T)

    def test_periodicity_exact(self):
        gait = Gait(
            period=1.0,
            theta1=CoordinateSeries(0.2, (Harmonic(1, 0.3, 0.4), Harmonic(3, 0.1, 1.2))),
            phi1=CoordinateSeries(0.5, (Harmonic(2, 0.2, -0.7),)),
        )
        # dyadic times: t + T is exactly representable, so mod-T reduction
        # makes the evaluation bitwise periodic
        for t in (0.0, 0.125, 0.25, 0.625):
            s0, v0 = eval_gait(gait, t)
            s1, v1 = eval_gait(gait, t + 1.0)
            assert s0 == s1
            assert v0 == v1
        # generic times: periodic to roundoff
        for t in (0.3, 0.77):
            s0, _ = eval_gait(gait, t)
            s1, _ = eval_gait(gait, t + 1.0)
            assert np.max(np.abs(s0.as_array() - s1.as_array())) < 1e-12

    def test_derivative_matches_finite_differences(self):
        gait = Gait(
            period=3.0,
            theta1=CoordinateSeries(0.2, (Harmonic(1, 0.3, 0.4), Harmonic(4, 0.15, 2.0))),
            phi2=CoordinateSeries(-0.1, (Harmonic(2, 0.25, -1.1),)),
        )
        eps = 1e-6 * gait.period
        for t in np.linspace(0.0, 3.0, 17):
            _, sdot = eval_gait(gait, t)
            sp, _ = eval_gait(gait, t + eps)
            sm, _ = eval_gait(gait, t - eps)
            fd = (sp.as_array() - sm.as_array()) / (2 * eps)
            assert np.max(np.abs(sdot.as_array() - fd)) < 1e-8

    def test_retraced_path_revisits_shapes(self):
        base = Gait(period=1.0, theta1=CoordinateSeries(0.0, (Harmonic(1, 0.5, 0.3),)))
        path = RetracedPath(base)
        for t in (0.1, 0.23, 0.4):
            s_fwd, _ = path(t)
            s_bwd, _ = path(1.0 - t)
            assert np.allclose(s_fwd.as_array(), s_bwd.as_array(), atol=1e-12)


class TestSampleField:
    def spec(self, n=2):
        return SliceSpec(
            coords=("theta1", "theta2"),
            ranges=((-0.5, 0.5), (-0.5, 0.5)),
            counts=(n, n),
            fixed={"phi1": 0.3, "phi2": 0.3},
        )

    def test_output_shape(self):
        fs = sample_field(self.spec(), PAR)
        assert fs.connection.shape == (2, 2, 6, 4)
        assert fs.condition.shape == (2, 2)
        assert not fs.singular.any()

    def test_singular_node_flagged(self):
        spec = SliceSpec(
            coords=("theta1", "theta2"),
            ranges=((-0.2, 0.2), (-0.2, 0.2)),
            counts=(3, 3),
            fixed={"phi1": 0.0, "phi2": 0.0},
        )
        fs = sample_field(spec, PAR)
        assert fs.singular[1, 1]
        assert np.all(np.isnan(fs.connection[1, 1]))
        assert fs.singular.sum() == 1

    def test_determinism(self):
        a = sample_field(self.spec(9), PAR)
        b = sample_field(self.spec(9), PAR)
        assert np.array_equal(a.connection, b.connection)
        assert np.array_equal(a.condition, b.condition)

    def test_swap_equivariance_on_grid(self):
        # field at (t1, t2) with phi fixed at +c relates to the field at
        # (t2, t1) with phi fixed at -c through the pi-z conjugation
        S = np.diag([-1.0, -1.0, 1.0])
        AdS = np.zeros((6, 6))
        AdS[:3, :3] = S
        AdS[3:, 3:] = S
        P = np.zeros((4, 4))
        P[0, 2] = P[2, 0] = 1.0
        P[1, 3] = P[3, 1] = -1.0
        fs = sample_field(self.spec(5), PAR)
        spec_neg = SliceSpec(
            coords=("theta1", "theta2"),
            ranges=((-0.5, 0.5), (-0.5, 0.5)),
            counts=(5, 5),
            fixed={"phi1": -0.3, "phi2": -0.3},
        )
        fs_neg = sample_field(spec_neg, PAR)
        for i in range(5):
            for j in range(5):
                lhs = fs_neg.connection[j, i] @ P
                rhs = AdS @ fs.connection[i, j]
                assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            SliceSpec(("theta1", "theta1"), ((-1, 1), (-1, 1)), (3, 3), {"phi1": 0, "phi2": 0})
        with pytest.raises(ValueError):
            SliceSpec(("theta1", "theta2"), ((-1, 1), (-1, 1)), (1, 3), {"phi1": 0, "phi2": 0})
        with pytest.raises(ValueError):
            SliceSpec(("theta1", "theta2"), ((-1, 1), (-1, 1)), (3, 3), {"phi1": 0})


def synthetic_field(spec, values_fn):
    """FieldSlice built from an analytic connection function for testing."""
    a0, a1 = spec.axes()
    conn = np.zeros((len(a0), len(a1), 6, 4))
    for i, a in enumerate(a0):
        for j, b in enumerate(a1):
            conn[i, j] = values_fn(a, b)
    return FieldSlice(
        spec=spec,
        connection=conn,
        condition=np.ones((len(a0), len(a1))),
        singular=np.zeros((len(a0), len(a1)), dtype=bool),
    )


class TestCurvature:
    def spec(self, n=21):
        return SliceSpec(
            coords=("theta1", "theta2"),
            ranges=((-1.0, 1.0), (-1.0, 1.0)),
            counts=(n, n),
            fixed={"phi1": 0.3, "phi2": 0.3},
        )

    def test_constant_field_zero_curvature(self):
        fs = synthetic_field(self.spec(), lambda a, b: np.arange(24.0).reshape(6, 4))
        assert np.allclose(curvature_of_field(fs, 1), 0.0)

    def test_analytic_curl(self):
        # row 1 components (-b, a) in the active coordinates: curl = 2
        def values(a, b):
            m = np.zeros((6, 4))
            m[0, 0] = -b
            m[0, 2] = a
            return m

        fs = synthetic_field(self.spec(), values)
        assert np.allclose(curvature_of_field(fs, 1), 2.0)

    def test_stokes_on_sampled_field(self):
        spec = self.spec(41)
        fs = sample_field(spec, PAR)
        curv = curvature_of_field(fs, 1)
        a0, a1 = spec.axes()
        h = a0[1] - a0[0]
        i0, i1 = 10, 30  # subrectangle [-0.5, 0.5]^2
        w = np.ones(i1 - i0 + 1)
        w[0] = w[-1] = 0.5
        area = (w[:, None] * w[None, :] * curv[i0 : i1 + 1, i0 : i1 + 1]).sum() * h * h
        A1a = fs.connection[:, :, 0, 0]
        A1b = fs.connection[:, :, 0, 2]

        def line(vals):
            return (vals[:-1] + vals[1:]).sum() * h / 2

        boundary = (
            line(A1a[i0 : i1 + 1, i0])
            + line(A1b[i1, i0 : i1 + 1])
            - line(A1a[i0 : i1 + 1, i1])
            - line(A1b[i0, i0 : i1 + 1])
        )
        assert area == pytest.approx(boundary, rel=0.05)

    def test_curvature_requires_3x3(self):
        with pytest.raises(ValueError):
            curvature_slice(
                SliceSpec(
                    ("theta1", "theta2"),
                    ((-1, 1), (-1, 1)),
                    (2, 2),
                    {"phi1": 0.3, "phi2": 0.3},
                ),
                PAR,
                1,
            )

    def test_singular_nodes_poison_neighbours(self):
        spec = SliceSpec(
            coords=("theta1", "theta2"),
            ranges=((-0.2, 0.2), (-0.2, 0.2)),
            counts=(5, 5),
            fixed={"phi1": 0.0, "phi2": 0.0},
        )
        curv = curvature_slice(spec, PAR, 1)
        assert np.isnan(curv[2, 2])
        assert np.isnan(curv[1, 2]) and np.isnan(curv[3, 2])
        assert np.isnan(curv[2, 1]) and np.isnan(curv[2, 3])
        assert np.isfinite(curv[0, 0])
