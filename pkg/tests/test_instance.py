import numpy as np
import pytest

from hpmp.errors import InstanceParseError, InvalidInstanceError
from hpmp.instance import (
    check_triangle_inequality,
    dumps_instance,
    from_matrix,
    from_points,
    generate_euclidean,
    load_instance,
    loads_instance,
    max_triangle_violation,
    save_instance,
)


class TestGenerate:
    def test_structure(self):
        inst = generate_euclidean(3, seed=7, box=100)
        assert inst.n == 3
        assert np.all((inst.coords >= 0) & (inst.coords <= 100))
        assert np.array_equal(inst.weights, inst.weights.T)
        assert np.all(np.diag(inst.weights) == 0)

    def test_three_four_five(self):
        inst = from_points([(0, 0), (3, 4), (10, 10)])
        assert inst.w(0, 1) == 5.0

    def test_reproducible(self):
        a = generate_euclidean(50, seed=3)
        b = generate_euclidean(50, seed=3)
        assert np.array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, generate_euclidean(50, seed=4).weights)

    def test_box_scales(self):
        inst = generate_euclidean(200, seed=1, box=2.5)
        assert inst.coords.max() <= 2.5

    def test_exact_distances(self):
        inst = generate_euclidean(30, seed=11)
        c = inst.coords
        for i in range(30):
            for j in range(30):
                ref = float(np.hypot(*(c[i] - c[j])))
                assert inst.weights[i, j] == pytest.approx(ref, rel=1e-12, abs=0)

    def test_rejects_small_n(self):
        with pytest.raises(InvalidInstanceError):
            generate_euclidean(2, seed=1)

    @pytest.mark.parametrize("seed", range(100))
    def test_metric(self, seed):
        assert check_triangle_inequality(generate_euclidean(25, seed), eps=1e-9)

    def test_metric_n100(self):
        assert check_triangle_inequality(generate_euclidean(100, 1), eps=1e-9)


class TestTriangle:
    def test_violation(self):
        w = np.array([[0, 1, 10], [1, 0, 1], [10, 1, 0]], dtype=float)
        assert not check_triangle_inequality(from_matrix(w), eps=1e-9)
        assert max_triangle_violation(from_matrix(w)) == pytest.approx(8.0)

    def test_all_ones(self):
        w = np.ones((6, 6)) - np.eye(6)
        assert check_triangle_inequality(from_matrix(w), eps=1e-9)


class TestValidation:
    def test_asymmetric(self):
        w = np.array([[0, 1, 2], [1, 0, 3], [2, 4, 0]], dtype=float)
        with pytest.raises(InvalidInstanceError):
            from_matrix(w)

    def test_negative(self):
        w = -(np.ones((3, 3)) - np.eye(3))
        with pytest.raises(InvalidInstanceError):
            from_matrix(w)

    def test_immutable(self):
        inst = generate_euclidean(5, 1)
        with pytest.raises(ValueError):
            inst.weights[0, 1] = 3.0


class TestFileFormat:
    def test_round_trip_coords(self, tmp_path):
        inst = generate_euclidean(10, seed=5)
        path = tmp_path / "a.hpmp"
        save_instance(inst, path)
        back = load_instance(path)
        assert back == inst
        assert np.array_equal(back.coords, inst.coords)
        assert np.array_equal(back.weights, inst.weights)

    def test_round_trip_matrix(self, tmp_path):
        w = generate_euclidean(7, seed=2).weights
        inst = from_matrix(w, name="m7")
        path = tmp_path / "m.hpmp"
        save_instance(inst, path)
        back = load_instance(path)
        assert back == inst and back.coords is None

    def test_layout(self):
        text = dumps_instance(from_points([(0, 0), (3, 4), (6, 0)], name="tri"))
        assert text.splitlines() == [
            "HPMP-INSTANCE 1", "NAME tri", "N 3", "COORDS",
            "0.0 0.0", "3.0 4.0", "6.0 0.0", "END",
        ]

    def test_missing_coordinate_line(self):
        text = "HPMP-INSTANCE 1\nNAME x\nN 5\nCOORDS\n" + "1 2\n" * 4 + "END\n"
        with pytest.raises(InstanceParseError, match="line 9"):
            loads_instance(text)

    def test_asymmetric_matrix(self):
        text = "HPMP-INSTANCE 1\nNAME x\nN 3\nMATRIX\n0 1 2\n1 0 3\n2 4 0\nEND\n"
        with pytest.raises(InstanceParseError, match="line 7"):
            loads_instance(text)

    @pytest.mark.parametrize("text, lineno", [
        ("HPMP-INSTANCE 2\n", 1),
        ("HPMP-INSTANCE 1\nNAM x\n", 2),
        ("HPMP-INSTANCE 1\nNAME x\nN three\n", 3),
        ("HPMP-INSTANCE 1\nNAME x\nN 3\nPOINTS\n", 4),
        ("HPMP-INSTANCE 1\nNAME x\nN 3\nCOORDS\n1 2\n1 2 3\n", 6),
        ("HPMP-INSTANCE 1\nNAME x\nN 3\nCOORDS\n1 2\n3 4\n5 x\nEND\n", 7),
        ("HPMP-INSTANCE 1\nNAME x\nN 3\nCOORDS\n1 2\n3 4\n5 6\n", 8),
    ])
    def test_malformed(self, text, lineno):
        with pytest.raises(InstanceParseError) as err:
            loads_instance(text)
        assert err.value.lineno == lineno

    def test_trailing_garbage(self):
        text = dumps_instance(generate_euclidean(4, 1)) + "junk\n"
        with pytest.raises(InstanceParseError, match="after END"):
            loads_instance(text)

    def test_extra_data_lines(self):
        text = "HPMP-INSTANCE 1\nNAME x\nN 3\nCOORDS\n" + "1 2\n" * 4 + "END\n"
        with pytest.raises(InstanceParseError, match="more than 3"):
            loads_instance(text)
