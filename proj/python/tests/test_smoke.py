import math
import pathlib

import numpy as np
import pytest

import bridgegen

ROOT = pathlib.Path(__file__).resolve().parents[2]
SAMPLES = ROOT / "samples"
DATA = ROOT / "tests" / "data"


def sample(name):
    return (SAMPLES / name).read_text()


def test_generate_sigmoid():
    text = bridgegen.generate(sample("sigmoid.fir"))
    assert "func.func @sigmoid(%arg0: f32) -> f32" in text
    assert text.count("arith.constant") == 1
    assert "math.exp" in text


def test_run_sigmoid_matches_libm():
    (y,) = bridgegen.run(sample("sigmoid.fir"), [2.0])
    assert y == pytest.approx(1 / (1 + math.exp(-2)), abs=1e-6)


def test_run_max_and_string_inputs():
    src = sample("max.fir")
    assert bridgegen.run(src, [3, 9]) == [9]
    assert bridgegen.run(src, ["12", "-4"]) == [12]


def test_lower_inlines_chain():
    lowered = bridgegen.lower(sample("chain.fir"))
    assert "invoke abs_diff" not in lowered


def test_kernel_launch():
    a = np.arange(1, 9, dtype=np.float32)
    b = 10 * a
    c = np.zeros(8, dtype=np.float32)
    _, _, out = bridgegen.run(sample("vadd.fir"), [a, b, c], launch=(2, 1, 1, 4, 1, 1))
    np.testing.assert_array_equal(out, a + b)
    _, _, rev = bridgegen.run(sample("vadd.fir"), [a, b, c], launch=(2, 1, 1, 4, 1, 1), reverse_threads=True)
    np.testing.assert_array_equal(rev, out)


def test_einsum_against_numpy():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 4))
    b = rng.standard_normal((4, 5))
    got = bridgegen.einsum("(i,k),(k,j)->(i,j)", a, b)
    np.testing.assert_allclose(got, a @ b, rtol=1e-12)
    x = rng.standard_normal((2, 3)).astype(np.float32)
    total = bridgegen.einsum("(i,j)->()", x)
    assert float(total) == pytest.approx(float(x.sum()), rel=1e-5)


def test_einsum_module_text():
    text = bridgegen.einsum_module("(i,k),(k,j)->(i,j)", shapes=[[4, 3], [3, 5]])
    assert "linalg.generic" in text
    assert '"parallel", "parallel", "reduction"' in text


def test_verify():
    assert bridgegen.verify((DATA / "wellformed.json").read_text()) == []
    bad = sorted((DATA / "malformed").glob("*.json"))
    assert bad
    for path in bad:
        assert bridgegen.verify(path.read_text()), path.name


def test_pipeline_error_carries_stage():
    with pytest.raises(bridgegen.PipelineError) as info:
        bridgegen.generate("fn f(_x: i64)\n1:\n  return %7\n")
    assert info.value.stage in {"parse", "validate"}
    assert isinstance(info.value, bridgegen.BridgegenError)


def test_einsum_shape_errors():
    with pytest.raises(bridgegen.BridgegenError):
        bridgegen.einsum("(i,k),(k,j)->(i,j)", np.ones((2, 3)), np.ones((4, 5)))
