import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pot.mediant import (
    InstanceError,
    MediantInstance,
    fuzz,
    mediant_order_check,
    prefix_ratios,
    weighted_mediant_gap,
)


def test_single_term():
    lhs, rhs, ok = weighted_mediant_gap(MediantInstance([3], [2], [5]))
    assert lhs == rhs == 1.5 and ok


def test_proportional_vectors():
    b = np.array([0.3, 1.0, 2.0, 0.5])
    lhs, rhs, ok = weighted_mediant_gap(MediantInstance(0.7 * b, b, [4, 3, 3, 1]))
    assert lhs == pytest.approx(0.7) and rhs == pytest.approx(0.7) and ok


def test_hand_example():
    lhs, rhs, ok = weighted_mediant_gap(MediantInstance([0, 1], [1, 1], [2, 1]))
    assert lhs == pytest.approx(1 / 3) and rhs == 0.0 and ok
    assert prefix_ratios([0, 1], [1, 1]) == [0.0, 0.5]


@pytest.mark.parametrize("a,b,w,field", [
    ([1, 2], [1], [1, 1], "b"),
    ([1, 2], [1, 1], [1], "w"),
    ([-1, 2], [1, 1], [1, 1], "a"),
    ([1, 2], [1, 0], [1, 1], "b"),
    ([1, 2], [1, 1], [1, 2], "w"),
    ([1, 2], [1, 1], [1, 0], "w"),
    ([], [], [], "n"),
])
def test_invariant_violations_name_field(a, b, w, field):
    with pytest.raises(InstanceError) as err:
        MediantInstance(a, b, w)
    assert err.value.field == field


def test_order_check_examples():
    assert mediant_order_check([1, 1], [2, 1], 1)
    assert mediant_order_check([0.2, 5.0, 1.0], [3, 3, 3], 2)
    for s in (0, 3):
        with pytest.raises(ValueError):
            mediant_order_check([1, 1, 1], [3, 2, 1], s)


def test_order_check_random_strict():
    rng = np.random.default_rng(17)
    for _ in range(10**4):
        n = int(rng.integers(2, 10))
        b = 1.0 - rng.random(n)
        w = np.sort(1.0 - rng.random(n))[::-1]
        assert all(mediant_order_check(b, w, s) for s in range(1, n))


def test_adversarial_corners():
    a = [0, 0, 0, 1e-3, 1]
    b = [1e-9, 1, 1e-9, 1, 1e-9]
    w = [5, 5, 5, 5, 1]
    assert weighted_mediant_gap(MediantInstance(a, b, w))[2]
    assert weighted_mediant_gap(MediantInstance([0, 0, 1], [1e-9, 1e-9, 1e-9], [1, 1, 1]))[2]


@given(
    rows=st.lists(st.tuples(st.floats(0, 1), st.floats(1e-6, 1), st.floats(1e-6, 1)), min_size=1, max_size=12),
    lam=st.floats(1e-3, 1e3),
)
def test_scale_invariance(rows, lam):
    a, b, w = map(np.array, zip(*rows))
    w = np.sort(w)[::-1]
    lhs, rhs, ok = weighted_mediant_gap(MediantInstance(a, b, w))
    lhs2, rhs2, ok2 = weighted_mediant_gap(MediantInstance(lam * a, b, w))
    assert ok and ok2
    assert lhs2 == pytest.approx(lam * lhs, rel=1e-9, abs=1e-300)
    assert rhs2 == pytest.approx(lam * rhs, rel=1e-9, abs=1e-300)


def test_fuzz_clean_and_reproducible():
    r1 = fuzz(20_000, 7)
    r2 = fuzz(20_000, 7)
    assert r1.ok and r1.instances == 20_000 and r1.order_checks > 0
    assert r1.order_checks == r2.order_checks


def test_batch_agrees_with_scalar_oracle():
    from pot.mediant import _chunk_rng, batch_gap, random_batch
    n, a, b, w = random_batch(_chunk_rng(3, 0), 200)
    lhs, rhs, _ = batch_gap(a, b, w)
    for r in range(200):
        k = int(n[r])
        l1, r1, _ = weighted_mediant_gap(MediantInstance(a[r, :k], b[r, :k], w[r, :k]))
        assert lhs[r] == pytest.approx(l1, rel=1e-12) and rhs[r] == pytest.approx(r1, rel=1e-12)


def test_to_text_roundtrip_fields():
    text = MediantInstance([0.5], [2.0], [1.0]).to_text()
    assert text.startswith("n=1 ") and "a=0.5" in text and "w=1.0" in text
