import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csrecover.errors import LengthMismatch, MTooLarge
from csrecover.sensing import (
    SampleMask,
    build_dictionary,
    draw_mask,
    mutual_coherence,
    read_mask_csv,
    sample,
    write_mask_csv,
)
from csrecover.signals import BENCHMARK_SIGNAL, MultitoneSpec, dft, generate_multitone, idft
from oracles import direct_multitone


def test_full_mask():
    assert draw_mask(8, 8, 123).indices == tuple(range(8))


def test_mask_deterministic():
    assert draw_mask(512, 30, 99) == draw_mask(512, 30, 99)
    assert draw_mask(512, 30, 99) != draw_mask(512, 30, 100)


def test_mask_range_errors():
    with pytest.raises(MTooLarge):
        draw_mask(8, 9, 0)
    with pytest.raises(MTooLarge):
        draw_mask(8, 0, 0)


def test_mask_inclusion_frequency():
    """Each index is kept with probability M/N; counts must sit within 5 sigma."""
    n, m, draws = 512, 30, 100_000
    counts = np.zeros(n)
    for seed in range(draws):
        counts[list(draw_mask(n, m, seed).indices)] += 1
    p = m / n
    sigma = np.sqrt(draws * p * (1 - p))
    assert np.max(np.abs(counts - draws * p)) < 5 * sigma


def test_sample_full_and_partial():
    x = np.array([1, 2j, 3, 4 - 1j])
    np.testing.assert_array_equal(sample(x, SampleMask(4, range(4))).values, x)
    np.testing.assert_array_equal(sample(x, SampleMask(4, (0, 2))).values, [1, 3])
    with pytest.raises(LengthMismatch):
        sample(x[:3], SampleMask(4, (0, 2)))


def test_sample_five_tone_signal_matches_direct_evaluation(five_tone_x):
    mask = draw_mask(512, 30, 5)
    y = sample(five_tone_x, mask)
    np.testing.assert_allclose(y.values, direct_multitone(BENCHMARK_SIGNAL, mask.indices), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 64), st.data())
def test_sample_equals_selection_matrix(n, data):
    m = data.draw(st.integers(1, n))
    mask = draw_mask(n, m, data.draw(st.integers(0, 2**63 - 1)))
    x = np.random.default_rng(n).standard_normal(n) + 0j
    np.testing.assert_array_equal(sample(x, mask).values, mask.selection_matrix() @ x)


def test_full_mask_dictionary_is_unitary():
    d = build_dictionary(16, SampleMask(16, range(16)), normalize=False)
    np.testing.assert_allclose(d.matrix.conj().T @ d.matrix, np.eye(16), atol=1e-10)


def test_normalized_columns_unit_norm():
    d = build_dictionary(512, draw_mask(512, 30, 1), normalize=True)
    np.testing.assert_allclose(np.linalg.norm(d.matrix, axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(d.column_norms, np.sqrt(30 / 512), rtol=1e-12)


@pytest.mark.parametrize("normalize", [False, True])
def test_dictionary_consistent_with_sampling(five_tone_x, normalize):
    mask = draw_mask(512, 60, 11)
    d = build_dictionary(512, mask, normalize=normalize)
    u = dft(five_tone_x)
    np.testing.assert_allclose(d.matrix @ d.from_unitary(u), sample(five_tone_x, mask).values, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 48), st.data())
def test_factored_chain_equals_dictionary(n, data):
    m = data.draw(st.integers(1, n))
    mask = draw_mask(n, m, data.draw(st.integers(0, 2**32)))
    rng = np.random.default_rng(n * 7 + m)
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    for normalize in (False, True):
        d = build_dictionary(n, mask, normalize=normalize)
        np.testing.assert_allclose(d.matrix @ d.from_unitary(u), sample(idft(u), mask).values, atol=1e-9)


def test_coherence_full_mask_zero():
    assert mutual_coherence(build_dictionary(32, SampleMask(32, range(32)))) < 1e-10


def test_coherence_duplicate_column():
    d = build_dictionary(16, draw_mask(16, 6, 2))
    A = np.concatenate([d.matrix, d.matrix[:, :1]], axis=1)
    assert mutual_coherence(A) == pytest.approx(1.0, abs=1e-12)


def test_coherence_matches_pairwise_loop():
    d = build_dictionary(32, draw_mask(32, 8, 3))
    A = d.matrix
    best = 0.0
    for i in range(32):
        for j in range(32):
            if i != j:
                v = abs(np.vdot(A[:, i], A[:, j])) / (np.linalg.norm(A[:, i]) * np.linalg.norm(A[:, j]))
                best = max(best, v)
    assert mutual_coherence(d) == pytest.approx(best, abs=1e-12)


def test_coherence_permutation_and_scale_invariant():
    d = build_dictionary(32, draw_mask(32, 10, 4))
    rng = np.random.default_rng(0)
    A = d.matrix[:, rng.permutation(32)] * rng.uniform(0.1, 10, 32)
    assert mutual_coherence(A) == pytest.approx(mutual_coherence(d), abs=1e-12)


def test_mask_csv_roundtrip(tmp_path):
    mask = draw_mask(512, 30, 8)
    path = tmp_path / "mask.csv"
    write_mask_csv(path, mask)
    assert path.read_text().count("\n") == 30
    assert read_mask_csv(path, 512) == mask


def test_single_tone_dictionary_column():
    spec = MultitoneSpec(32, [(5, 2.0)])
    mask = draw_mask(32, 9, 0)
    d = build_dictionary(32, mask, normalize=False)
    np.testing.assert_allclose(d.matrix[:, 5] * 2.0 * np.sqrt(32), sample(generate_multitone(spec), mask).values)
