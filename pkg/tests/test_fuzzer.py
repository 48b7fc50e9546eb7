"""FIR tap constraints, artificial frequency response, register packing."""
import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from csifuzz.dsp import FixedPointTap, TapAxis
from csifuzz.fuzzer import (
    IDENTITY_TAPS,
    FuzzerRegister,
    FuzzerTaps,
    apply_fir,
    apply_fir_switched,
    artificial_response,
    pack_register,
    random_taps,
    taps_register,
    unpack_register,
)


def axis_aligned():
    comp = st.floats(min_value=-0.5, max_value=0.5, exclude_max=True, allow_nan=False)
    return st.tuples(comp, st.booleans()).map(
        lambda t: complex(0.0, t[0]) if t[1] else complex(t[0], 0.0)
    )


def taps_strategy():
    return st.builds(FuzzerTaps, c1=axis_aligned(), c2=axis_aligned())


def fir_oracle(x, cir):
    """Direct convolution sum, no library calls."""
    y = np.zeros(len(x) + len(cir) - 1, dtype=np.complex128)
    for n in range(len(y)):
        for m, c in enumerate(cir):
            if 0 <= n - m < len(x):
                y[n] += c * x[n - m]
    return y


class TestTaps:
    def test_rejects_diagonal_component(self):
        with pytest.raises(ValueError):
            FuzzerTaps(0.3 + 0.3j, 0.1)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            FuzzerTaps(0.5, 0.0)
        with pytest.raises(ValueError):
            FuzzerTaps(0.1, -0.6j)

    def test_cir_layout(self):
        np.testing.assert_array_equal(
            FuzzerTaps(0.35j, 0.1).cir(), [1.0, 0.35j, 0.1]
        )

    def test_disabled_is_identity_cir(self):
        np.testing.assert_array_equal(
            FuzzerTaps(0.35j, 0.1, enabled=False).cir(), [1.0, 0.0, 0.0]
        )
        np.testing.assert_array_equal(IDENTITY_TAPS.cir(), [1.0, 0.0, 0.0])


class TestApplyFir:
    def test_identity_taps_append_zero_tail(self):
        x = np.arange(5) + 1j
        y = apply_fir(x, IDENTITY_TAPS)
        np.testing.assert_array_equal(y, np.concatenate([x, [0, 0]]))

    def test_impulse_exposes_cir(self):
        x = np.zeros(8)
        x[0] = 1.0
        y = apply_fir(x, FuzzerTaps(0.35j, 0.1))
        np.testing.assert_allclose(y[:3], [1.0, 0.35j, 0.1], atol=0)
        np.testing.assert_array_equal(y[3:], np.zeros(7))

    def test_matches_direct_convolution(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        taps = FuzzerTaps(-0.2j, 0.45)
        np.testing.assert_allclose(
            apply_fir(x, taps), fir_oracle(x, taps.cir()), atol=1e-12
        )

    def test_rejects_empty_input(self):
        with pytest.raises(ValueError):
            apply_fir(np.array([]), IDENTITY_TAPS)

    @given(taps_strategy())
    def test_zero_added_delay(self, taps):
        # x[n] must pass through with coefficient exactly 1 for every setting
        y = apply_fir(np.array([1.0 + 0j]), taps)
        assert y[0] == 1.0 + 0j

    def test_energy_gain_on_white_input(self):
        rng = np.random.default_rng(3)
        n = 10 ** 5
        x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        taps = FuzzerTaps(0.35j, 0.1)
        gain = np.mean(np.abs(apply_fir(x, taps)[:n]) ** 2) / np.mean(np.abs(x) ** 2)
        expect = 1 + 0.35 ** 2 + 0.1 ** 2
        assert abs(gain - expect) < 0.01 * expect


class TestSwitchedFir:
    def test_equal_taps_match_plain_fir(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        a = FuzzerTaps(0.3, -0.25j)
        for idx in (0, 7, 32):
            np.testing.assert_allclose(
                apply_fir_switched(x, a, a, idx), apply_fir(x, a), atol=1e-12
            )

    def test_switch_at_zero_uses_second_taps(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        a, b = FuzzerTaps(0.3, 0.0), FuzzerTaps(-0.4j, 0.2)
        np.testing.assert_allclose(
            apply_fir_switched(x, a, b, 0), apply_fir(x, b), atol=1e-12
        )

    def test_prefix_matches_first_taps(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        a, b = FuzzerTaps(0.1j, 0.1), FuzzerTaps(-0.45, 0.3j)
        y = apply_fir_switched(x, a, b, 20)
        np.testing.assert_allclose(y[:20], apply_fir(x, a)[:20], atol=1e-12)
        assert np.max(np.abs(y[20:] - apply_fir(x, a)[20:])) > 1e-3

    def test_rejects_bad_switch_index(self):
        with pytest.raises(ValueError):
            apply_fir_switched(np.ones(4), IDENTITY_TAPS, IDENTITY_TAPS, 5)


class TestArtificialResponse:
    def test_identity_taps_flat(self):
        np.testing.assert_allclose(
            artificial_response(IDENTITY_TAPS, 64), np.ones(64), atol=0
        )

    def test_dc_and_nyquist_bins(self):
        H = artificial_response(FuzzerTaps(0.35j, 0.1), 64)
        assert abs(H[0] - (1.1 + 0.35j)) < 1e-12
        assert abs(H[32] - (1.1 - 0.35j)) < 1e-12

    def test_golden_interior_bins(self):
        # frozen from an O(n^2) transform oracle at n=64
        H = artificial_response(FuzzerTaps(0.35j, 0.1), 64)
        assert abs(H[1] - (1.1323845271556694 + 0.3288056221336561j)) < 1e-12
        assert abs(H[7] - (1.241546681658889 + 0.17247513063663486j)) < 1e-12

    @given(taps_strategy(), st.integers(3, 128))
    def test_matches_closed_form(self, taps, n):
        H = artificial_response(taps, n)
        k = np.arange(n)
        w = np.exp(-2j * np.pi * k / n)
        expect = 1.0 + taps.c1 * w + taps.c2 * w ** 2
        assert np.max(np.abs(H - expect)) < 1e-9

    def test_rejects_small_dft(self):
        with pytest.raises(ValueError):
            artificial_response(IDENTITY_TAPS, 2)

    def test_min_magnitude_bound_on_dense_grid(self):
        # |H(k)| >= 1 - |c1| - |c2| everywhere; strictly positive off the
        # worst corner where |c1| + |c2| reaches 1
        comps = np.linspace(-0.5, 0.4999, 21)
        k = np.arange(64)
        w = np.exp(-2j * np.pi * k / 64)
        for a1 in (1.0, 1j):
            for a2 in (1.0, 1j):
                c1 = a1 * comps[:, None, None]
                c2 = a2 * comps[None, :, None]
                H = 1.0 + c1 * w + c2 * w ** 2
                lo = np.abs(H).min(axis=2)
                bound = 1 - np.abs(c1[:, :, 0]) - np.abs(c2[:, :, 0])
                assert np.all(lo >= bound - 1e-12)
                interior = (np.abs(c1[:, :, 0]) + np.abs(c2[:, :, 0])) < 1 - 1e-9
                assert np.all(lo[interior] > 0)


class TestRegister:
    def test_golden_words(self):
        assert taps_register(FuzzerTaps(0.35j, 0.1)).hex() == "0xaccd0ccd"
        assert taps_register(FuzzerTaps(0.25, -0.5j)).hex() == "0x2000c000"

    def test_zero_word(self):
        reg = pack_register(
            FixedPointTap(TapAxis.REAL, 0), FixedPointTap(TapAxis.REAL, 0)
        )
        assert reg.hex() == "0x00000000"

    def test_roundtrip_named_case(self):
        c1 = FixedPointTap(TapAxis.REAL, 8192)
        c2 = FixedPointTap(TapAxis.IMAG, -16384)
        assert unpack_register(pack_register(c1, c2)) == (c1, c2)

    @given(
        st.sampled_from(TapAxis),
        st.integers(-16384, 16383),
        st.sampled_from(TapAxis),
        st.integers(-16384, 16383),
    )
    def test_roundtrip_all_codes(self, ax1, k1, ax2, k2):
        c1, c2 = FixedPointTap(ax1, k1), FixedPointTap(ax2, k2)
        assert unpack_register(pack_register(c1, c2)) == (c1, c2)

    def test_word_range_checked(self):
        with pytest.raises(ValueError):
            FuzzerRegister(1 << 32)
        with pytest.raises(ValueError):
            FuzzerRegister(-1)


class TestRandomTaps:
    def test_deterministic_per_seed(self):
        assert random_taps(42) == random_taps(42)
        assert random_taps(42) != random_taps(43)

    def test_constraints_hold_in_bulk(self):
        for seed in range(10 ** 4):
            t = random_taps(seed)
            for c in (t.c1, t.c2):
                assert c.real == 0.0 or c.imag == 0.0
                comp = c.real if c.imag == 0.0 else c.imag
                assert -0.5 <= comp < 0.5

    def test_subrange_respected(self):
        for seed in range(200):
            t = random_taps(seed, low=0.1, high=0.2)
            for c in (t.c1, t.c2):
                comp = c.real if c.imag == 0.0 else c.imag
                assert 0.1 <= comp < 0.2

    def test_component_uniformity_chi_square(self):
        rng = np.random.default_rng(1234)
        comps = []
        for _ in range(10 ** 4):
            t = random_taps(rng)
            for c in (t.c1, t.c2):
                comps.append(c.real if c.imag == 0.0 else c.imag)
        counts, _ = np.histogram(comps, bins=20, range=(-0.5, 0.5))
        assert scipy.stats.chisquare(counts).pvalue > 0.01

    def test_axis_choice_balanced(self):
        rng = np.random.default_rng(99)
        n_imag = sum(random_taps(rng).c1.imag != 0.0 for _ in range(4000))
        assert abs(n_imag - 2000) < 4 * np.sqrt(1000)  # ~4 sigma of Bin(4000, .5)

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError):
            random_taps(1, low=0.3, high=0.3)
        with pytest.raises(ValueError):
            random_taps(1, low=0.2, high=0.6)
