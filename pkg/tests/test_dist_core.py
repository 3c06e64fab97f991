import math
import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import mass_pairs, masses
from entcert.dist_core import (
    DivergenceInfiniteError,
    EmpiricalMeasure,
    InvariantError,
    MixtureOfUniforms,
    Pmf,
    TwoLevel,
    Zeta,
    counts_from_pairs,
    derive_rng,
    empirical_measure,
    entropy,
    kl_divergence,
    l1_distance,
    lp_norm,
    rearrange_decreasing,
    sample,
    sup_distance,
    tv_distance,
    zeta_series,
)


# --- types -----------------------------------------------------------------

class TestPmf:
    def test_rejects_negative(self):
        with pytest.raises(InvariantError):
            Pmf([1.2, -0.2])

    def test_normalization_tolerance(self):
        Pmf([0.5, 0.5 + 5e-10])
        with pytest.raises(InvariantError):
            Pmf([0.5, 0.5 + 5e-9])

    def test_rejects_empty_and_nan(self):
        with pytest.raises(InvariantError):
            Pmf([])
        with pytest.raises(InvariantError):
            Pmf([np.nan, 1.0])

    def test_immutable(self):
        p = Pmf([0.5, 0.5])
        with pytest.raises(ValueError):
            p.masses[0] = 1.0

    def test_pmf_outside_support_is_zero(self):
        p = Pmf([0.25, 0.75])
        assert p.pmf(0) == 0 and p.pmf(3) == 0 and p.pmf(2) == 0.75


class TestAnalytic:
    def test_zeta_needs_q_above_one(self):
        for q in (1.0, 0.5):
            with pytest.raises(InvariantError):
                Zeta(q)

    def test_two_level_normalization(self):
        TwoLevel(0.5, 5, 0.1)
        with pytest.raises(InvariantError):
            TwoLevel(0.5, 5, 0.2)

    def test_mixture_pmf(self):
        m = MixtureOfUniforms(10, 1000, 0.95)
        assert m.pmf(1) == pytest.approx(0.095)
        assert m.pmf(10) == pytest.approx(0.095)
        assert m.pmf(11) == pytest.approx(0.05 / 1000)
        assert m.pmf(1010) == pytest.approx(0.05 / 1000)
        assert m.pmf(1011) == 0
        assert m.support_size == 1010
        assert math.fsum(m.masses()) == pytest.approx(1.0, abs=1e-12)

    def test_zeta_tail_mass(self):
        z = Zeta(2.0)
        assert z.tail_mass(0) == 1.0
        assert z.tail_mass(1) == pytest.approx(1 - 6 / math.pi ** 2, rel=1e-14)
        assert z.tail_mass(10) == pytest.approx(1 - math.fsum(z.masses(10)), rel=1e-12)


class TestEmpiricalMeasure:
    def test_counts_must_sum_to_n(self):
        with pytest.raises(InvariantError):
            EmpiricalMeasure({1: 2, 2: 1}, 4)

    def test_zero_counts_dropped(self):
        e = EmpiricalMeasure({1: 3, 2: 0}, 3)
        assert dict(e.counts) == {1: 3}

    def test_examples(self):
        e = empirical_measure([1, 1, 2, 3])
        np.testing.assert_array_equal(e.masses, [0.5, 0.25, 0.25])
        assert dict(empirical_measure([7]).counts) == {7: 1}
        assert dict(empirical_measure([2, 2, 2, 2]).counts) == {2: 4}

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            empirical_measure([])

    def test_counts_from_pairs_accumulates(self):
        e = counts_from_pairs([(5, 10), (7, 90), (5, 1)])
        assert dict(e.counts) == {5: 11, 7: 90} and e.n == 101

    @given(st.lists(st.integers(1, 30), min_size=1, max_size=200))
    def test_masses_form_pmf(self, xs):
        e = empirical_measure(xs)
        assert sum(e.counts.values()) == e.n == len(xs)
        Pmf(e.masses)


# --- entropy ---------------------------------------------------------------

def test_entropy_examples():
    assert entropy(Pmf.uniform(4)) == pytest.approx(1.3862944, abs=1e-7)
    assert entropy(Pmf.point_mass(3)) == 0.0
    assert entropy(Pmf([1.0, 0.0, 0.0])) == 0.0


def test_entropy_zeta_matches_derivative_oracle():
    assert entropy(Zeta(2.0)) == pytest.approx(oracles.zeta_entropy(2.0), abs=1e-9)
    assert entropy(Zeta(1.5)) == pytest.approx(oracles.zeta_entropy(1.5), abs=1e-9)


def test_entropy_closed_forms():
    m = MixtureOfUniforms(10, 1000, 0.95)
    direct = -(0.95 * math.log(0.095) + 0.05 * math.log(0.05 / 1000))
    assert entropy(m) == pytest.approx(direct, rel=1e-14)
    t = TwoLevel(0.75, 10**15, 0.25e-15)
    assert entropy(t) == pytest.approx(-0.75 * math.log(0.75) - 0.25 * math.log(0.25e-15), rel=1e-13)


def test_entropy_rejects_unnormalized():
    with pytest.raises(InvariantError):
        entropy([0.5, 0.6])


@pytest.mark.parametrize("q,alpha", [(2.0, 1.0), (2.0, 1.5), (3.0, 2.5), (1.5, 2.5), (1.2, 1.0)])
def test_zeta_series_inside_rigorous_bracket(q, alpha):
    lo, hi = oracles.zeta_moment_bracket(q, alpha)
    value, err = zeta_series(q, alpha)
    assert err <= 1e-9 * max(1.0, abs(value))
    assert lo - 1e-9 * max(1.0, abs(value)) <= value <= hi + 1e-9 * max(1.0, abs(value))


@pytest.mark.parametrize("alpha", [1, 2, 3, 5])
def test_zeta_series_integer_alpha(alpha):
    assert zeta_series(2.0, float(alpha))[0] == pytest.approx(
        oracles.zeta_moment_integer(2.0, alpha), rel=1e-12)


@pytest.mark.parametrize("dist", [Zeta(2.0), Zeta(3.0)], ids=repr)
def test_truncated_entropy_within_tail_tolerance(dist):
    tol = 1e-5
    M = dist.truncation_point(tol)
    m = dist.masses(M)
    # entropy of the renormalized head differs by at most the tail entropy plus a
    # renormalization term of order tail * log(1/tail)
    head = m / m.sum()
    gap = abs(entropy(Pmf(head)) - entropy(dist))
    tail = dist.tail_mass(M)
    assert gap <= tol + tail * (1 + abs(math.log(tail))) + 1e-12


@pytest.mark.parametrize("dist", [MixtureOfUniforms(10, 1000, 0.95), TwoLevel(0.5, 4, 0.125)], ids=repr)
def test_finite_families_materialize_exactly(dist):
    assert entropy(Pmf(dist.masses())) == pytest.approx(entropy(dist), abs=1e-12)


# --- divergences and distances ---------------------------------------------

def test_kl_examples():
    p = Pmf([0.2, 0.3, 0.5])
    assert kl_divergence(p, p) == 0.0
    assert kl_divergence(Pmf.uniform(2), Pmf([0.75, 0.25])) == pytest.approx(0.1438410, abs=1e-7)


def test_kl_no_emp_pair():
    mu0 = TwoLevel(1.0, 1, 0.0)
    mu4 = TwoLevel(7 / 8, 1000, 1 / 8000)
    assert kl_divergence(mu0, mu4) == pytest.approx(math.log(8 / 7), rel=1e-14)
    assert kl_divergence(mu0, mu4) <= 0.25


def test_kl_support_violation():
    with pytest.raises(DivergenceInfiniteError):
        kl_divergence(Pmf([0.5, 0.5]), Pmf([1.0, 0.0]))
    with pytest.raises(DivergenceInfiniteError):
        kl_divergence(Zeta(2.0), Pmf.uniform(3))


def test_kl_zeta_pair_against_direct_sum():
    p, q = Zeta(2.0), Zeta(3.0)
    i = np.arange(1, 2_000_001, dtype=float)
    a, b = p.pmf(i), q.pmf(i)
    direct = math.fsum(a * np.log(a / b))
    # neglected tail is below sum_{i > N} p_i log(i) ~ log(N)/N
    assert kl_divergence(p, q) == pytest.approx(direct, abs=1e-5)


def test_kl_finite_against_zeta_direct():
    f = MixtureOfUniforms(3, 5, 0.6)
    z = Zeta(2.0)
    a = f.masses()
    b = z.masses(8)
    assert kl_divergence(f, z) == pytest.approx(math.fsum(a * np.log(a / b)), rel=1e-12)


def test_tv_examples():
    p = Pmf([0.1, 0.9])
    assert tv_distance(p, p) == 0.0
    assert tv_distance(Pmf.point_mass(1), Pmf.point_mass(2)) == 1.0
    assert tv_distance(Pmf.uniform(2), p) == pytest.approx(0.4, abs=1e-15)


def test_l1_zeta_against_empirical_direct():
    z = Zeta(2.0)
    e = empirical_measure(sample(z, 500, 3))
    m = int(e.symbols.max())
    dense = np.zeros(m)
    for s, c in e.counts.items():
        dense[s - 1] = c / e.n
    direct = math.fsum(np.abs(dense - z.masses(m))) + z.tail_mass(m)
    assert l1_distance(z, e) == pytest.approx(direct, rel=1e-12)
    assert sup_distance(z, e) == pytest.approx(float(np.max(np.abs(dense - z.masses(m)))), rel=1e-12)


def test_l1_between_zetas_against_direct():
    p, q = Zeta(2.0), Zeta(2.5)
    i = np.arange(1, 2_000_001, dtype=float)
    direct = math.fsum(np.abs(p.pmf(i) - q.pmf(i))) + abs(p.tail_mass(2_000_000) - q.tail_mass(2_000_000))
    assert l1_distance(p, q) == pytest.approx(direct, rel=1e-12)


def test_l1_blocks_against_dense():
    a = MixtureOfUniforms(10, 1000, 0.95)
    b = TwoLevel(0.5, 2000, 0.25e-3)
    k = 2001
    da = np.pad(a.masses(), (0, k - a.support_size))
    db = b.masses()
    assert l1_distance(a, b) == pytest.approx(math.fsum(np.abs(da - db)), rel=1e-12)
    assert sup_distance(a, b) == pytest.approx(np.max(np.abs(da - db)), rel=1e-12)


@given(mass_pairs())
def test_tv_is_half_l1_norm(pair):
    a, b = pair
    # both sides are compensated sums; they agree to the last couple of ulps
    assert tv_distance(Pmf(a), Pmf(b)) == pytest.approx(0.5 * lp_norm(a - b, 1), rel=1e-15, abs=1e-16)


@given(mass_pairs())
def test_kl_nonnegative_zero_iff_equal(pair):
    a, b = pair
    p, q = Pmf(a), Pmf(b)
    assert kl_divergence(p, p) == 0.0
    if np.all((a == 0) | (b > 0)):
        d = kl_divergence(p, q)
        assert d >= 0.0
        if not np.allclose(a, b, atol=1e-9):
            assert d > 0.0


# --- norms and rearrangement -------------------------------------------------

def test_lp_norm_examples():
    assert lp_norm([0.5, -0.5], 1) == 1.0
    assert lp_norm([0.3, 0.4], math.inf) == 0.4
    assert lp_norm([3, 4], 2) == pytest.approx(5.0, rel=1e-15)


def test_lp_norm_rejects_p_below_one():
    with pytest.raises(ValueError):
        lp_norm([1.0], 0.5)


def test_rearrange_examples():
    np.testing.assert_array_equal(rearrange_decreasing(Pmf([0.2, 0.5, 0.3])).masses, [0.5, 0.3, 0.2])
    np.testing.assert_array_equal(rearrange_decreasing(Pmf([0.5, 0.3, 0.2])).masses, [0.5, 0.3, 0.2])
    np.testing.assert_array_equal(rearrange_decreasing(Pmf([0.25, 0.25, 0.5])).masses, [0.5, 0.25, 0.25])


@given(mass_pairs(), st.sampled_from([1.0, 2.0, math.inf]))
def test_rearrangement_contracts(pair, p):
    a, b = pair
    lhs = lp_norm(rearrange_decreasing(Pmf(a)).masses - rearrange_decreasing(Pmf(b)).masses, p)
    assert lhs <= lp_norm(a - b, p) + 1e-12


@given(masses())
def test_rearrangement_keeps_multiset(a):
    r = rearrange_decreasing(Pmf(a)).masses
    np.testing.assert_array_equal(np.sort(r), np.sort(a))
    assert np.all(np.diff(r) <= 0)


# --- sampling ---------------------------------------------------------------

def test_point_mass_sample():
    np.testing.assert_array_equal(sample(Pmf.point_mass(1), 5, 0), [1, 1, 1, 1, 1])


@pytest.mark.parametrize("dist", [Pmf.uniform(7), MixtureOfUniforms(3, 40, 0.7), Zeta(2.0),
                                  TwoLevel(0.9, 10**12, 1e-13)], ids=repr)
def test_sampling_is_reproducible(dist):
    np.testing.assert_array_equal(sample(dist, 1000, 42), sample(dist, 1000, 42))
    assert not np.array_equal(sample(dist, 1000, 42), sample(dist, 1000, 43))


def test_uniform_frequencies():
    # binomial sd is sqrt(0.09/1e5) ~ 9.5e-4, so 0.01 is more than 10 sd
    e = empirical_measure(sample(Pmf.uniform(10), 100_000, 2024))
    assert np.all(np.abs(e.masses - 0.1) < 0.01)


@pytest.mark.parametrize("dist", [Zeta(2.0), Zeta(1.3), MixtureOfUniforms(10, 1000, 0.95)], ids=repr)
def test_sample_frequencies_match_pmf(dist):
    n = 200_000
    x = sample(dist, n, 5)
    for k in (1, 2, 3, 10, 11):
        p = float(dist.pmf(k))
        sd = math.sqrt(p * (1 - p) / n)
        assert abs(np.mean(x == k) - p) <= 5 * sd + 1e-12
    k = 50
    p = dist.tail_mass(k)
    assert abs(np.mean(x > k) - p) <= 5 * math.sqrt(p * (1 - p) / n) + 1e-12


def test_zeta_far_tail_inversion():
    # q close to 1 pushes draws past the precomputed survival table
    z = Zeta(1.3)
    x = sample(z, 20_000, 9)
    assert x.max() > 1 << 20
    for v in (1e-3, 1e-5):
        k = z._invert_tail(v, 1 << 20)
        assert z.tail_mass(k) <= v < z.tail_mass(k - 1)
    beyond = np.mean(x > 1 << 20)
    p = z.tail_mass(1 << 20)
    assert abs(beyond - p) <= 5 * math.sqrt(p / 20_000)


def test_zeta_draws_beyond_int64_fail_loudly():
    # P(X > 2^62) is about 0.12 for q = 1.05
    with pytest.raises(OverflowError):
        sample(Zeta(1.05), 1000, 0)


def test_two_level_sampling_huge_support():
    t = TwoLevel(0.5, 10**15, 0.5e-15)
    x = sample(t, 10_000, 1)
    assert x.min() >= 1 and x.max() <= 10**15 + 1
    assert abs(np.mean(x == 1) - 0.5) < 0.03


def test_derived_rngs_are_thread_safe_and_distinct():
    out = {}

    def work(t):
        out[t] = sample(Pmf.uniform(100), 50, derive_rng(11, t))

    threads = [threading.Thread(target=work, args=(t,)) for t in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    for t in range(8):
        np.testing.assert_array_equal(out[t], sample(Pmf.uniform(100), 50, derive_rng(11, t)))
    assert not np.array_equal(out[0], out[1])
