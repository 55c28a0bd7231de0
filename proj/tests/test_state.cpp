#include <cmath>
#include <complex>

#include <doctest.h>

#include "qreduce/errors.hpp"
#include "qreduce/rotation.hpp"
#include "qreduce/state.hpp"

using namespace qreduce;

namespace {

RegisterLayout layout_nm(int n, int m, int anc = 0) {
    RegisterLayout layout;
    layout.n_data_bits = n;
    layout.m_counter_bits = m;
    layout.n_ancilla = anc;
    return layout;
}

std::size_t basis_index(const RegisterLayout& layout, std::uint32_t c, std::uint32_t d) {
    return (static_cast<std::size_t>(c) << layout.data_shift()) |
           (static_cast<std::size_t>(d) << layout.counter_shift());
}

} // namespace

TEST_CASE("entangled load places 1/sqrt(M) on each |A_k>|k> pair") {
    const RegisterLayout layout = layout_nm(4, 2);
    const ArraySpec array{{15, 14, 6, 0}, 0};
    const PureState state = init_entangled_load(array, layout);

    int nonzero = 0;
    for (const auto& a : state.amplitudes()) {
        if (std::norm(a) > 0) {
            ++nonzero;
        }
    }
    CHECK(nonzero == 4);
    for (std::uint32_t k = 0; k < 4; ++k) {
        const auto amp = state.amp(basis_index(layout, array.elements[k], k));
        CHECK(amp.real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(amp.imag() == 0.0);
    }

    SUBCASE("duplicate values occupy separate counter branches") {
        const ArraySpec twin{{0, 0}, 0};
        const PureState s2 = init_entangled_load(twin, layout_nm(1, 1));
        CHECK(std::abs(s2.amp(0).real() - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(s2.amp(1).real() - 1.0 / std::sqrt(2.0)) < 1e-15);
    }

    SUBCASE("forced by definition: four 0.5 amplitudes for [3,2,1,0]") {
        const ArraySpec spec{{3, 2, 1, 0}, 0};
        const PureState s3 = init_entangled_load(spec, layout_nm(2, 2));
        double total = 0.0;
        for (const auto& a : s3.amplitudes()) {
            if (std::norm(a) > 0) {
                CHECK(std::abs(a) == doctest::Approx(0.5).epsilon(1e-15));
                total += std::norm(a);
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("load validates dimensions") {
    CHECK_THROWS_AS(init_entangled_load(ArraySpec{{1, 2, 3}, 0}, layout_nm(4, 2)), ConfigError);
    CHECK_THROWS_AS(init_entangled_load(ArraySpec{{16, 0, 0, 0}, 0}, layout_nm(4, 2)),
                    ConfigError);
    CHECK_THROWS_AS(init_entangled_load(ArraySpec{{1, 0, 0, 0}, 16}, layout_nm(4, 2)),
                    ConfigError);
    RegisterLayout too_big = layout_nm(20, 6, 4);
    CHECK_THROWS_AS(too_big.validate(), ConfigError);
}

TEST_CASE("conditioned rotation touches only branches whose bit differs") {
    const RegisterLayout layout = layout_nm(4, 2);
    const ArraySpec array{{15, 14, 6, 0}, 0};
    const SignMatrix sign = build_sign_matrix(2, SignVariant::paper_d4);
    const RotationOperator op = build_rotation(sign, PiFraction(1, 2));

    PureState state = init_entangled_load(array, layout);
    apply_conditioned_rotation(state, 3, 0, op);

    // branches 0110 and 0000 have bit 3 clear: untouched exactly
    CHECK(state.amp(basis_index(layout, 6, 2)) == std::complex<double>{0.5, 0.0});
    CHECK(state.amp(basis_index(layout, 0, 3)) == std::complex<double>{0.5, 0.0});
    // branches 1111 and 1110 were rotated
    CHECK(std::abs(state.amp(basis_index(layout, 15, 0)) - std::complex<double>{0.5, 0.0}) >
          0.1);
    CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-13));

    SUBCASE("identity rotation leaves the state unchanged") {
        PureState fresh = init_entangled_load(array, layout);
        const RotationOperator id = build_rotation(sign, 0.0);
        apply_conditioned_rotation(fresh, 2, 0, id);
        for (std::size_t i = 0; i < fresh.dim(); ++i) {
            CHECK(fresh.amp(i) == init_entangled_load(array, layout).amp(i));
        }
    }

    SUBCASE("dimension mismatches are configuration errors") {
        PureState fresh = init_entangled_load(array, layout);
        CHECK_THROWS_AS(apply_conditioned_rotation(fresh, 9, 0, op), ConfigError);
        const SignMatrix wrong = build_sign_matrix(3, SignVariant::doubling);
        CHECK_THROWS_AS(
            apply_conditioned_rotation(fresh, 1, 0, build_rotation(wrong, 0.5)), ConfigError);
    }
}

TEST_CASE("norm is preserved by every operator application") {
    const RegisterLayout layout = layout_nm(5, 3);
    ArraySpec array;
    array.target_b = 11;
    for (std::uint32_t k = 0; k < 8; ++k) {
        array.elements.push_back((k * 7 + 3) % 32);
    }
    const SignMatrix sign = build_sign_matrix(3, SignVariant::doubling);
    PureState state = init_entangled_load(array, layout);
    Rng rng(99);
    for (int step = 0; step < 40; ++step) {
        const int bit = static_cast<int>(rng.next() % 5);
        const RotationOperator op = build_rotation(sign, rng.uniform01() * M_PI);
        apply_conditioned_rotation(state, bit, static_cast<int>(rng.next() & 1), op);
        CHECK(std::abs(state.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("marginals are Born-rule and sum to one") {
    const RegisterLayout layout = layout_nm(4, 2);
    const ArraySpec array{{15, 14, 6, 0}, 0};
    const PureState state = init_entangled_load(array, layout);

    const std::vector<double> counter = marginal_distribution(state, Register::counter);
    for (const double p : counter) {
        CHECK(p == doctest::Approx(0.25).epsilon(1e-14));
    }
    const std::vector<double> data = marginal_distribution(state, Register::data);
    CHECK(data[15] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(data[1] == 0.0);

    double sum = 0.0;
    for (const double p : counter) {
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(marginal_distribution(state, Register::ancilla), ConfigError);

    SUBCASE("ancilla marginal is a point mass after the load") {
        const PureState with_anc = init_entangled_load(array, layout_nm(4, 2, 3));
        const std::vector<double> anc = marginal_distribution(with_anc, Register::ancilla);
        CHECK(anc[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t i = 1; i < anc.size(); ++i) {
            CHECK(anc[i] == 0.0);
        }
    }
}

TEST_CASE("measurement collapses and repeats deterministically") {
    const RegisterLayout layout = layout_nm(4, 2);

    SUBCASE("a basis state measures to itself with certainty") {
        PureState state(layout);
        // |0110>|10>
        state.amp(0) = {0.0, 0.0};
        state.amp(basis_index(layout, 6, 2)) = {1.0, 0.0};
        Rng rng(5);
        const std::uint32_t outcome = measure_and_collapse(state, Register::counter, rng);
        CHECK(outcome == 2);
        CHECK(std::abs(state.amp(basis_index(layout, 6, 2)) - std::complex<double>{1.0, 0.0}) <
              1e-15);
    }

    SUBCASE("re-measuring without intervening operators repeats the outcome") {
        const ArraySpec array{{15, 14, 6, 0}, 0};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            PureState state = init_entangled_load(array, layout);
            Rng rng(seed);
            const std::uint32_t first = measure_and_collapse(state, Register::counter, rng);
            const std::uint32_t second = measure_and_collapse(state, Register::counter, rng);
            CHECK(first == second);
        }
    }
}

TEST_CASE("collapse statistics reproduce the marginal within 4 sigma") {
    const RegisterLayout layout = layout_nm(4, 2);
    const ArraySpec array{{15, 14, 6, 0}, 0};
    const SignMatrix sign = build_sign_matrix(2, SignVariant::paper_d4);

    PureState rotated = init_entangled_load(array, layout);
    for (int j = 0; j < 4; ++j) {
        const RotationOperator op = build_rotation(sign, PiFraction(1, 2 << j));
        apply_conditioned_rotation(rotated, 3 - j, 0, op);
    }
    const std::vector<double> marginal = marginal_distribution(rotated, Register::counter);

    const int draws = 100000;
    std::vector<int> counts(4, 0);
    Rng rng = Rng::stream(4242, 0);
    for (int i = 0; i < draws; ++i) {
        PureState copy = rotated;
        ++counts[measure_and_collapse(copy, Register::counter, rng)];
    }
    for (int j = 0; j < 4; ++j) {
        const double p = marginal[static_cast<std::size_t>(j)];
        const double z = (counts[static_cast<std::size_t>(j)] - draws * p) /
                         std::sqrt(draws * p * (1.0 - p));
        CHECK(std::abs(z) < 4.0);
    }
}

TEST_CASE("histogram sampling") {
    const RegisterLayout layout = layout_nm(4, 2);
    const ArraySpec array{{15, 14, 6, 0}, 0};

    SUBCASE("uniform marginal lands within +-0.02 of 0.25 at 10k shots") {
        const PureState state = init_entangled_load(array, layout);
        const Histogram hist = sample_histogram(state, Register::counter, 10000, 11);
        for (const double f : hist.frequencies()) {
            CHECK(f == doctest::Approx(0.25).epsilon(0.08));
        }
        CHECK(hist.exact_probs.has_value());
    }

    SUBCASE("a basis state puts every count in one bin") {
        PureState state(layout);
        state.amp(0) = {0.0, 0.0};
        state.amp(basis_index(layout, 6, 2)) = {1.0, 0.0};
        const Histogram hist = sample_histogram(state, Register::counter, 500, 3);
        CHECK(hist.counts[2] == 500);
    }

    SUBCASE("zero shots is a configuration error") {
        const PureState state = init_entangled_load(array, layout);
        CHECK_THROWS_AS(sample_histogram(state, Register::counter, 0, 1), ConfigError);
    }

    SUBCASE("identical seeds give bit-identical histograms") {
        const PureState state = init_entangled_load(array, layout);
        const Histogram a = sample_histogram(state, Register::counter, 5000, 77);
        const Histogram b = sample_histogram(state, Register::counter, 5000, 77);
        CHECK(a.counts == b.counts);
        const Histogram c = sample_histogram(state, Register::counter, 5000, 78);
        CHECK(a.counts != c.counts);
    }
}

TEST_CASE("index permutations must be bijective") {
    const ArraySpec array{{3, 2, 1, 0}, 0};
    PureState state = init_entangled_load(array, layout_nm(2, 2));
    // xor against a fixed mask is an involution: fine
    apply_index_permutation(state, [](std::size_t i) { return i ^ 5u; });
    CHECK(std::abs(state.norm() - 1.0) < 1e-14);
    // a constant map collides: rejected
    CHECK_THROWS_AS(apply_index_permutation(state, [](std::size_t) { return std::size_t{0}; }),
                    InvariantError);
}

TEST_CASE("rng streams are independent and reproducible") {
    Rng a = Rng::stream(123, 0);
    Rng b = Rng::stream(123, 0);
    Rng c = Rng::stream(123, 1);
    bool diverged = false;
    for (int i = 0; i < 16; ++i) {
        const auto va = a.next();
        CHECK(va == b.next());
        diverged |= (va != c.next());
    }
    CHECK(diverged);
}
