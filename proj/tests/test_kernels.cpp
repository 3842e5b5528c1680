#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "parrondo/kernel.hpp"

using namespace parrondo;

namespace {

Params random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return Params{u(rng), u(rng), u(rng), u(rng)};
}

Dist random_dist(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dist d;
    d.n = n;
    d.w.resize(state_count(n));
    double sum = 0.0;
    for (double& v : d.w) {
        v = u(rng);
        sum += v;
    }
    for (double& v : d.w) v /= sum;
    return d;
}

double row_sum(const std::vector<Transition>& row) {
    double s = 0.0;
    for (const auto& t : row) s += t.prob;
    return s;
}

double row_prob(const std::vector<Transition>& row, StateIndex to) {
    double s = 0.0;
    for (const auto& t : row) {
        if (t.to == to) s += t.prob;
    }
    return s;
}

}  // namespace

TEST_CASE("neighbor code reads the cyclic neighbors") {
    CHECK(neighbor_code(from_binary("000", 3), 1, 3) == 0);
    CHECK(neighbor_code(from_binary("111", 3), 2, 3) == 3);
    // x = (0,1,0,1): m_1 = 2 x_4 + x_2 = 3
    CHECK(neighbor_code(from_binary("0101", 4), 1, 4) == 3);
    CHECK(neighbor_code(from_binary("0101", 4), 2, 4) == 0);
    CHECK_THROWS_AS(neighbor_code(0, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(neighbor_code(0, 5, 4), std::invalid_argument);
}

TEST_CASE("flip toggles one player and is an involution") {
    CHECK(flip_player(from_binary("000", 3), 1, 3) == from_binary("100", 3));
    CHECK(flip_player(from_binary("101", 3), 3, 3) == from_binary("100", 3));
    CHECK_THROWS_AS(flip_player(0, 4, 3), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 10);
        const StateIndex x = static_cast<StateIndex>(rng() % state_count(n));
        const int i = 1 + static_cast<int>(rng() % n);
        CHECK(flip_player(flip_player(x, i, n), i, n) == x);
    }
}

TEST_CASE("binary rendering follows player order") {
    CHECK(to_binary(from_binary("001001", 6), 6) == "001001");
    CHECK(from_binary("100100", 6) == StateIndex{0b001001});  // x_1 is bit 0
    CHECK_THROWS_AS(from_binary("0102", 4), std::invalid_argument);
}

TEST_CASE("row_b matches the hand-evaluated entries") {
    const Params p{0.3, 0.8, 0.45, 0.9};

    SUBCASE("all-zero state") {
        const auto row = row_b(3, p, 0);
        for (int i = 1; i <= 3; ++i) {
            CHECK(row_prob(row, flip_player(0, i, 3)) == doctest::Approx(p.p0 / 3).epsilon(1e-15));
        }
        CHECK(row_prob(row, 0) == doctest::Approx(1.0 - p.p0).epsilon(1e-15));
    }

    SUBCASE("all-one state with p3 = 0 has an omitted diagonal") {
        const Params q3zero{0.3, 0.8, 0.45, 0.0};
        const StateIndex ones = from_binary("111", 3);
        const auto row = row_b(3, q3zero, ones);
        CHECK(row.size() == 3);  // three flips, no diagonal
        CHECK(row_prob(row, ones) == 0.0);
        CHECK(row_sum(row) == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("fair parameters reduce to game A") {
        std::mt19937_64 rng(5);
        for (StateIndex x = 0; x < state_count(4); ++x) {
            const auto fair = row_b(4, params_a(), x);
            const auto a = row_a(4, x);
            REQUIRE(fair.size() == a.size());
            for (std::size_t k = 0; k < a.size(); ++k) {
                CHECK(fair[k].to == a[k].to);
                CHECK(fair[k].prob == a[k].prob);
            }
            CHECK(row_prob(a, x) == doctest::Approx(0.5).epsilon(1e-15));
            CHECK(row_prob(a, flip_player(x, 1, 4)) == doctest::Approx(1.0 / 8).epsilon(1e-15));
        }
    }
}

TEST_CASE("rows are stochastic with support at most N+1") {
    std::mt19937_64 rng(23);
    for (int n = 3; n <= 8; ++n) {
        for (int draw = 0; draw < 5; ++draw) {
            const Params p = random_params(rng);
            for (StateIndex x = 0; x < state_count(n); ++x) {
                const auto row = row_b(n, p, x);
                CHECK(row.size() <= static_cast<std::size_t>(n) + 1);
                CHECK(std::abs(row_sum(row) - 1.0) <= 1e-14);
                for (const auto& t : row) CHECK(t.prob > 0.0);
            }
        }
    }
}

TEST_CASE("apply agrees with the dense row-vector product") {
    std::mt19937_64 rng(37);
    for (int n = 3; n <= 6; ++n) {
        const Params p = random_params(rng);
        const auto dense = oracle::dense_b(n, p);
        const Dist d = random_dist(n, rng);
        const Dist out = apply_game(n, p, d);
        const auto expected = oracle::apply_row_vector(d.w, dense);
        double err = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i) err += std::abs(out.w[i] - expected[i]);
        CHECK(err <= 1e-14);
    }
}

TEST_CASE("apply moves a point mass per the row of P_B") {
    const Params p{0.7, 0.1, 0.2, 0.9};
    const Dist out = apply_game(3, p, Dist::point_mass(3, 0));
    CHECK(out.w[0] == doctest::Approx(1.0 - p.p0).epsilon(1e-15));
    for (int i = 1; i <= 3; ++i) {
        CHECK(out.w[flip_player(0, i, 3)] == doctest::Approx(p.p0 / 3).epsilon(1e-15));
    }
}

TEST_CASE("uniform is invariant under game A") {
    for (int n : {3, 5, 10}) {
        const Dist u = Dist::uniform(n);
        const Dist out = Kernel::game_a(n).apply(u);
        CHECK(l1_distance(u, out) <= 1e-14);
    }
}

TEST_CASE("composition stages apply left to right") {
    const Params p{0.15, 0.6, 0.35, 0.9};
    std::mt19937_64 rng(41);
    const Dist d = random_dist(4, rng);

    const Kernel pat = Kernel::pattern(4, p, Pattern{2, 1});
    Dist staged = d;
    staged = apply_game(4, params_a(), staged);
    staged = apply_game(4, params_a(), staged);
    staged = apply_game(4, p, staged);
    CHECK(l1_distance(pat.apply(d), staged) == 0.0);

    const Kernel a_only = Kernel::compose(4, {Stage{Game::A, params_a(), 1}});
    CHECK(l1_distance(a_only.apply(d), Kernel::game_a(4).apply(d)) == 0.0);
    CHECK(pat.steps_per_application() == 3);
}

TEST_CASE("mass stays conserved across a thousand applications") {
    const Params p{0.05, 0.85, 0.4, 0.95};
    const Kernel k = Kernel::pattern(5, p, Pattern{1, 1});
    Dist d = Dist::point_mass(5, 7);
    for (int t = 0; t < 1000; ++t) d = k.apply(d);
    CHECK(std::abs(d.sum() - 1.0) <= 1e-13);
    for (double v : d.w) CHECK(v >= 0.0);
}

namespace {

// dense matrix assembled from the implementation's row generator
oracle::Matrix dense_from_rows(int n, const Params& p) {
    oracle::Matrix m(state_count(n), std::vector<double>(state_count(n), 0.0));
    for (StateIndex x = 0; x < state_count(n); ++x) {
        for (const Transition& t : row_b(n, p, x)) m[x][t.to] += t.prob;
    }
    return m;
}

}  // namespace

TEST_CASE("kernel entries are invariant under ring rotations") {
    std::mt19937_64 rng(53);
    for (int n = 3; n <= 6; ++n) {
        const Params p = random_params(rng);
        const auto dense = dense_from_rows(n, p);
        for (StateIndex x = 0; x < state_count(n); ++x) {
            const StateIndex xr = rotate_players(x, n);
            for (StateIndex y = 0; y < state_count(n); ++y) {
                // exact equality: the same p_m/N values are looked up and the
                // diagonal is accumulated in a canonical order
                CHECK(dense[x][y] == dense[xr][rotate_players(y, n)]);
            }
        }
    }
}

TEST_CASE("reflection invariance holds when p1 = p2") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 3; n <= 6; ++n) {
        const double shared = u(rng);
        const Params p{u(rng), shared, shared, u(rng)};
        const auto dense = dense_from_rows(n, p);
        for (StateIndex x = 0; x < state_count(n); ++x) {
            const StateIndex xr = reflect_players(x, n);
            for (StateIndex y = 0; y < state_count(n); ++y) {
                CHECK(dense[x][y] == dense[xr][reflect_players(y, n)]);
            }
        }
    }
}

TEST_CASE("products of rotation-invariant kernels stay rotation-invariant") {
    std::mt19937_64 rng(61);
    for (int n = 3; n <= 5; ++n) {
        const Params p = random_params(rng);
        const auto prod = oracle::multiply(oracle::dense_a(n), oracle::dense_b(n, p));
        for (StateIndex x = 0; x < state_count(n); ++x) {
            const StateIndex xr = rotate_players(x, n);
            for (StateIndex y = 0; y < state_count(n); ++y) {
                CHECK(std::abs(prod[x][y] - prod[xr][rotate_players(y, n)]) <= 1e-15);
            }
        }
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(Kernel::game_b(2, params_a()), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::game_b(19, params_a()), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::game_b(4, Params{-0.1, 0.5, 0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::pattern(4, params_a(), Pattern{0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::compose(4, {}), std::invalid_argument);
    const Kernel k = Kernel::game_a(4);
    CHECK_THROWS_AS(k.apply(Dist::uniform(5)), std::invalid_argument);
    CHECK_THROWS_AS(mixed_params(params_a(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mixed_params(params_a(), 1.0), std::invalid_argument);
}

TEST_CASE("lambda map is the parameter involution") {
    const Params p{1.0, 0.6, 0.6, 0.0};
    const Params lp = lambda_map(p);
    CHECK(lp == Params{1.0, 0.4, 0.4, 0.0});
    CHECK(lambda_map(lp) == p);
    CHECK(lambda_map(params_a()) == params_a());
}
