#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ssa/moments.hpp"
#include "ssa/simulation.hpp"

using namespace ssa;
using namespace ssa::sim;

namespace {

double lag_corr(const VectorXd& x, Index tau) {
    const double m = x.mean();
    const VectorXd c = x.array() - m;
    const Index n = c.size();
    return c.head(n - tau).dot(c.tail(n - tau)) / c.squaredNorm();
}

}  // namespace

TEST_CASE("ARMA autocorrelations") {
    const auto ma = gen_arma(ArmaSpec{{}, {0.78}, 1.0}, 100000, 1);
    CHECK(std::abs(lag_corr(ma, 1) - 0.78 / (1 + 0.78 * 0.78)) < 0.02);
    CHECK(std::abs(lag_corr(ma, 2)) < 0.02);

    const auto ar = gen_arma(ArmaSpec{{0.7}, {}, 1.0}, 100000, 2);
    CHECK(std::abs(lag_corr(ar, 1) - 0.7) < 0.02);
    CHECK(std::abs(lag_corr(ar, 2) - 0.49) < 0.02);
    CHECK(std::abs(ar.squaredNorm() / 100000.0 - 1.0 / (1 - 0.49)) < 0.1);

    const auto iid = gen_arma(ArmaSpec{{}, {}, 2.0}, 100000, 3);
    CHECK(std::abs(lag_corr(iid, 1)) < 0.02);
    CHECK(std::abs(iid.squaredNorm() / 100000.0 - 2.0) < 0.05);

    CHECK_THROWS_AS(gen_arma(ArmaSpec{{1.1}, {}, 1.0}, 100, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_arma(ArmaSpec{{0.5, 0.5}, {}, 1.0}, 100, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_arma(ArmaSpec{{}, {}, 0.0}, 100, 1), InvalidArgument);
    CHECK(is_stationary_ar(std::vector<double>{0.34, 0.27, 0.18}));
    CHECK(is_stationary_ar(std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1}));
}

TEST_CASE("ARMA determinism") {
    CHECK(gen_arma(ArmaSpec{{0.5}, {0.2}, 1.0}, 500, 9) == gen_arma(ArmaSpec{{0.5}, {0.2}, 1.0}, 500, 9));
    CHECK(gen_arma(ArmaSpec{{0.5}, {0.2}, 1.0}, 500, 9) != gen_arma(ArmaSpec{{0.5}, {0.2}, 1.0}, 500, 10));
}

TEST_CASE("TV-VAR recursion") {
    std::vector<double> eps(200);
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = std::sin(0.3 * static_cast<double>(i)) + 0.1;
    const auto x = tvvar_path(0.0, 0.4, eps);
    for (Index t = 1; t <= 200; ++t)
        CHECK(x(t - 1) == Catch::Approx(std::abs(tvvar_h(0.4, t, 200)) * eps[static_cast<std::size_t>(t - 1)]));

    // beta = 0: h_t = 10 - 5(1 + t/T)
    for (Index t : {1, 50, 200}) CHECK(tvvar_h(0.0, t, 200) == Catch::Approx(10 - 5 * (1 + t / 200.0)).margin(1e-12));

    const auto y = tvvar_path(0.2, 0.5, eps);
    double prev = 0;
    for (Index t = 1; t <= 200; ++t) {
        const double h = tvvar_h(0.5, t, 200);
        const double want = std::sqrt(h * h + 0.2 * prev * prev) * eps[static_cast<std::size_t>(t - 1)];
        CHECK(y(t - 1) == Catch::Approx(want).epsilon(1e-12));
        prev = want;
    }
    CHECK_THROWS_AS(tvvar_path(-0.1, 0.5, eps), InvalidArgument);
}

TEST_CASE("TV-AR(1) sign change") {
    CHECK(gen_tvar1(0.0, 300, 1).cwiseAbs().maxCoeff() == 0.0);
    const Index T = 200000;
    const auto x = gen_tvar1(1.0, T, 4);
    // a_t is positive near the ends of the span and negative around the middle
    auto corr = [&](Index a, Index b) {
        double num = 0, den = 0;
        for (Index t = a; t < b; ++t) {
            num += x(t) * x(t + 1);
            den += x(t) * x(t);
        }
        return num / den;
    };
    CHECK(corr(0, T / 20) > 0.35);
    CHECK(corr(T / 2 - T / 40, T / 2 + T / 40) < -0.35);
    CHECK_THROWS_AS(gen_tvar1(-1.0, 10, 1), InvalidArgument);
}

TEST_CASE("block boundaries follow the floor rule") {
    const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
    for (Index T : {600, 1000, 1001, 1002, 16000}) {
        const auto b = block_boundaries(thirds, T);
        REQUIRE(b.size() == 4);
        CHECK(b[1] == T / 3);
        CHECK(b[2] == 2 * (T / 3));
        CHECK(b[3] == T);
    }
    const std::vector<double> halves{0.5, 0.5};
    CHECK(block_boundaries(halves, 1001) == std::vector<Index>{0, 500, 1001});
    CHECK_THROWS_AS(block_boundaries(std::vector<double>{0.5, 0.4}, 100), InvalidArgument);
    CHECK_THROWS_AS(block_boundaries(std::vector<double>{}, 100), InvalidArgument);
}

TEST_CASE("blockwise processes switch at the boundaries") {
    const std::vector<Block> blocks{Block{ArmaSpec{{0.9}, {}, 1.0}, 0.5}, Block{ArmaSpec{{-0.9}, {}, 1.0}, 0.5}};
    const auto x = gen_blockwise(blocks, 100000, 5);
    CHECK(lag_corr(x.head(50000), 1) > 0.85);
    CHECK(lag_corr(x.tail(50000), 1) < -0.85);
}

TEST_CASE("settings: shape, mixing and truth") {
    for (int id : {1, 2, 3, 4}) {
        const auto sc = make_setting(id, 1200, 7);
        CHECK(sc.latent.dim() == 8);
        CHECK(sc.latent.length() == 1200);
        CHECK(sc.k == 3);
        CHECK(sc.stationary_idx == std::vector<Index>{0, 1, 2, 3, 4});
        CHECK(sc.nonstationary_idx == std::vector<Index>{5, 6, 7});
        CHECK((sc.mixing.transpose() * sc.mixing - MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((sc.observed.values() - sc.latent.values() * sc.mixing.transpose()).cwiseAbs().maxCoeff() < 1e-12);

        // every latent channel is standardized
        CHECK(sc.latent.values().colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
        const VectorXd var = sc.latent.values().colwise().squaredNorm() / 1200.0;
        CHECK((var.array() - 1.0).abs().maxCoeff() < 1e-12);

        CHECK(std::round(sc.true_P_n.trace()) == 3);
        CHECK(std::round(sc.true_P_s.trace()) == 5);
        CHECK((sc.true_P_n * sc.true_P_n - sc.true_P_n).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((sc.true_P_n + sc.true_P_s - MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("settings are reproducible") {
    const auto a = make_setting(3, 1000, 42);
    const auto b = make_setting(3, 1000, 42);
    const auto c = make_setting(3, 1000, 43);
    CHECK(a.observed.values() == b.observed.values());
    CHECK(a.mixing == b.mixing);
    CHECK(a.observed.values() != c.observed.values());
    CHECK(make_setting(1, 1000, 42).mixing != a.mixing);
}

TEST_CASE("settings reject bad input") {
    CHECK_THROWS_AS(make_setting(5, 1000, 1), InvalidArgument);
    CHECK_THROWS_AS(make_setting(0, 1000, 1), InvalidArgument);
    CHECK_THROWS_AS(make_setting(1, 599, 1), InvalidArgument);
    CHECK_NOTHROW(make_setting(1, 600, 1));
}

TEST_CASE("remix recomputes the truth") {
    const auto sc = make_setting(4, 1000, 3);
    MatrixXd b = MatrixXd::Identity(8, 8);
    b(0, 7) = 2.0;
    b(3, 1) = -1.0;
    const auto r = remix(sc, b);
    CHECK((r.observed.values() - sc.latent.values() * b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const MatrixXd w = b.inverse();
    const MatrixXd wn = w.bottomRows(3);
    const MatrixXd want = wn.transpose() * (wn * wn.transpose()).inverse() * wn;
    CHECK((r.true_P_n - want).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(remix(sc, MatrixXd::Identity(7, 7)), DimensionMismatch);
}

TEST_CASE("stationary channels have stable interval means") {
    // psi weights give the marginal and long-run variances of each ARMA channel
    auto spread = [](const ArmaSpec& a) {
        std::vector<double> psi(3000, 0.0);
        for (std::size_t j = 0; j < psi.size(); ++j) {
            double v = j == 0 ? 1.0 : (j <= a.ma.size() ? a.ma[j - 1] : 0.0);
            for (std::size_t i = 1; i <= a.ar.size() && i <= j; ++i) v += a.ar[i - 1] * psi[j - i];
            psi[j] = v;
        }
        double s = 0, s2 = 0;
        for (double v : psi) {
            s += v;
            s2 += v * v;
        }
        return std::abs(s) / std::sqrt(s2);  // long-run sd per unit marginal sd
    };
    const Index T = 12000;
    const auto seg = Segmentation::equal(T, 6);
    for (int id : {1, 2, 3, 4}) {
        const auto comps = setting_components(id);
        const auto sc = make_setting(id, T, 11);
        for (Index j : sc.stationary_idx) {
            const double lr = spread(std::get<ArmaSpec>(comps[static_cast<std::size_t>(j)]));
            for (const auto& iv : seg) {
                const double m = interval_mean(sc.latent.values(), iv)(j);
                CHECK(std::abs(m) < 4.0 * lr / std::sqrt(static_cast<double>(iv.length())));
            }
        }
    }
}

TEST_CASE("nonstationary channels of the first setting shift their means") {
    const auto sc = make_setting(1, 12000, 2);
    const auto& z = sc.latent.values();
    auto mean = [&](Index j, Index a, Index b) { return z.col(j).segment(a, b - a).mean(); };
    CHECK(mean(5, 0, 6000) < 0);
    CHECK(mean(5, 6000, 12000) > 0);
    CHECK(mean(6, 0, 4000) < 0);
    CHECK(mean(6, 4000, 8000) > 0);
    CHECK(mean(6, 8000, 12000) < 0);
}

TEST_CASE("second setting has zero-mean heteroscedastic components") {
    const auto sc = make_setting(2, 16000, 5);
    const auto seg = Segmentation::equal(16000, 8);
    for (Index j = 5; j < 8; ++j) {
        double lo = 1e9;
        double hi = 0;
        for (const auto& iv : seg) {
            const auto s = interval_autocov(sc.latent.values(), iv, 0);
            lo = std::min(lo, s(j, j));
            hi = std::max(hi, s(j, j));
        }
        CHECK(hi > 1.5 * lo);
    }
}
