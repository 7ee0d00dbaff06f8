#include "ssa/simulation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <cassert>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ssa/serialize.hpp"
#include "ssa/subspace.hpp"

namespace ssa::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::normal_distribution<double> normal(double variance) {
    return std::normal_distribution<double>(0.0, std::sqrt(variance));
}

void standardize(VectorXd& v) {
    const double m = v.mean();
    v.array() -= m;
    const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
    if (sd > 0) v /= sd;
}

}  // namespace

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

bool is_stationary_ar(std::span<const double> ar) {
    const auto n = static_cast<Index>(ar.size());
    if (n == 0) return true;
    MatrixXd companion = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
    for (Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<MatrixXd> es(companion, false);
    return es.eigenvalues().cwiseAbs().maxCoeff() < 1.0 - 1e-12;
}

VectorXd gen_arma(const ArmaSpec& spec, Index T, std::mt19937_64& rng, Index burn_in) {
    if (!(spec.sigma2 > 0)) throw InvalidArgument("ARMA innovation variance must be positive");
    if (!is_stationary_ar(spec.ar)) throw InvalidArgument("AR coefficients are not stationary");
    if (T < 1 || burn_in < 0) throw InvalidArgument("invalid ARMA length");
    const Index n = T + burn_in;
    const auto p = static_cast<Index>(spec.ar.size());
    const auto q = static_cast<Index>(spec.ma.size());
    auto dist = normal(spec.sigma2);
    std::vector<double> e(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n), 0.0);
    for (auto& v : e) v = dist(rng);
    for (Index t = 0; t < n; ++t) {
        double v = e[static_cast<std::size_t>(t)];
        for (Index j = 1; j <= q && t - j >= 0; ++j)
            v += spec.ma[static_cast<std::size_t>(j - 1)] * e[static_cast<std::size_t>(t - j)];
        for (Index i = 1; i <= p && t - i >= 0; ++i)
            v += spec.ar[static_cast<std::size_t>(i - 1)] * x[static_cast<std::size_t>(t - i)];
        x[static_cast<std::size_t>(t)] = v;
    }
    return Eigen::Map<const VectorXd>(x.data() + burn_in, T);
}

VectorXd gen_arma(const ArmaSpec& spec, Index T, std::uint64_t seed, Index burn_in) {
    auto rng = make_rng(seed, 0);
    return gen_arma(spec, T, rng, burn_in);
}

double tvvar_h(double beta, Index t, Index T) {
    const double u = static_cast<double>(t) / static_cast<double>(T);
    return 10.0 - 10.0 * std::sin(beta * kPi * u + kPi / 6.0) * (1.0 + u);
}

VectorXd tvvar_path(double alpha, double beta, std::span<const double> eps) {
    if (alpha < 0) throw InvalidArgument("TV-VAR alpha must be nonnegative");
    const auto T = static_cast<Index>(eps.size());
    VectorXd x(T);
    double prev = 0.0;
    for (Index t = 1; t <= T; ++t) {
        const double h = tvvar_h(beta, t, T);
        const double h2 = h * h + alpha * prev * prev;
        assert(h2 >= 0);
        prev = std::sqrt(h2) * eps[static_cast<std::size_t>(t - 1)];
        x(t - 1) = prev;
    }
    return x;
}

VectorXd gen_tvvar(double alpha, double beta, Index T, std::uint64_t seed) {
    auto rng = make_rng(seed, 0);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> eps(static_cast<std::size_t>(T));
    for (auto& v : eps) v = dist(rng);
    return tvvar_path(alpha, beta, eps);
}

VectorXd gen_tvar1(double sigma2, Index T, std::uint64_t seed) {
    if (sigma2 < 0) throw InvalidArgument("TV-AR innovation variance must be nonnegative");
    VectorXd x = VectorXd::Zero(T);
    if (sigma2 == 0) return x;
    auto rng = make_rng(seed, 0);
    auto dist = normal(sigma2);
    double prev = 0.0;
    for (Index t = 1; t <= T; ++t) {
        const double a = 0.5 * std::cos(2.0 * kPi * static_cast<double>(t) / static_cast<double>(T));
        prev = a * prev + dist(rng);
        x(t - 1) = prev;
    }
    return x;
}

std::vector<Index> block_boundaries(std::span<const double> fractions, Index T) {
    if (fractions.empty()) throw InvalidArgument("need at least one block");
    double total = 0;
    for (double f : fractions) {
        if (!(f > 0)) throw InvalidArgument("block fractions must be positive");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("block fractions must sum to 1");
    std::vector<Index> starts{0};
    for (std::size_t i = 0; i + 1 < fractions.size(); ++i) {
        // the 1e-9 guard keeps floor(T * (1.0/3)) from landing one below floor(T/3)
        const auto len = static_cast<Index>(std::floor(fractions[i] * static_cast<double>(T) + 1e-9));
        starts.push_back(starts.back() + len);
    }
    starts.push_back(T);
    for (std::size_t i = 0; i + 1 < starts.size(); ++i)
        if (starts[i + 1] <= starts[i]) throw InvalidArgument("a block would be empty for this T");
    return starts;
}

VectorXd gen_blockwise(std::span<const Block> blocks, Index T, std::uint64_t seed, Index burn_in) {
    std::vector<double> fr;
    for (const auto& b : blocks) fr.push_back(b.fraction);
    const auto starts = block_boundaries(fr, T);
    VectorXd x(T);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        auto rng = make_rng(seed, i + 1);
        const Index len = starts[i + 1] - starts[i];
        x.segment(starts[i], len) = gen_arma(blocks[i].process, len, rng, burn_in);
    }
    return x;
}

VectorXd generate(const ProcessSpec& spec, Index T, std::uint64_t seed) {
    struct Visitor {
        Index T;
        std::uint64_t seed;
        VectorXd operator()(const ArmaSpec& s) const { return gen_arma(s, T, seed); }
        VectorXd operator()(const TvVarSpec& s) const { return gen_tvvar(s.alpha, s.beta, T, seed); }
        VectorXd operator()(const TvArSpec& s) const { return gen_tvar1(s.sigma2, T, seed); }
        VectorXd operator()(const BlockwiseSpec& s) const { return gen_blockwise(s.blocks, T, seed); }
        VectorXd operator()(const LevelShiftSpec& s) const {
            if (s.levels.size() != s.fractions.size())
                throw InvalidArgument("level shift needs one fraction per level");
            VectorXd x = gen_arma(s.noise, T, seed);
            const auto starts = block_boundaries(s.fractions, T);
            for (std::size_t i = 0; i < s.levels.size(); ++i)
                x.segment(starts[i], starts[i + 1] - starts[i]).array() += s.levels[i];
            return x;
        }
    };
    return std::visit(Visitor{T, seed}, spec);
}

std::vector<ProcessSpec> setting_components(int id, const SettingOptions& opts) {
    const double third = 1.0 / 3.0;
    const LevelShiftSpec s1_n1{ArmaSpec{{0.7}, {}, 1.0}, {-1.52, 1.38}, {0.5, 0.5}};
    const LevelShiftSpec s1_n2{ArmaSpec{{0.5}, {}, 1.0}, {-0.75, 0.84, -0.45}, {third, third, third}};
    const TvArSpec s3_n1{0.8649};

    const std::vector<ProcessSpec> s3_stationary{
        ArmaSpec{{0.14, 0.45}, {0.72, 0.24}, 1.0},
        ArmaSpec{{0.34, 0.27, 0.18}, {}, 1.0},
        ArmaSpec{{0.34, 0.27, 0.18}, {0.72, 0.15}, 1.0},
        ArmaSpec{{0.11, 0.58}, {}, 1.0},
        ArmaSpec{{0.1, 0.1, 0.1, 0.1, 0.1}, {}, 1.0},
    };

    switch (id) {
        case 1:
            return {ArmaSpec{{}, {0.72, 0.24}, 1.0},
                    ArmaSpec{{0.34, 0.27, 0.18}, {}, 1.0},
                    ArmaSpec{{0.34, 0.27, 0.18}, {0.72, 0.15}, 1.0},
                    ArmaSpec{{0.11, 0.58}, {}, 1.0},
                    ArmaSpec{{}, {0.78}, 1.0},
                    s1_n1,
                    s1_n2,
                    opts.setting1_n3};
        case 2:
            return {ArmaSpec{{}, {0.72}, 1.0},
                    ArmaSpec{{}, {0.34}, 1.0},
                    ArmaSpec{{}, {0.72, 0.15}, 1.0},
                    ArmaSpec{{}, {0.11, 0.58}, 1.0},
                    ArmaSpec{{}, {0.34, 0.27, 0.18}, 1.0},
                    TvVarSpec{0.2, 0.5},
                    TvVarSpec{0.1, 1.0},
                    TvVarSpec{0.05, 0.01}};
        case 3: {
            auto c = s3_stationary;
            c.push_back(s3_n1);
            c.push_back(BlockwiseSpec{{Block{ArmaSpec{{0.5}, {}, 1.0}, third},
                                       Block{ArmaSpec{{0.2}, {}, opts.setting3_n2_var2}, third},
                                       Block{ArmaSpec{{0.8}, {}, opts.setting3_n2_var3}, third}}});
            c.push_back(BlockwiseSpec{{Block{ArmaSpec{{}, {0.5}, 1.0}, 0.5},
                                       Block{ArmaSpec{{}, {0.9, 0.17}, opts.setting3_n3_var2}, 0.5}}});
            return c;
        }
        case 4: {
            auto c = s3_stationary;
            c.push_back(s1_n1);
            c.push_back(TvVarSpec{0.1, 1.0});
            c.push_back(s3_n1);
            return c;
        }
        default: throw InvalidArgument("setting must be 1, 2, 3 or 4 (got " + std::to_string(id) + ")");
    }
}

MatrixXd random_orthogonal(Index p, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    MatrixXd g(p, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < p; ++i) g(i, j) = dist(rng);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(p, p);
    const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < p; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

namespace {

void fill_projections(SimScenario& sc) {
    const MatrixXd w = sc.mixing.inverse();
    MatrixXd wn(static_cast<Index>(sc.nonstationary_idx.size()), w.cols());
    MatrixXd ws(static_cast<Index>(sc.stationary_idx.size()), w.cols());
    for (std::size_t i = 0; i < sc.nonstationary_idx.size(); ++i)
        wn.row(static_cast<Index>(i)) = w.row(sc.nonstationary_idx[i]);
    for (std::size_t i = 0; i < sc.stationary_idx.size(); ++i)
        ws.row(static_cast<Index>(i)) = w.row(sc.stationary_idx[i]);
    sc.true_P_n = projection_matrix(wn);
    sc.true_P_s = projection_matrix(ws);
}

}  // namespace

SimScenario make_setting(int id, Index T, std::uint64_t seed, const SettingOptions& opts) {
    const auto comps = setting_components(id, opts);
    if (T < 600) throw InvalidArgument("settings need T >= 600 (got " + std::to_string(T) + ")");
    const auto p = static_cast<Index>(comps.size());

    MatrixXd z(T, p);
    for (Index j = 0; j < p; ++j) {
        // stream layout: one seed per (setting, channel); channel generators derive sub-streams from it
        auto stream_rng = make_rng(seed, 1000 * static_cast<std::uint64_t>(id) + static_cast<std::uint64_t>(j));
        VectorXd v = generate(comps[static_cast<std::size_t>(j)], T, stream_rng());
        standardize(v);
        z.col(j) = v;
    }
    auto mix_rng = make_rng(seed, 1000 * static_cast<std::uint64_t>(id) + 999);
    MatrixXd a = random_orthogonal(p, mix_rng);

    std::vector<std::string> latent_names;
    for (Index j = 0; j < 5; ++j) latent_names.push_back("s" + std::to_string(j + 1));
    for (Index j = 0; j < 3; ++j) latent_names.push_back("n" + std::to_string(j + 1));

    MatrixXd x = z * a.transpose();
    SimScenario sc{id,
                   seed,
                   3,
                   MultivariateSeries(std::move(z), latent_names),
                   std::move(a),
                   MultivariateSeries(std::move(x)),
                   {0, 1, 2, 3, 4},
                   {5, 6, 7},
                   {},
                   {}};
    fill_projections(sc);
    return sc;
}

SimScenario remix(const SimScenario& sc, const MatrixXd& mixing) {
    if (mixing.rows() != sc.mixing.rows() || mixing.cols() != sc.mixing.cols())
        throw DimensionMismatch("mixing matrix has the wrong size");
    SimScenario out = sc;
    out.mixing = mixing;
    out.observed = MultivariateSeries(sc.latent.values() * mixing.transpose());
    fill_projections(out);
    return out;
}

void write_scenario(const SimScenario& sc, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_csv(sc.observed, (std::filesystem::path(dir) / "observed.csv").string());
    std::ofstream f(std::filesystem::path(dir) / "manifest.json", std::ios::binary);
    if (!f) throw Error("cannot write manifest in '" + dir + "'");
    f << scenario_manifest(sc).dump(2) << '\n';
}

}  // namespace ssa::sim
