#include "l2relax/simulation.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "l2relax/error.hpp"
#include "l2relax/parallel.hpp"

#ifndef L2RELAX_DEFAULT_DATA_DIR
#define L2RELAX_DEFAULT_DATA_DIR "share/l2relax"
#endif

namespace l2relax {

namespace {

// Substream tags, fixed so that adding a draw never shifts another one.
constexpr std::uint64_t kTagRho = 1;
constexpr std::uint64_t kTagPerturb = 2;
constexpr std::uint64_t kTagFactor = 3;
constexpr std::uint64_t kTagNoise = 4;
constexpr std::uint64_t kTagTarget = 5;
constexpr std::uint64_t kTagLoading = 6;

std::vector<std::string> unit_labels(Eigen::Index n, const char* prefix) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

}  // namespace

void DgpSpec::validate() const {
    if (dgp < 1 || dgp > 3) fail(ErrorKind::InvalidSpec, "dgp must be 1, 2 or 3");
    if (T < 2) fail(ErrorKind::InvalidSpec, "T must be >= 2");
    if (K < 1 || N < K) fail(ErrorKind::InvalidSpec, "need 1 <= K <= N");
    if (N % K != 0) fail(ErrorKind::InvalidSpec, "N must be divisible by K (equal group sizes)");
    if (!(sigma_u >= 0.0) || !(sigma_y >= 0.0)) fail(ErrorKind::InvalidSpec, "noise scales must be >= 0");
}

Matrix psi_core(Eigen::Index k) {
    if (k < 1) fail(ErrorKind::InvalidSpec, "psi_core: K must be >= 1");
    Matrix c = Matrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c(i, i) = static_cast<double>(i + 2) / 2.0;
        if (i + 1 < k) c(i, i + 1) = c(i + 1, i) = 0.1;
    }
    return c;
}

Vector dgp_oracle_weights(const Matrix& core, Eigen::Index n, Eigen::Index k) {
    if (core.rows() != k || core.cols() != k) fail(ErrorKind::ContractViolation, "dgp_oracle_weights: core must be K×K");
    if (k < 1 || n % k != 0) fail(ErrorKind::InvalidSpec, "dgp_oracle_weights: N must be divisible by K");
    const Eigen::Index n1 = n / k;
    const Vector a = solve_linear(core, Vector::Ones(k)).x;
    const double denom = static_cast<double>(n1) * a.sum();
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = a(i / n1) / denom;
    return w;
}

Matrix psi_matrix(const Matrix& core, Eigen::Index n) {
    const Eigen::Index k = core.rows();
    const Eigen::Index n1 = n / k;
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = core(i / n1, j / n1);
    return out;
}

Matrix psi_loading(const Matrix& core, Eigen::Index n) {
    const Eigen::Index k = core.rows();
    const Eigen::Index n1 = n / k;
    const Matrix root = psd_sqrt(core) / std::sqrt(static_cast<double>(n1));
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = root(i / n1, j / n1);
    return out;
}

Matrix dgp_population_vc(const DgpSpec& spec) {
    spec.validate();
    const Matrix core = psi_core(spec.K);
    const Vector w = dgp_oracle_weights(core, spec.N, spec.K);
    const Matrix psi = psi_matrix(core, spec.N);
    const Eigen::Index n = spec.N;
    const Matrix a = Matrix::Identity(n, n) - Vector::Ones(n) * w.transpose();
    Matrix s = a * psi * a.transpose();
    s.array() += spec.sigma_y * spec.sigma_y;
    s.diagonal().array() += spec.sigma_u * spec.sigma_u;
    return 0.5 * (s + s.transpose());
}

Panel generate_dgp(const DgpSpec& spec, std::uint64_t replication) {
    spec.validate();
    const Eigen::Index n = spec.N;
    const Eigen::Index rows = spec.T + 1;
    const RngStream root(spec.seed, replication);
    const Matrix core = psi_core(spec.K);
    const Vector w_star = dgp_oracle_weights(core, n, spec.K);
    const Matrix load = psi_loading(core, n);

    RngStream factor_rng = root.substream(kTagFactor);
    Matrix eta(rows, n);
    if (spec.dgp == 2) {
        RngStream rho_rng = root.substream(kTagRho);
        Vector rho(n);
        for (Eigen::Index i = 0; i < n; ++i) rho(i) = rho_rng.uniform(0.0, 0.9);
        Vector prev(n);
        for (Eigen::Index i = 0; i < n; ++i) prev(i) = factor_rng.normal();
        for (Eigen::Index t = 0; t < rows; ++t) {
            for (Eigen::Index i = 0; i < n; ++i)
                eta(t, i) = rho(i) * prev(i) + std::sqrt(1.0 - rho(i) * rho(i)) * factor_rng.normal();
            prev = eta.row(t).transpose();
        }
    } else {
        eta = standard_normal(factor_rng, rows, n);
    }

    Matrix f_load = load;
    if (spec.dgp == 3) {
        RngStream perturb_rng = root.substream(kTagPerturb);
        const double sd = std::pow(static_cast<double>(spec.group_size()), -0.25);
        f_load += sd * standard_normal(perturb_rng, n, n);
    }

    RngStream noise_rng = root.substream(kTagNoise);
    RngStream target_rng = root.substream(kTagTarget);
    Panel p;
    p.values = eta * f_load.transpose() + spec.sigma_u * standard_normal(noise_rng, rows, n);
    Vector y = eta * (load.transpose() * w_star);
    for (Eigen::Index t = 0; t < rows; ++t) y(t) += spec.sigma_y * target_rng.normal();
    p.target = std::move(y);
    p.unit_labels = unit_labels(n, "f");
    return p;
}

double compute_snr(const Matrix& psi, const Matrix& omega_u, const Vector& w_star, double sigma_y) {
    const Eigen::Index n = psi.rows();
    if (omega_u.rows() != n || w_star.size() != n) fail(ErrorKind::ContractViolation, "compute_snr: dimension mismatch");
    const Matrix total = psi + omega_u;
    Matrix proj(n, n);
    for (Eigen::Index j = 0; j < n; ++j) proj.col(j) = solve_linear(total, omega_u.col(j)).x;
    const Matrix shrink = omega_u * proj;  // Ω(Ψ+Ω)⁻¹Ω
    const double signal = w_star.dot((psi - omega_u + shrink) * w_star);
    const double noise = w_star.dot((omega_u - shrink) * w_star) + sigma_y * sigma_y;
    if (!(noise > 0.0)) fail(ErrorKind::DegenerateVariance, "compute_snr: zero noise variance");
    return signal / noise;
}

double compute_snr(const DgpSpec& spec) {
    spec.validate();
    const Matrix core = psi_core(spec.K);
    const Matrix psi = psi_matrix(core, spec.N);
    const Matrix omega = spec.sigma_u * spec.sigma_u * Matrix::Identity(spec.N, spec.N);
    return compute_snr(psi, omega, dgp_oracle_weights(core, spec.N, spec.K), spec.sigma_y);
}

void Ff5Spec::validate() const {
    const auto k = params.mu_f.size();
    if (k < 1 || params.cov_f.rows() != k || params.cov_f.cols() != k || params.mu_lambda.size() != k ||
        params.cov_lambda.rows() != k || params.cov_lambda.cols() != k)
        fail(ErrorKind::InvalidSpec, "FF5 parameters have inconsistent dimensions");
    if (N < 1 || T < 1) fail(ErrorKind::InvalidSpec, "FF5 simulation needs N >= 1 and T >= 1");
    if (cov_u.size() != 0 && (cov_u.rows() != N || cov_u.cols() != N))
        fail(ErrorKind::InvalidSpec, "cov_u must be N×N");
}

namespace {

Vector json_vector(const nlohmann::json& j, const char* key) {
    const auto& a = j.at(key);
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

Matrix json_matrix(const nlohmann::json& j, const char* key) {
    const auto& a = j.at(key);
    const auto rows = static_cast<Eigen::Index>(a.size());
    Matrix m(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = a[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != rows) fail(ErrorKind::Parse, std::string(key) + " must be square");
        for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return 0.5 * (m + m.transpose());
}

}  // namespace

Ff5Params load_ff5_params(const std::filesystem::path& file, std::string_view sort) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::Io, "cannot open " + file.string());
    Ff5Params p;
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        const std::string key(sort);
        if (!j.contains(key)) fail(ErrorKind::InvalidSpec, "unknown FF5 sort '" + key + "' (size_bm, size_inv, size_op)");
        p.mu_f = json_vector(j, "mu_f");
        p.cov_f = json_matrix(j, "cov_f");
        p.mu_lambda = json_vector(j.at(key), "mu_lambda");
        p.cov_lambda = json_matrix(j.at(key), "cov_lambda");
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, file.string() + ": " + e.what());
    }
    return p;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("L2RELAX_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return L2RELAX_DEFAULT_DATA_DIR;
}

Matrix generate_ff5(const Ff5Spec& spec, std::uint64_t replication) {
    spec.validate();
    const RngStream root(spec.seed, replication);
    RngStream loading_rng = root.substream(kTagLoading);
    RngStream factor_rng = root.substream(kTagFactor);
    RngStream noise_rng = root.substream(kTagNoise);
    const Matrix lambda = mvn_sample(loading_rng, spec.params.mu_lambda, spec.params.cov_lambda, spec.N);
    const Matrix factors = mvn_sample(factor_rng, spec.params.mu_f, spec.params.cov_f, spec.T);
    Matrix noise;
    if (spec.cov_u.size() == 0)
        noise = 5.0 * standard_normal(noise_rng, spec.T, spec.N);
    else
        noise = mvn_sample(noise_rng, Vector::Zero(spec.N), spec.cov_u, spec.T);
    return factors * lambda.transpose() + noise;
}

std::vector<BiasVariancePoint> bias_variance_sweep(const RngStream& rng, const TuningGrid& grid, int reps,
                                                   const BiasVarianceDesign& design, int jobs) {
    if (reps < 2) fail(ErrorKind::InvalidSpec, "bias_variance_sweep needs reps >= 2");
    const Eigen::Index n = design.N;
    const Eigen::Index t_len = design.T;
    if (n < 2 || n % 2 != 0 || t_len < 2) fail(ErrorKind::InvalidSpec, "bias-variance design needs even N and T >= 2");
    const Eigen::Index half = n / 2;
    Vector w_true(n);
    // Group weights 0.09 and 0.01 at N = 20, scaled to sum to one for other N.
    const double hi = 0.9 / static_cast<double>(half);
    const double lo = 0.1 / static_cast<double>(half);
    w_true.head(half).setConstant(hi);
    w_true.tail(n - half).setConstant(lo);

    const std::size_t g = grid.size();
    std::vector<double> w1(static_cast<std::size_t>(reps) * g);
    std::vector<double> sq(static_cast<std::size_t>(reps) * g);

    parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
        RngStream s = rng.substream(r);
        Matrix f = standard_normal(s, t_len + 1, n);
        f.leftCols(half).array() += 1.0;
        Vector y = f * w_true;
        for (Eigen::Index t = 0; t < t_len + 1; ++t) y(t) += design.noise_sd * s.normal();
        const Matrix errors = (-f.topRows(t_len)).colwise() + y.head(t_len);
        const CovEstimate cov = sample_vc(errors);
        const std::vector<WeightSolution> path = weight_path(cov, grid.span());
        for (std::size_t k = 0; k < g; ++k) {
            const double yhat = path[k].w.dot(f.row(t_len));
            w1[r * g + k] = path[k].w(0);
            sq[r * g + k] = (y(t_len) - yhat) * (y(t_len) - yhat);
        }
    });

    std::vector<BiasVariancePoint> out(g);
    for (std::size_t k = 0; k < g; ++k) {
        CompensatedSum mean_acc;
        CompensatedSum sq_acc;
        for (int r = 0; r < reps; ++r) {
            mean_acc.add(w1[static_cast<std::size_t>(r) * g + k]);
            sq_acc.add(sq[static_cast<std::size_t>(r) * g + k]);
        }
        const double mean = mean_acc.value() / reps;
        CompensatedSum var_acc;
        CompensatedSum mse_acc;
        for (int r = 0; r < reps; ++r) {
            const double d = w1[static_cast<std::size_t>(r) * g + k] - mean;
            const double e = w1[static_cast<std::size_t>(r) * g + k] - w_true(0);
            var_acc.add(d * d);
            mse_acc.add(e * e);
        }
        BiasVariancePoint& p = out[k];
        p.tau = grid[k];
        p.bias2_w1 = (mean - w_true(0)) * (mean - w_true(0));
        p.var_w1 = var_acc.value() / reps;
        p.mse_w1 = mse_acc.value() / reps;
        p.mse_yhat = sq_acc.value() / reps;
    }
    return out;
}

}  // namespace l2relax
