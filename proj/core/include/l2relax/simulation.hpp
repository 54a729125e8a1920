#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "l2relax/covariance.hpp"
#include "l2relax/tuning.hpp"

namespace l2relax {

struct DgpSpec {
    int dgp = 1;  // 1 i.i.d. factors, 2 AR(1) factors, 3 perturbed loadings
    Eigen::Index T = 50;
    Eigen::Index N = 100;
    Eigen::Index K = 2;
    double sigma_u = 5.0;
    double sigma_y = 1.0;
    std::uint64_t seed = 0;

    /// Throws InvalidSpec on an unknown dgp, T < 2, K < 1, N not a multiple
    /// of K, or negative noise scales.
    void validate() const;
    [[nodiscard]] Eigen::Index group_size() const noexcept { return N / K; }
};

/// Tridiagonal K×K core: diagonal (k + 1)/2 for k = 1..K, off-diagonal 0.1.
Matrix psi_core(Eigen::Index k);

/// [(Ψco)⁻¹1_K] ⊗ 1_{N₁} / [N₁ 1′(Ψco)⁻¹1_K].
Vector dgp_oracle_weights(const Matrix& core, Eigen::Index n, Eigen::Index k);

/// Ψ = Ψco ⊗ 1_{N₁}1′_{N₁}.
Matrix psi_matrix(const Matrix& core, Eigen::Index n);
/// Loading matrix N₁^{-1/2}(Ψco)^{1/2} ⊗ 1_{N₁}1′_{N₁}, whose square is Ψ.
Matrix psi_loading(const Matrix& core, Eigen::Index n);

/// Population VC of forecast errors: (I − 1w*′)Ψ(I − w*1′) + σ_y²11′ + σ_u²I.
Matrix dgp_population_vc(const DgpSpec& spec);

/// T + 1 rows of (f_t, y_{t+1}); the last row is the fresh evaluation pair.
/// Replication r draws from RngStream(spec.seed, r).
Panel generate_dgp(const DgpSpec& spec, std::uint64_t replication = 0);

/// w*′[Ψ − Ω + Ω(Ψ+Ω)⁻¹Ω]w* / (w*′[Ω − Ω(Ψ+Ω)⁻¹Ω]w* + σ_y²).
double compute_snr(const Matrix& psi, const Matrix& omega_u, const Vector& w_star, double sigma_y);
/// SNR for the DGP's own Ψ, Ω_u and w*.
double compute_snr(const DgpSpec& spec);

struct Ff5Params {
    Vector mu_f;
    Matrix cov_f;
    Vector mu_lambda;
    Matrix cov_lambda;
};

struct Ff5Spec {
    Ff5Params params;
    Matrix cov_u;  // empty means 25·I
    Eigen::Index N = 100;
    Eigen::Index T = 240;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Load one parameter block ("size_bm", "size_inv" or "size_op") from the
/// bundled JSON file. Matrices are symmetrised on load.
Ff5Params load_ff5_params(const std::filesystem::path& file, std::string_view sort);
/// Directory holding the bundled parameter file: $L2RELAX_DATA_DIR if set,
/// otherwise the build-time location.
std::filesystem::path default_data_dir();

/// r_{it} = λ′_iη_t + u_{it}: loadings drawn once, factors and noise per period.
/// Replication r draws from RngStream(spec.seed, r).
Matrix generate_ff5(const Ff5Spec& spec, std::uint64_t replication = 0);

struct BiasVariancePoint {
    double tau = 0.0;
    double bias2_w1 = 0.0;
    double var_w1 = 0.0;
    double mse_w1 = 0.0;
    double mse_yhat = 0.0;
};

struct BiasVarianceDesign {
    Eigen::Index N = 20;
    Eigen::Index T = 100;
    double noise_sd = 0.5;
};

/// Monte Carlo bias/variance of ŵ₁ and forecast MSE of sample-VC ℓ2-relaxation
/// over the grid. Replication r draws from rng.substream(r).
std::vector<BiasVariancePoint> bias_variance_sweep(const RngStream& rng, const TuningGrid& grid, int reps,
                                                   const BiasVarianceDesign& design = {}, int jobs = 1);

}  // namespace l2relax
