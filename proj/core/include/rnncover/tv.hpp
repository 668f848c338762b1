#pragma once

#include "rnncover/numerics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rnncover {

enum class TvMethod { exact_1d, gaussian_pair, mixture_mc, coupling_lower };
const char* tv_method_name(TvMethod m);

/// TV distance estimate. value lies in [0, 1] by construction of each
/// estimator (means of [0, 1] terms, closed forms, normalized
/// quadrature); nothing is clamped after the fact. stderr_ is 0 for
/// deterministic routes.
struct TVEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    TvMethod method = TvMethod::exact_1d;
};

using Density1D = std::function<double(double)>;

/// Half L1 distance between two 1-D densities by composite Simpson
/// quadrature on [lo, hi] with the given (even) interval count.
/// Each density must integrate to at least 1 - 1e-3 over the window,
/// otherwise the window does not capture the mass and a
/// std::domain_error is thrown.
TVEstimate tv_numeric_1d(const Density1D& f, const Density1D& g, double lo,
                         double hi, std::size_t intervals = 4096);

using Density2D = std::function<double(double, double)>;

/// Half L1 distance between two 2-D densities by tensor-product Simpson
/// quadrature on [lo0, hi0] x [lo1, hi1] with `intervals` subdivisions
/// per axis. Same mass-coverage contract as tv_numeric_1d.
TVEstimate tv_numeric_2d(const Density2D& f, const Density2D& g, double lo0,
                         double hi0, double lo1, double hi1,
                         std::size_t intervals = 512);

/// Exact TV between N(mu1, sigma^2 I) and N(mu2, sigma^2 I):
/// erf(|mu1-mu2| / (2 sqrt(2) sigma)). sigma = 0 degenerates to point
/// masses: 0 if the means are identical, else 1.
TVEstimate tv_gaussian_pair(const RealVec& mu1, const RealVec& mu2,
                            double sigma);

/// Distribution given by a sampler and, when available, a density
/// w.r.t. its reference measure. Estimators that need the density
/// reject handles without one.
struct DistributionHandle {
    std::size_t dim = 0;
    std::function<RealVec(RngStream&)> sample;
    std::function<double(const RealVec&)> density;
};

/// Importance-form MC estimate of TV between two handles with
/// densities: draws x from the balanced mixture (n/2 points from each
/// side) and averages |p-q|/(p+q), which is unbiased for TV and keeps
/// every term inside [0, 1]. The reported stderr is the pooled
/// sample-variance estimate, a conservative (upper) bound under the
/// balanced draw split.
///
/// The stream is taken by value and each sample i uses substream(i), so
/// estimates are schedule-independent and two calls with the same
/// stream see identical sample points (common random numbers).
TVEstimate tv_mixture_mc(const DistributionHandle& a,
                         const DistributionHandle& b, std::size_t n,
                         RngStream rng);

/// Exact TV of two distributions on a shared atom list: half the L1
/// distance between the weight vectors.
double tv_discrete_shared(const RealVec& w1, const RealVec& w2);

/// Disagreement frequency of a coupled sampler. For any coupling this
/// upper-bounds the TV of the marginals (so TV is lower); for a maximal
/// coupling it matches TV up to MC error. stderr is the binomial
/// estimate.
TVEstimate coupling_disagreement(
    const std::function<std::pair<RealVec, RealVec>(RngStream&)>& coupled,
    std::size_t n, RngStream rng);

/// Maximal coupling of N(mu1, sigma^2 I) and N(mu2, sigma^2 I):
/// disagreement probability equals their TV. Coupled draws share the
/// component orthogonal to mu2-mu1 and maximally couple the 1-D
/// projection by rejection. Agreeing draws are bitwise equal.
std::function<std::pair<RealVec, RealVec>(RngStream&)>
maximal_coupling_gaussian_pair(RealVec mu1, RealVec mu2, double sigma);

/// Isotropic Gaussian mixture: sum_i weights[i] N(centers[i], sigma^2 I).
/// Closed under coordinate marginals and under products with an
/// independent same-sigma Gaussian factor, which is what the
/// certification batteries lean on.
struct GaussianMixture {
    std::size_t dim = 0;
    double sigma = 0.0;
    std::vector<RealVec> centers;
    RealVec weights;

    double density(const RealVec& x) const;
    double density1d(double x) const; // dim == 1 convenience
    RealVec sample(RngStream& rng) const;
    DistributionHandle handle() const;
};

/// Validates shapes, sigma > 0 and weights (empty = uniform; otherwise
/// nonnegative, summing to 1 within 1e-9, stored normalized).
GaussianMixture make_mixture(std::size_t dim, double sigma,
                             std::vector<RealVec> centers,
                             RealVec weights = {});

/// Marginal over the leading dim-1 coordinates / the trailing one.
GaussianMixture marginal_first(const GaussianMixture& m);
GaussianMixture marginal_last(const GaussianMixture& m);

/// Product with an independent N(center, sigma^2) factor (same sigma as
/// the mixture) appended as a new last coordinate.
GaussianMixture append_gaussian(const GaussianMixture& m, double center);

/// Product with a Dirac at y appended as a new last coordinate. The
/// density is w.r.t. Lebesgue x delta_y, so TV against another handle
/// with the *same* appended y is well defined and the MC estimator
/// applies unchanged.
DistributionHandle append_dirac(const GaussianMixture& m, double y);

/// Exact density and sampler of phi(X), X ~ N(m, s^2), phi the centered
/// sigmoid. Supported on (-1/2, 1/2); change of variables gives
/// density(y) = N(phiinv(y); m, s^2) / (1/4 - y^2). Requires s > 0.
DistributionHandle sigmoid_pushforward_gaussian(double m, double s);
double sigmoid_pushforward_density(double y, double m, double s);

/// Extended metrics over componentwise base distances rho_i >= 0:
/// max_component = max_i rho_i, l2_mean = sqrt(mean_i rho_i^2) (so
/// l2_mean <= max_component always).
enum class ExtendedMode { max_component, l2_mean };
double extended_metric(const RealVec& componentwise, ExtendedMode mode);

/// One certified comparison: the claim is lhs <= rhs (+ tolerance) or
/// |lhs - rhs| <= tolerance depending on the battery.
struct CertRow {
    long long trial_id = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs_stderr = 0.0;
    bool pass = false;
};

struct CertReport {
    std::string check;
    std::vector<CertRow> rows;
    bool all_pass() const;
};

/// CSV: comment line with config hash and seed, then
/// trial_id,lhs,rhs,lhs_stderr,rhs_stderr,pass.
std::string cert_report_csv(const CertReport& report,
                            std::uint64_t config_hash, std::uint64_t seed);

struct TvCheckOptions {
    std::size_t mc_samples = 100000;
    double stderr_mult = 3.0;
    std::size_t quad_intervals = 4096;
    std::size_t threads = 1;
};

/// Data-processing certification: trials rotate through four scenario
/// families (discrete atoms through an output-noise sigmoid layer,
/// Gaussians through a deterministic invertible sigmoid layer,
/// Gaussians through a noisy scaled-rotation affine map, and an
/// identity map estimated twice with common random numbers), asserting
/// TV(map(mu), map(nu)) <= TV(mu, nu) + stderr_mult * stderr per trial.
/// Dimensions stay <= 2.
CertReport check_dpi(std::size_t trials, const TvCheckOptions& opts,
                     RngStream rng);

/// Leading/trailing-coordinate contraction: per trial, the max of the
/// First- and Last-marginal TVs must not exceed the joint TV plus
/// tolerance. Scenarios use closed forms, 1-D/2-D quadrature and exact
/// discrete projections, so rows are deterministic.
CertReport check_first_last_contraction(std::size_t trials,
                                        const TvCheckOptions& opts,
                                        RngStream rng);

/// Concatenation with a shared independent component preserves TV:
/// |TV(mu x nu, mu' x nu) - TV(mu, mu')| <= stderr_mult * stderr per
/// trial, with Gaussian and Dirac appended components (common random
/// numbers couple the two estimates) plus exact discrete rows.
CertReport check_concat_preservation(std::size_t trials,
                                     const TvCheckOptions& opts,
                                     RngStream rng);

} // namespace rnncover
