#pragma once

#include "rnncover/networks.hpp"
#include "rnncover/tv.hpp"

#include <cstdint>
#include <vector>

namespace rnncover {

/// Finite network class: a fixed architecture and weight template in
/// which the listed coordinates (flattened layer-major, row-major within
/// each layer) range over a shared value grid. Class size is
/// |grid|^|free_indices|; members enumerate lexicographically with the
/// first free coordinate most significant.
struct GridClassSpec {
    std::vector<std::size_t> dims;
    std::vector<Matrix> base_weights;
    std::vector<std::size_t> free_indices;
    RealVec grid;
    std::size_t cap = 100000;
};

std::vector<MLPSpec> enumerate_grid_class(const GridClassSpec& spec);

/// An epsilon-cover of a finite metric space given by its distance
/// matrix. certified records the post-hoc validation that every point
/// is within radius of some center.
struct CoverResult {
    std::vector<std::size_t> center_indices;
    double radius = 0.0;
    bool certified = false;
};

/// Greedy set cover: repeatedly picks the point covering the most
/// uncovered points within epsilon (ties to the smallest index). The
/// result is a valid cover whose size upper-bounds the minimal one,
/// which is the direction the covering-number machinery consumes.
/// Requires a symmetric matrix with zero diagonal.
CoverResult empirical_cover_greedy(const std::vector<RealVec>& dist,
                                   double epsilon);

// --- Closed-form log covering-number bounds (natural logarithms) ---

/// Single-layer class on inputs of dimension d with p outputs:
///   p (d+1) ln( 30 d^{5/2} sqrt(ln((5d - eps sigma)/(eps sigma)))
///               / (eps^{3/2} sigma^2) * ln(5d / (eps sigma)) ).
/// Requires eps > 0, 0 < sigma, and eps*sigma small enough that the
/// inner logarithms are positive (in particular sigma < 5d/eps).
double single_layer_cover_bound(std::size_t d, std::size_t p, double epsilon,
                                double sigma);

/// Composing two classes multiplies global cover sizes, so log sizes
/// add; the combined radius is the sum of the two radii.
double composition_cover_bound(double logN1, double logN2);

/// Network with w total weights, any well-defined architecture:
///   w ln w + 3w ln( 30 sqrt(5) w^2/(eps sigma) ln(5 w^2/(eps sigma)) ).
/// Requires w >= 1 and eps, sigma in (0, 1).
double multilayer_cover_bound(std::size_t w, double epsilon, double sigma);

/// Radius the recurring block must be covered at so that the T-step
/// recurrent model is covered at epsilon.
double recurrent_cover_reduction(double epsilon, std::size_t T);

/// Recurrent class bound: the multilayer bound at radius epsilon / T.
double rnn_cover_bound(std::size_t w, std::size_t T, double epsilon,
                       double sigma);

/// l2 radius of the derandomized (expectation) class induced by a TV
/// cover at epsilon of the random class: 2 B eps sqrt(q).
double ell2_cover_radius_from_tv(double B, std::size_t q, double epsilon);

/// C (wT + ln(1/delta)) / eps^2. The stated theorem range is T >= 3,
/// w >= 19, eps, delta in (0, 1/40); outside it the value is still
/// computed but in_stated_range is false.
struct LowerBound {
    double value = 0.0;
    bool in_stated_range = false;
};
LowerBound sample_complexity_lower(std::size_t w, std::size_t T,
                                   double epsilon, double delta,
                                   double C = 1.0);

/// Minimal sample size m at which the cover-based excess-risk guarantee
/// reaches epsilon: the inner accuracy is epsilon/32, the log cover is
/// the recurrent bound at radius gamma * epsilon/32, and m is found by
/// doubling plus bisection (the guarantee is monotone in m and limits
/// to epsilon/2, so the search always terminates).
struct UpperBound {
    unsigned long long m = 0;
    double log_cover = 0.0;
    double epsilon_inner = 0.0;
};
UpperBound sample_complexity_upper(std::size_t w, std::size_t T, double sigma,
                                   double epsilon, double delta, double gamma);

/// Randomized certification that TV-close noisy single-layer networks
/// have close derandomized expectations. Each trial builds a pair of
/// input-noise networks shrunk until their MC-estimated output TV is
/// below epsilon (their output laws are exact sigmoid pushforwards of
/// Gaussians, so the estimate is unbiased with known stderr), then
/// checks that the distance of the K-draw Monte Carlo means does not
/// exceed 2 B eps sqrt(q) plus stderr_mult times the combined stderr
/// (mean stderrs plus 2 B sqrt(q) times the TV stderr).
struct RadiusCheckOptions {
    std::size_t pairs = 50;
    double epsilon = 0.2;
    double B = 0.5;
    std::size_t q = 1;
    std::size_t d = 2;
    double sigma_in = 0.4;
    std::size_t mc_samples = 100000;
    std::size_t mean_draws = 100000;
    double stderr_mult = 5.0;
    std::size_t threads = 1;
};
CertReport check_mean_distance_radius(const RadiusCheckOptions& opts,
                                      RngStream rng);

/// Empirical certification of the T-fold radius inflation: any ordered
/// pair of class members whose single-application (block) laws are
/// within epsilon/T in TV on every block probe must produce recurrent
/// readout laws within epsilon on every probe sequence.
///
/// Block laws are computed exactly (quadrature over the output square;
/// the block must be single-layer with q <= 2 and nonsingular W^T W so
/// the output density is closed-form). Readout laws are path mixtures:
/// path_draws noisy state trajectories per repeat, each contributing
/// the exact conditional readout density; the TV of the two mixtures is
/// 1-D quadrature, and path_repeats independent repeats give the
/// stderr. Trailing output smoothing is omitted: it is a shared map of
/// both laws, so it can only shrink their TV.
struct RecurrentCoverJob {
    GridClassSpec grid;
    std::vector<std::size_t> cover_subset; // empty = every member
    std::size_t q = 2;
    std::size_t p = 1;
    std::size_t T = 3;
    double sigma = 0.5;
    double epsilon = 0.8;
    std::vector<RealVec> block_probes;
    std::vector<SequenceInput> seq_probes;
    std::size_t path_draws = 512;
    std::size_t path_repeats = 4;
    std::size_t quad_intervals = 4096;
    std::size_t block_quad_intervals = 512;
    double stderr_mult = 3.0;
    std::size_t threads = 1;
};

/// block_rows: one row per ordered (member, center) pair with
/// lhs = worst block TV, rhs = epsilon/T, pass = admissible.
/// recurrent_rows: one row per admissible cross pair with
/// lhs = worst readout TV, rhs = epsilon.
/// certified requires every member admissible to some center and every
/// recurrent row passing.
struct RecurrentCoverReport {
    CertReport block_rows;
    CertReport recurrent_rows;
    std::vector<std::size_t> uncovered;
    bool certified = false;
};
RecurrentCoverReport certify_recurrent_cover(const RecurrentCoverJob& job,
                                             RngStream rng);

} // namespace rnncover
