#pragma once

#include "rnncover/networks.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rnncover {

/// One labeled example: a length-T input sequence with a +-1 label.
struct LabeledSequence {
    SequenceInput u;
    double y = 1.0;
};
LabeledSequence make_labeled(SequenceInput u, double y);

struct SampleSet {
    std::vector<LabeledSequence> items;
    std::size_t size() const { return items.size(); }
};

/// Ramp loss r_gamma(-fval * y): 0 when the prediction clears the margin
/// in the right direction, 1 when it is wrong or zero, linear between.
double ramp_loss(double fval, double y, double gamma);

/// 0-1 loss with sign(0) = +1.
double zero_one_loss(double fval, double y);

struct MeanEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Averages K independent noisy readouts of the recurrent hypothesis,
/// the deterministic predictor obtained from a random one by taking
/// expectations. Draw k consumes rng.substream(k). sigma = 0 evaluates
/// the network once and reports zero stderr.
MeanEstimate derandomized_predict(const RecurrentConfig& cfg,
                                  const SequenceInput& u, double sigma,
                                  std::size_t K, RngStream rng);

using Predictor = std::function<double(const SequenceInput&)>;

/// Mean ramp / 0-1 loss of a predictor over a sample set.
double empirical_ramp_risk(const Predictor& predictor, const SampleSet& S,
                           double gamma);
double empirical_zero_one_risk(const Predictor& predictor, const SampleSet& S);

struct ErmResult {
    std::size_t index = 0;
    double risk = 1.0;
};

/// Empirical risk minimization over an explicit candidate list sharing
/// one recurrent shape (q, p, T, output_noise). Every candidate's
/// predictions reuse the same noise substreams (common random numbers:
/// sample i, draw k), so the argmin is reproducible and comparisons are
/// low-variance. Ties break to the smallest index.
ErmResult erm_grid(const std::vector<MLPSpec>& candidates, double sigma,
                   std::size_t q, std::size_t p, std::size_t T,
                   bool output_noise, const SampleSet& S, double gamma,
                   std::size_t K, RngStream rng);

/// Threshold selection for the margin-rescaling construction: the
/// largest grid value z with empirical mass of {|value| < z} below
/// target_mass (falls back to the smallest grid value when none
/// qualifies). Returns the chosen z and the achieved mass eta.
struct MarginThreshold {
    double z = 0.0;
    double eta = 0.0;
};
MarginThreshold margin_threshold_from_sample(const RealVec& values,
                                             const RealVec& grid,
                                             double target_mass);

/// Training objective with frozen reparameterized noise. The noise
/// tensor for (sample i, draw k, step t, layer l) is regenerated on
/// demand from noise_base.substream(i).substream(k).substream(t * L + l),
/// which makes the risk a pure function of the weights: the gradient
/// check differentiates exactly the function the trainer descends.
struct TrainProblem {
    std::size_t q = 1;
    std::size_t p = 1;
    std::size_t T = 1;
    bool output_noise = false;
    double gamma = 0.1;
    double sigma = 0.0;
    std::size_t k_noise = 1;
    RngStream noise_base;
};

/// Mean over samples and noise draws of the ramp loss of the noisy
/// recurrent readout under the frozen noise of prob.
double fixed_noise_risk(const TrainProblem& prob, const SampleSet& S,
                        const MLPSpec& spec);

/// Gradient of fixed_noise_risk w.r.t. every weight, by backpropagation
/// through the unrolled recurrence (state feedback included). Returned
/// in the same shapes as spec.weights. Throws std::runtime_error if any
/// component is non-finite.
std::vector<Matrix> fixed_noise_risk_grad(const TrainProblem& prob,
                                          const SampleSet& S,
                                          const MLPSpec& spec);

struct SgdHyper {
    double lr = 0.1;
    std::size_t epochs = 10;
    std::size_t k_noise = 1;
    std::uint64_t seed = 0;
};

/// Full-batch gradient descent on fixed_noise_risk, redrawing the
/// frozen noise each epoch from substreams of (seed). Tracks the best
/// weights seen under a fixed evaluation noise realization and returns
/// those, so the reported risk never increases with more epochs.
/// Deterministic given seed.
MLPSpec sgd_train(const MLPSpec& spec0, double sigma, std::size_t q,
                  std::size_t p, std::size_t T, bool output_noise,
                  const SampleSet& S, double gamma, const SgdHyper& hyper);

/// Excess-risk guarantee for the cover-based learner:
///   16 eps + (24 / sqrt(m)) sqrt(log_cover) + 6 sqrt(ln(2/delta) / (2m))
/// with log_cover the log covering number evaluated by the caller at
/// scale gamma * eps. Natural logarithms.
double pac_excess_risk_bound(unsigned long long m, double log_cover,
                             double epsilon, double delta);

/// Sample CSV: header y,u_0_0,...,u_{p-1}_{T-1} (row-major over the
/// p x T input matrix), one example per line, %.17g values.
std::string sample_set_csv(const SampleSet& S, std::size_t p, std::size_t T);
SampleSet sample_set_from_csv(const std::string& text, std::size_t* p_out,
                              std::size_t* T_out);

} // namespace rnncover
