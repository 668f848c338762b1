#pragma once

#include "rnncover/numerics.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rnncover {

/// Dense row-major matrix. For a layer mapping p_in values to p_out
/// values the shape is p_in x p_out: column j holds the weights feeding
/// output j.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    RealVec data; // rows*cols entries, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    Matrix(std::size_t r, std::size_t c, RealVec d);

    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

/// Layered sigmoid network without biases. dims = (p_0, ..., p_k) with
/// k >= 1 layers; weights[i] has shape dims[i] x dims[i+1]. Layer i maps
/// x to Phi(W_i^T x) where Phi applies the centered sigmoid elementwise.
struct MLPSpec {
    std::vector<std::size_t> dims;
    std::vector<Matrix> weights;

    std::size_t layer_count() const { return weights.size(); }
    std::size_t input_dim() const { return dims.front(); }
    std::size_t output_dim() const { return dims.back(); }
    /// Total weight count w = sum_i dims[i] * dims[i+1].
    std::size_t weight_count() const;
};

/// Builds and validates an MLPSpec. Throws std::invalid_argument when
/// dims has fewer than two entries, any dim is zero, or weight shapes
/// do not match dims. If declared_w is nonzero it must equal the actual
/// weight count.
MLPSpec make_mlp(std::vector<std::size_t> dims, std::vector<Matrix> weights,
                 std::size_t declared_w = 0);
void validate_mlp(const MLPSpec& spec);

/// Per-layer Gaussian input-noise scale. Valid range [0, 1).
struct NoiseScale {
    double sigma = 0.0;
};
NoiseScale make_noise_scale(double sigma);

/// Network driven recurrently over a length-T input sequence.
/// The block net maps s = p + q - 1 values (q-1 carried state dims
/// followed by the p current inputs) to q outputs, of which the first
/// q-1 feed the next step and the last is the readout. Requires
/// net.dims.front() == s, net.dims.back() == q, s >= q.
///
/// output_noise selects the variant whose final step appends one more
/// N(0, sigma^2 I_q) draw after the last layer, giving the readout a
/// density. Intermediate steps never append output noise because the
/// next step's own input noise already follows them.
struct RecurrentConfig {
    MLPSpec net;
    std::size_t q = 1;
    std::size_t p = 1;
    std::size_t T = 1;
    bool output_noise = false;
};
RecurrentConfig make_recurrent(MLPSpec net, std::size_t q, std::size_t p,
                               std::size_t T, bool output_noise = false);
void validate_recurrent(const RecurrentConfig& cfg);

/// Length-T sequence of p-dimensional inputs with entries in
/// [-1/2, 1/2]. Stored row-major as a p x T matrix: at(i, t) is input
/// dimension i at time t.
struct SequenceInput {
    std::size_t p = 0;
    std::size_t T = 0;
    RealVec data;

    double at(std::size_t i, std::size_t t) const { return data[i * T + t]; }
    double& at(std::size_t i, std::size_t t) { return data[i * T + t]; }
};

/// Validates dimensions and the [-1/2, 1/2] entry range; out-of-range
/// entries are rejected, never clamped.
SequenceInput make_sequence(std::size_t p, std::size_t T, RealVec data);

/// Counts block (full network) forward evaluations, for asserting the
/// cost model of the recurrent unrolling.
struct EvalCounters {
    long long block_forward_passes = 0;
};

/// Phi(W^T x). Requires x.size() == W.rows.
RealVec layer_forward(const Matrix& W, const RealVec& x);

/// Deterministic forward pass. The entry input must lie in the
/// [-1/2, 1/2] cube (later layers receive sigmoid outputs, which cannot
/// leave it).
RealVec mlp_forward(const MLPSpec& spec, const RealVec& x);

/// Noisy forward pass: adds a fresh N(0, sigma^2 I) draw to the input
/// of every layer, and with output_noise one more draw after the final
/// layer. Noisy pre-activations may leave the input cube; only the
/// caller-supplied x is range-checked. sigma = 0 reproduces mlp_forward
/// exactly. Requires rng when sigma > 0.
RealVec noisy_mlp_forward(const MLPSpec& spec, const RealVec& x, double sigma,
                          RngStream* rng, bool output_noise = false);

/// Recurrent value f^R(U, t): step 0 feeds (0_{q-1}, u^(0)) through the
/// block, later steps feed (First(previous), u^(t)). Fresh noise is
/// drawn at every step when sigma > 0. Uses exactly t+1 block forward
/// passes (counted into counters when given). With cfg.output_noise the
/// returned vector of the *requested* step carries one extra
/// N(0, sigma^2 I_q) draw; carried state never does.
RealVec recurrent_apply(const RecurrentConfig& cfg, const SequenceInput& u,
                        std::size_t t, double sigma = 0.0,
                        RngStream* rng = nullptr,
                        EvalCounters* counters = nullptr);

/// Last(f^R(U, T-1)): the scalar readout after the full sequence.
double recurrent_hypothesis(const RecurrentConfig& cfg, const SequenceInput& u,
                            double sigma = 0.0, RngStream* rng = nullptr);

/// Splits a block output into (First = leading q-1 dims, Last = final
/// scalar). Requires v nonempty.
std::pair<RealVec, double> split_state(const RealVec& v);

/// Copy of spec with the weights feeding the final layer's last output
/// multiplied by c (the last column of the last weight matrix). Leaves
/// every other output, hence the carried state of a recurrent run,
/// bit-identical, and preserves sign of the readout for c > 0.
MLPSpec rescale_last_row(const MLPSpec& spec, double c);

/// Margin rescaling factor c = phiinv(gamma) / phiinv(z) mapping readout
/// magnitude z to margin gamma. Requires gamma, z in (0, 1/2).
double margin_rescale_factor(double gamma, double z);

/// JSON weight format: {"dims": [...], "weights": [[...], ...]} with one
/// row-major array per layer. Weights are written as C99 hex-float
/// strings so save/load round-trips every finite double bit-exactly.
std::string mlp_to_json(const MLPSpec& spec);
MLPSpec mlp_from_json(const std::string& text);
void save_mlp(const std::string& path, const MLPSpec& spec);
MLPSpec load_mlp(const std::string& path);

} // namespace rnncover
