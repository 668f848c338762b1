#pragma once

#include <cstdint>
#include <vector>

namespace rnncover {

using RealVec = std::vector<double>;

/// Centered sigmoid: 1/(1+exp(-x)) - 1/2. Odd, strictly increasing,
/// range (-1/2, 1/2), slope 1/4 at the origin.
double sigmoid_centered(double x);

/// Inverse of sigmoid_centered on (-1/2, 1/2): log((1/2+y)/(1/2-y)).
/// Throws std::domain_error for |y| >= 1/2.
double sigmoid_centered_inv(double y);

/// Applies sigmoid_centered elementwise in place.
void sigmoid_centered_inplace(RealVec& v);

/// Ramp with margin gamma > 0:
///   0           for x < -gamma
///   1 + x/gamma for -gamma <= x <= 0
///   1           for x >= 0
/// 1/gamma-Lipschitz. Throws std::domain_error if gamma <= 0.
double ramp(double x, double gamma);

/// Deterministic stream of pseudo-random numbers identified by
/// (master_seed, stream_id). Two streams built from the same pair produce
/// the same sequence regardless of thread or call site, so per-task
/// streams can be derived up front and consumed in any schedule.
///
/// The generator is splitmix64 (counter-based: constant-increment state,
/// mixed output). Gaussians use the trigonometric Box-Muller transform,
/// consuming exactly two uniforms per draw, so draw k of any stream is a
/// pure function of (master_seed, stream_id, k).
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    /// Uniform double in (0, 1].
    double next_unit();
    /// Standard normal draw.
    double next_gaussian();

    /// Child stream derived from (master_seed, hash(stream_id, k)).
    /// Children with distinct k are independent for practical purposes
    /// and reproducible without coordinating with the parent's state.
    RngStream substream(std::uint64_t k) const;

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_id() const { return id_; }

private:
    std::uint64_t master_;
    std::uint64_t id_;
    std::uint64_t state_;
};

/// dim independent draws from N(0, sigma^2). sigma = 0 returns exact
/// zeros without consuming randomness. Throws std::domain_error if
/// sigma < 0.
RealVec gaussian_sample(RngStream& rng, std::size_t dim, double sigma);

} // namespace rnncover
