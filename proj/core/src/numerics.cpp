#include "rnncover/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace rnncover {

double sigmoid_centered(double x) {
    // Evaluate via tanh for symmetry: 1/(1+e^-x) - 1/2 = tanh(x/2)/2.
    // tanh keeps phi(-x) == -phi(x) exact in floating point.
    return 0.5 * std::tanh(0.5 * x);
}

double sigmoid_centered_inv(double y) {
    if (!(std::fabs(y) < 0.5))
        throw std::domain_error("sigmoid_centered_inv: |y| must be < 1/2");
    return std::log((0.5 + y) / (0.5 - y));
}

void sigmoid_centered_inplace(RealVec& v) {
    for (double& x : v) x = sigmoid_centered(x);
}

double ramp(double x, double gamma) {
    if (!(gamma > 0.0))
        throw std::domain_error("ramp: gamma must be positive");
    if (x < -gamma) return 0.0;
    if (x >= 0.0) return 1.0;
    return 1.0 + x / gamma;
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
    // hash-combine: asymmetric so combine(a,b) != combine(b,a)
    return mix64(a ^ (b + kGolden + (a << 6) + (a >> 2)));
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), id_(stream_id),
      state_(combine(mix64(master_seed), mix64(stream_id))) {}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double RngStream::next_unit() {
    // 53 random bits, shifted into (0, 1] so log(u) below is finite.
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    const double u = next_unit();
    const double v = next_unit();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(two_pi * v);
}

RngStream RngStream::substream(std::uint64_t k) const {
    return RngStream(master_, combine(id_, k));
}

RealVec gaussian_sample(RngStream& rng, std::size_t dim, double sigma) {
    if (!(sigma >= 0.0))
        throw std::domain_error("gaussian_sample: sigma must be >= 0");
    if (sigma == 0.0) return RealVec(dim, 0.0);
    RealVec out(dim);
    for (double& x : out) x = sigma * rng.next_gaussian();
    return out;
}

} // namespace rnncover
