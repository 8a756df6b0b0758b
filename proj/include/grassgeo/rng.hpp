#pragma once

// Counter-based deterministic generator. The k-th draw from seed s is the
// pure function
//
//   value(s, k) = mix64(s + (k + 1) * 0x9E3779B97F4A7C15)
//
// with mix64 the splitmix64 finalizer. Uniform doubles take the top 53 bits,
// Gaussians use Box-Muller on two consecutive draws. Because a draw depends
// only on (seed, counter), sweeps can be sharded across threads and ports to
// other languages reproduce the sampled inputs bit-for-bit.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

namespace grassgeo {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ull);
  }

  std::uint64_t next_u64() { return value_at(seed_, counter_++); }

  // uniform in (0, 1]
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // standard complex Gaussian, E|z|^2 = 1
  std::complex<double> next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
  }

  Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = next_complex_gaussian();
    return g;
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index size) {
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) v(i) = next_gaussian();
    return v;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

// Haar-distributed k x k unitary: QR of a complex Gaussian with the R
// diagonal phases absorbed into Q so the factor is unique.
inline Eigen::MatrixXcd random_unitary(int k, CounterRng& rng) {
  Eigen::MatrixXcd g = rng.gaussian_matrix(k, k);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

}  // namespace grassgeo
