#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace dqg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// How the left Haar functional is scaled. `CounitBlock` pins phi(h0) = 1,
/// `State` pins phi(1) = 1 (the tracial-state convention for compact groups).
enum class HaarNormalization { CounitBlock, State };

struct Config {
  double tol = kDefaultTol;
  std::uint64_t seed = kDefaultSeed;
  HaarNormalization mode = HaarNormalization::CounitBlock;
};

}  // namespace dqg
