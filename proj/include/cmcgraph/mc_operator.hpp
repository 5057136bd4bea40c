// Pointwise algebra of the constant-mean-curvature graph operator in the
// Euclidean (epsilon = +1) and Lorentz-Minkowski (epsilon = -1) signatures.
//
// Everything here acts on a single Jet (u, Du, D^2u). The residual is
// templated on the scalar so the linearization can be produced by forward
// automatic differentiation instead of hand-transcribed coefficients.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace cmc {

enum class Signature : int { Euclidean = 1, Lorentzian = -1 };

constexpr int epsilon(Signature s) { return static_cast<int>(s); }

inline Signature signature_from_epsilon(int eps) {
  if (eps == 1) return Signature::Euclidean;
  if (eps == -1) return Signature::Lorentzian;
  throw std::invalid_argument("signature epsilon must be +1 or -1, got " + std::to_string(eps));
}

inline const char* to_string(Signature s) {
  return s == Signature::Euclidean ? "euclid" : "lorentz";
}

/// Raised when a Lorentzian evaluation meets a gradient with |Du| >= 1.
class NotSpacelike : public std::domain_error {
 public:
  explicit NotSpacelike(const std::string& what) : std::domain_error(what) {}
};

/// Pointwise sample (u, Du, D^2u). The Hessian is stored as its three
/// independent entries so it is symmetric by construction.
template <typename Scalar>
struct Jet {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

  Scalar u{0};
  Vec2 du = Vec2::Zero();
  Scalar d11{0};
  Scalar d12{0};
  Scalar d22{0};

  Mat2 hessian() const {
    Mat2 m;
    m << d11, d12, d12, d22;
    return m;
  }
};

using JetD = Jet<double>;

struct McParams {
  double H = 0.0;  // signed mean curvature w.r.t. the upward graph normal
  Signature signature = Signature::Euclidean;
};

namespace detail {

inline double value_of(double x) { return x; }

template <typename Der>
double value_of(const Eigen::AutoDiffScalar<Der>& x) {
  return x.value();
}

template <typename Scalar>
void require_spacelike(const Eigen::Matrix<Scalar, 2, 1>& du, Signature sig) {
  if (sig == Signature::Lorentzian && value_of(du.squaredNorm()) >= 1.0) {
    throw NotSpacelike("not spacelike: |Du| = " + std::to_string(std::sqrt(value_of(du.squaredNorm()))));
  }
}

}  // namespace detail

/// Q[u] = (1+e(D2u)^2) D11u - 2e D1u D2u D12u + (1+e(D1u)^2) D22u - 2H(1+e|Du|^2)^{3/2}.
/// Vanishes exactly on jets of graphs with mean curvature H.
template <typename Scalar>
Scalar q_residual(const Jet<Scalar>& jet, const McParams& params) {
  using std::sqrt;
  detail::require_spacelike(jet.du, params.signature);
  const double e = epsilon(params.signature);
  const Scalar& p1 = jet.du(0);
  const Scalar& p2 = jet.du(1);
  const Scalar w2 = 1.0 + e * (p1 * p1 + p2 * p2);
  const Scalar w = sqrt(w2);
  return (1.0 + e * p2 * p2) * jet.d11 - 2.0 * e * p1 * p2 * jet.d12 + (1.0 + e * p1 * p1) * jet.d22 -
         2.0 * params.H * w2 * w;
}

/// Du / sqrt(1 + e|Du|^2): the divergence-form flux.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> flux(const Eigen::Matrix<Scalar, 2, 1>& du, Signature sig) {
  using std::sqrt;
  detail::require_spacelike(du, sig);
  return du / sqrt(1.0 + epsilon(sig) * du.squaredNorm());
}

/// Vertical component <N, e3> of the unit normal (Gauss map) of the graph.
inline double gauss_vertical(const Eigen::Vector2d& du, Signature sig) {
  detail::require_spacelike(du, sig);
  const double e = epsilon(sig);
  return e / std::sqrt(1.0 + e * du.squaredNorm());
}

struct Ellipticity {
  double lambda;  // smallest eigenvalue of the second-order coefficient matrix
  double Lambda;  // largest
};

/// Closed-form extreme eigenvalues of the principal coefficient matrix.
/// Lorentzian gradients with |Du| >= 1 give lambda <= 0 (ellipticity lost).
inline Ellipticity ellipticity_eigenvalues(const Eigen::Vector2d& du, Signature sig) {
  const double s = du.squaredNorm();
  if (sig == Signature::Euclidean) return {1.0, 1.0 + s};
  return {1.0 - s, 1.0};
}

struct Linearization {
  Eigen::Matrix2d a;  // coefficients of D_ij v (symmetric)
  Eigen::Vector2d b;  // coefficients of D_i v
};

/// Linearization of Q at a jet: dQ = a_ij dD_ij u + b_i dD_i u.
/// Both a and b come from forward-mode differentiation of q_residual.
inline Linearization linearization_coeffs(const JetD& jet, const McParams& params) {
  using Deriv = Eigen::Matrix<double, 5, 1>;
  using AD = Eigen::AutoDiffScalar<Deriv>;
  Jet<AD> ad;
  ad.u = AD(jet.u, Deriv::Zero());
  ad.du(0) = AD(jet.du(0), 5, 0);
  ad.du(1) = AD(jet.du(1), 5, 1);
  ad.d11 = AD(jet.d11, 5, 2);
  ad.d12 = AD(jet.d12, 5, 3);
  ad.d22 = AD(jet.d22, 5, 4);
  const Deriv g = q_residual(ad, params).derivatives();
  Linearization lin;
  lin.b << g(0), g(1);
  lin.a << g(2), 0.5 * g(3), 0.5 * g(3), g(4);
  return lin;
}

/// dQ/dH at a fixed jet; strictly negative wherever the jet is admissible.
inline double q_residual_dH(const Eigen::Vector2d& du, Signature sig) {
  detail::require_spacelike(du, sig);
  const double w2 = 1.0 + epsilon(sig) * du.squaredNorm();
  return -2.0 * w2 * std::sqrt(w2);
}

/// 1 - max|Du| over a set of gradients; negative means spacelike is violated.
inline double spacelike_margin(std::span<const Eigen::Vector2d> du_field) {
  double m = 0.0;
  for (const auto& g : du_field) m = std::max(m, g.norm());
  return 1.0 - m;
}

}  // namespace cmc
