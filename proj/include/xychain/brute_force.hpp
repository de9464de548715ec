#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "xychain/error.hpp"
#include "xychain/model.hpp"

namespace xychain {

// Dense 2^N spin Hamiltonian of the cyclic XY chain,
// H = 1/4 sum [(1+g) sx sx + (1-g) sy sy] + h/2 sum sz,
// built from Pauli matrix elements in the sz product basis.
inline Eigen::MatrixXd xy_hamiltonian(const ModelParams& p) {
  const int nn = p.n_sites();
  if (nn > 12) throw SizeLimitError("dense oracle supports N <= 12");
  const double h = p.signed_h(), g = p.signed_gamma();
  const std::uint32_t dim = 1u << nn;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int k = 0; k < nn; ++k) diag += (s >> k & 1u) ? -1.0 : 1.0;  // bit 0 = spin up
    H(s, s) = 0.5 * h * diag;
    for (int k = 0; k < nn; ++k) {
      const int l = (k + 1) % nn;
      const bool bk = s >> k & 1u, bl = s >> l & 1u;
      const std::uint32_t f = s ^ (1u << k) ^ (1u << l);
      // sx sx flips both with amplitude 1; sy sy with -1 for aligned, +1 for opposite spins
      const double xx = 1.0, yy = (bk == bl) ? -1.0 : 1.0;
      H(f, s) += 0.25 * ((1.0 + g) * xx + (1.0 - g) * yy);
    }
  }
  return H;
}

// U(t) = exp(-iHt) by Pade scaling-and-squaring; g_n = 2^{-N} tr[U^+ sz_{n+1} U sz_1]
// reduces to 2^{-N} sum_ab z1_a |U_ba|^2 zn_b since both operators are diagonal.
class DenseEvolution {
 public:
  DenseEvolution(const ModelParams& p, double t) : n_sites_(p.n_sites()) {
    const Eigen::MatrixXcd A = std::complex<double>(0.0, -t) * xy_hamiltonian(p).cast<std::complex<double>>();
    prob_ = A.exp().cwiseAbs2();
  }

  double g(int n) const {
    if (n < 0 || n >= n_sites_) throw InvalidParameter("site offset must satisfy 0 <= n < N");
    const Eigen::Index dim = prob_.rows();
    double acc = 0.0;
    for (Eigen::Index a = 0; a < dim; ++a) {
      const double za = (a & 1) ? -1.0 : 1.0;
      double row = 0.0;
      for (Eigen::Index b = 0; b < dim; ++b) row += prob_(b, a) * ((b >> n & 1) ? -1.0 : 1.0);
      acc += za * row;
    }
    return acc / static_cast<double>(dim);
  }

 private:
  int n_sites_;
  Eigen::MatrixXd prob_;
};

inline double brute_force_g(int n, double t, const ModelParams& p) { return DenseEvolution(p, t).g(n); }

}  // namespace xychain
