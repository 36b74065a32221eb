#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace swe {

// Mode index in the sine eigenbasis of the Dirichlet Laplacian on (0,1)^d.
// Components are 1-based; l is ignored for dim == 1.
struct ModeIndex {
  int k = 1;
  int l = 1;
};

// Coefficients of one scalar field in the orthonormal sine basis
// e_k(x) = sqrt(2) sin(k pi x) (1D) or e_{k,l}(x,y) = 2 sin(k pi x) sin(l pi y)
// (2D), truncated to wavenumbers 1..n per dimension. L2 norm equals the
// Euclidean norm of the coefficient vector.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int dim, int n)
      : dim_(dim), n_(n), c_(static_cast<std::size_t>(size_for(dim, n)), 0.0) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
    if (n < 1) throw std::invalid_argument("truncation must be >= 1");
  }

  static long size_for(int dim, int n) {
    return dim == 1 ? n : static_cast<long>(n) * n;
  }

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return c_.size(); }

  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }

  double& at(int k) { return c_[static_cast<std::size_t>(k - 1)]; }
  double at(int k) const { return c_[static_cast<std::size_t>(k - 1)]; }
  double& at(int k, int l) {
    return c_[static_cast<std::size_t>(k - 1) * n_ + (l - 1)];
  }
  double at(int k, int l) const {
    return c_[static_cast<std::size_t>(k - 1) * n_ + (l - 1)];
  }
  double coeff(const ModeIndex& m) const {
    return dim_ == 1 ? at(m.k) : at(m.k, m.l);
  }

  bool same_shape(const SpectralField& o) const {
    return dim_ == o.dim_ && n_ == o.n_;
  }

 private:
  int dim_ = 1;
  int n_ = 1;
  std::vector<double> c_;
};

// Position/velocity pair sharing one truncation.
struct PhaseState {
  SpectralField u;
  SpectralField v;

  PhaseState() = default;
  PhaseState(SpectralField u_, SpectralField v_)
      : u(std::move(u_)), v(std::move(v_)) {
    if (!u.same_shape(v))
      throw std::invalid_argument("u and v must share dim and truncation");
  }
  PhaseState(int dim, int n) : u(dim, n), v(dim, n) {}

  int dim() const { return u.dim(); }
  int n() const { return u.n(); }
};

// Collocation values on the interior tensor grid x_j = j/G, j = 1..G-1.
struct GridField {
  int dim = 1;
  int g = 2;  // points per dimension is g-1
  std::vector<double> v;

  GridField() = default;
  GridField(int dim_, int g_)
      : dim(dim_),
        g(g_),
        v(static_cast<std::size_t>(dim_ == 1 ? g_ - 1
                                             : static_cast<long>(g_ - 1) * (g_ - 1)),
          0.0) {}
  std::size_t size() const { return v.size(); }
};

}  // namespace swe
