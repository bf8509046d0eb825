#pragma once

#include <vector>

#include "malab/problem.hpp"

namespace malab {

// Scalar field sampled on a uniform polar grid over a concentric annulus.
// Radial index i in [0, Nr), i=0 the inner ring, i=Nr-1 the outer ring;
// angular index j is periodic modulo Ntheta.
class GridField {
 public:
  GridField() = default;
  GridField(const AnnularDomain& dom, int Nr, int Ntheta, double fill = 0.0);

  int nr() const { return Nr_; }
  int ntheta() const { return Nt_; }
  double r_inner() const { return r_in_; }
  double r_outer() const { return r_out_; }
  double dr() const { return dr_; }
  double dtheta() const { return dt_; }

  double r_of(int i) const { return r_in_ + i * dr_; }
  double theta_of(int j) const { return j * dt_; }
  Vec point(int i, int j) const;

  double& at(int i, int j) { return v_[idx(i, j)]; }
  double at(int i, int j) const { return v_[idx(i, j)]; }

  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  // Centered (one-sided at the radial ends) second-order derivatives.
  double d_r(int i, int j) const;
  double d_rr(int i, int j) const;
  double d_theta(int i, int j) const;
  double d_thetatheta(int i, int j) const;
  double d_rtheta(int i, int j) const;

  // Cartesian gradient and Hessian reconstructed from the polar derivatives.
  Vec cart_grad(int i, int j) const;
  Mat cart_hess(int i, int j) const;

  double sup_abs() const;

 private:
  int idx(int i, int j) const {
    int jw = ((j % Nt_) + Nt_) % Nt_;
    return i * Nt_ + jw;
  }
  int Nr_ = 0, Nt_ = 0;
  double r_in_ = 0.0, r_out_ = 0.0, dr_ = 0.0, dt_ = 0.0;
  std::vector<double> v_;
};

// Samples a callable u(x) onto the grid.
GridField sample_to_grid(const AnnularDomain& dom, int Nr, int Ntheta,
                         const std::function<double(const Vec&)>& u);

void write_grid_csv(const GridField& f, const std::string& path);

}  // namespace malab
