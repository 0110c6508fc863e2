#pragma once

#include <Eigen/Dense>

#include "lmg/errors.hpp"

namespace lmg {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Spin magnitude j = N/2. Basis dimension 2j+1, rows ordered m = -j, ..., +j.
class SpinMagnitude {
 public:
    explicit SpinMagnitude(double j);
    double j() const { return j_; }
    int dim() const { return dim_; }
    /// m value of basis row k (k = 0 is m = -j).
    double m(int k) const { return -j_ + k; }

 private:
    double j_;
    int dim_;
};

/// Point x = (omega_x, xi_y) of the 2D parameter manifold; omega is the
/// energy unit and defaults to 1.
struct ModelParams {
    double omega = 1.0;
    double omega_x = 0.0;
    double xi_y = 0.0;
};

/// Collective spin matrices at fixed j. All are real in this basis except
/// jy, which is purely imaginary (so jy2 = jy*jy is real symmetric).
struct SpinOperators {
    SpinMagnitude j;
    RealMatrix jx, jz, jplus, jminus, jy2;
    ComplexMatrix jy;
};

SpinOperators build_spin_operators(SpinMagnitude j);

/// H = omega*Jz + omega_x*Jx + (xi_y/j)*Jy^2, real symmetric.
RealMatrix build_hamiltonian(const SpinOperators& ops, const ModelParams& p);

/// dH/d(omega_x) = Jx and dH/d(xi_y) = Jy^2/j; both parameter-independent.
struct ParameterDerivatives {
    RealMatrix d_omega_x;
    RealMatrix d_xi_y;
};

ParameterDerivatives build_parameter_derivatives(const SpinOperators& ops);

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);

}  // namespace lmg
