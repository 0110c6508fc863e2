#include "lmg/spin_model.hpp"

#include <cmath>

namespace lmg {

SpinMagnitude::SpinMagnitude(double j) : j_(j) {
    const double two_j = 2.0 * j;
    if (!(j > 0.0) || !std::isfinite(j) || std::abs(two_j - std::round(two_j)) > 1e-9)
        throw DomainError("spin magnitude must be a positive half-integer, got j=" + std::to_string(j));
    dim_ = static_cast<int>(std::lround(two_j)) + 1;
}

SpinOperators build_spin_operators(SpinMagnitude j) {
    const int n = j.dim();
    const double jj = j.j();

    RealMatrix jz = RealMatrix::Zero(n, n);
    RealMatrix jplus = RealMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) jz(k, k) = j.m(k);
    // J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
    for (int k = 0; k + 1 < n; ++k) {
        const double m = j.m(k);
        jplus(k + 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
    }
    RealMatrix jminus = jplus.transpose();
    RealMatrix jx = 0.5 * (jplus + jminus);
    ComplexMatrix jy = std::complex<double>(0.0, -0.5) * (jplus - jminus).cast<std::complex<double>>();
    RealMatrix jy2 = (jy * jy).real();
    jy2 = 0.5 * (jy2 + jy2.transpose()).eval();  // symmetrize roundoff

    return SpinOperators{j, std::move(jx), std::move(jz), std::move(jplus),
                         std::move(jminus), std::move(jy2), std::move(jy)};
}

RealMatrix build_hamiltonian(const SpinOperators& ops, const ModelParams& p) {
    if (!std::isfinite(p.omega) || !std::isfinite(p.omega_x) || !std::isfinite(p.xi_y))
        throw DomainError("non-finite model parameters");
    return p.omega * ops.jz + p.omega_x * ops.jx + (p.xi_y / ops.j.j()) * ops.jy2;
}

ParameterDerivatives build_parameter_derivatives(const SpinOperators& ops) {
    return ParameterDerivatives{ops.jx, ops.jy2 / ops.j.j()};
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace lmg
