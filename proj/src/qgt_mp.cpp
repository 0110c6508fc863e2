// Multiprecision branch of the perturbative QGT sum.
//
// Deep in the broken phase the two highest levels are split only by a
// tunneling gap that closes exponentially in j (measured: ~3e-24 at j=32,
// ~8e-74 at j=96 for xi_y=2.3, omega_x=1). Double precision cannot resolve
// it, and the Eq.-(5) partner term computed there is rounding noise. This
// path rebuilds H with MPFR scalars at a j-dependent precision, so the gap
// and the partner matrix elements are both exact to many digits.

#include <boost/multiprecision/mpfr.hpp>

#include <Eigen/Core>

#include <cmath>
#include <limits>

namespace lmg_mp {

using mpreal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

}  // namespace lmg_mp

namespace Eigen {

template <>
struct NumTraits<lmg_mp::mpreal> : GenericNumTraits<lmg_mp::mpreal> {
    typedef lmg_mp::mpreal Real;
    typedef lmg_mp::mpreal NonInteger;
    typedef lmg_mp::mpreal Nested;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 100,
        MulCost = 200
    };
    static inline Real epsilon() { return std::numeric_limits<lmg_mp::mpreal>::epsilon(); }
    static inline Real dummy_precision() { return epsilon() * 1000; }
    static inline Real highest() { return (std::numeric_limits<lmg_mp::mpreal>::max)(); }
    static inline Real lowest() { return (std::numeric_limits<lmg_mp::mpreal>::lowest)(); }
    static inline int digits10() { return static_cast<int>(lmg_mp::mpreal::default_precision()); }
    static inline Real infinity() { return std::numeric_limits<lmg_mp::mpreal>::infinity(); }
    static inline Real quiet_NaN() { return std::numeric_limits<lmg_mp::mpreal>::quiet_NaN(); }
};

}  // namespace Eigen

#include <Eigen/Eigenvalues>

#include "lmg/qgt.hpp"

namespace lmg {

namespace {

using lmg_mp::mpreal;
using MpMatrix = Eigen::Matrix<mpreal, Eigen::Dynamic, Eigen::Dynamic>;
using MpVector = Eigen::Matrix<mpreal, Eigen::Dynamic, 1>;

int auto_digits(SpinMagnitude j) {
    return std::max(50, static_cast<int>(45.0 + 1.25 * j.j()));
}

struct MpResult {
    QgtPoint point;
    bool gap_resolved = false;
};

MpResult run_at_precision(SpinMagnitude j, const ModelParams& p, StateSelector sel, int digits) {
    mpreal::default_precision(digits);
    const int dim = j.dim();
    const mpreal jj(j.j());
    const mpreal wx(p.omega_x), xy(p.xi_y), om(p.omega);

    std::vector<mpreal> m(dim), cp(dim - 1);
    for (int k = 0; k < dim; ++k) m[k] = mpreal(-j.j() + k);
    for (int k = 0; k + 1 < dim; ++k) cp[k] = sqrt(jj * (jj + 1) - m[k] * (m[k] + 1));

    // H = om*Jz + wx*Jx + (xy/j)*Jy^2 with
    //   Jy^2 = (j(j+1) - Jz^2)/2 - (J+^2 + J-^2)/4
    MpMatrix h = MpMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        h(k, k) = om * m[k] + xy / jj * (jj * (jj + 1) - m[k] * m[k]) / 2;
    for (int k = 0; k + 1 < dim; ++k) {
        const mpreal v = wx / 2 * cp[k];
        h(k, k + 1) += v;
        h(k + 1, k) += v;
    }
    for (int k = 0; k + 2 < dim; ++k) {
        const mpreal v = -(xy / jj) * cp[k] * cp[k + 1] / 4;
        h(k, k + 2) += v;
        h(k + 2, k) += v;
    }

    Eigen::SelfAdjointEigenSolver<MpMatrix> es(h);
    if (es.info() != Eigen::Success)
        throw EigensolverError("multiprecision eigensolver failed to converge");
    const MpVector& ev = es.eigenvalues();
    const MpMatrix& vec = es.eigenvectors();
    const int n = select_state(dim, sel);

    // dH/d(omega_x) = Jx applied to column n
    MpVector jx_vn = MpVector::Zero(dim);
    for (int k = 0; k + 1 < dim; ++k) {
        jx_vn(k) += cp[k] / 2 * vec(k + 1, n);
        jx_vn(k + 1) += cp[k] / 2 * vec(k, n);
    }
    // dH/d(xi_y) = Jy^2/j applied to column n
    MpVector a2_vn = MpVector::Zero(dim);
    for (int k = 0; k < dim; ++k)
        a2_vn(k) += (jj * (jj + 1) - m[k] * m[k]) / (2 * jj) * vec(k, n);
    for (int k = 0; k + 2 < dim; ++k) {
        const mpreal v = -cp[k] * cp[k + 1] / (4 * jj);
        a2_vn(k) += v * vec(k + 2, n);
        a2_vn(k + 2) += v * vec(k, n);
    }
    const MpVector w1 = vec.transpose() * jx_vn;
    const MpVector w2 = vec.transpose() * a2_vn;

    mpreal q11(0), q22(0), q12(0);
    mpreal min_gap = std::numeric_limits<mpreal>::infinity();
    for (int k = 0; k < dim; ++k) {
        if (k == n) continue;
        const mpreal de = ev(k) - ev(n);
        min_gap = std::min(min_gap, abs(de));
        const mpreal inv2 = 1 / (de * de);
        q11 += w1(k) * w1(k) * inv2;
        q22 += w2(k) * w2(k) * inv2;
        q12 += w1(k) * w2(k) * inv2;
    }

    const mpreal width = ev(dim - 1) - ev(0);
    const mpreal noise_floor = pow(mpreal(10), 6 - digits) * width;

    MpResult r;
    r.gap_resolved = min_gap > noise_floor;
    r.point.params = p;
    r.point.state = sel;
    r.point.g11 = q11.convert_to<double>();
    r.point.g22 = q22.convert_to<double>();
    r.point.g12 = q12.convert_to<double>();
    r.point.f12 = 0.0;  // real-symmetric Hamiltonian
    r.point.det_g = (q11 * q22 - q12 * q12).convert_to<double>();
    r.point.min_gap = min_gap.convert_to<double>();
    return r;
}

}  // namespace

QgtPoint qgt_multiprecision(SpinMagnitude j, const ModelParams& p, StateSelector sel, int digits) {
    if (!std::isfinite(p.omega_x) || !std::isfinite(p.xi_y) || !std::isfinite(p.omega))
        throw DomainError("qgt_multiprecision: non-finite parameters");
    int d = digits > 0 ? digits : auto_digits(j);
    MpResult r = run_at_precision(j, p, sel, d);
    if (!r.gap_resolved) {
        d = static_cast<int>(d * 1.7) + 20;
        r = run_at_precision(j, p, sel, d);
    }
    if (!r.gap_resolved)
        throw DegenerateState(
            "qgt_multiprecision: gap unresolved at " + std::to_string(d) +
                " digits (omega_x=" + std::to_string(p.omega_x) +
                ", xi_y=" + std::to_string(p.xi_y) + ")",
            r.point.min_gap);
    return r.point;
}

}  // namespace lmg
