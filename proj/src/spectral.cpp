#include "lmg/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <complex>

// Keep LAPACK single-threaded: mesh nodes are the parallel unit and results
// must not depend on BLAS scheduling.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace lmg {

namespace {

void init_blas_threads() {
    static const bool done = [] {
        if (openblas_set_num_threads) openblas_set_num_threads(1);
        return true;
    }();
    (void)done;
}

void fix_signs(RealMatrix& v) {
    for (int c = 0; c < v.cols(); ++c) {
        int imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        if (v(imax, c) < 0.0) v.col(c) = -v.col(c);
    }
}

void fix_phases(ComplexMatrix& v) {
    for (int c = 0; c < v.cols(); ++c) {
        int imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        const std::complex<double> z = v(imax, c);
        const double az = std::abs(z);
        if (az > 0.0) v.col(c) *= std::conj(z) / az;
    }
}

}  // namespace

Spectrum diagonalize(const RealMatrix& h) {
    init_blas_threads();
    if (h.rows() != h.cols()) throw DomainError("diagonalize: matrix not square");
    const int n = static_cast<int>(h.rows());

    Spectrum s;
    s.states = h;
    s.energies.resize(n);
    const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, s.states.data(), n,
                                    s.energies.data());
    if (info != 0)
        throw EigensolverError("dsyevd failed to converge (info=" + std::to_string(info) + ")");
    fix_signs(s.states);
    return s;
}

ComplexSpectrum diagonalize_hermitian(const ComplexMatrix& h) {
    init_blas_threads();
    if (h.rows() != h.cols()) throw DomainError("diagonalize_hermitian: matrix not square");
    const int n = static_cast<int>(h.rows());

    ComplexSpectrum s;
    s.states = h;
    s.energies.resize(n);
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                    reinterpret_cast<lapack_complex_double*>(s.states.data()), n,
                                    s.energies.data());
    if (info != 0)
        throw EigensolverError("zheevd failed to converge (info=" + std::to_string(info) + ")");
    fix_phases(s.states);
    return s;
}

int select_state(int dim, StateSelector sel) {
    switch (sel.kind) {
        case StateSelector::Kind::Ground:
            return 0;
        case StateSelector::Kind::Highest:
            return dim - 1;
        case StateSelector::Kind::Index:
            if (sel.index < 0 || sel.index >= dim)
                throw DomainError("state index " + std::to_string(sel.index) +
                                  " out of range [0," + std::to_string(dim - 1) + "]");
            return sel.index;
    }
    throw DomainError("invalid state selector");
}

DosHistogram density_of_states(const Spectrum& s, SpinMagnitude j, int bins) {
    if (bins < 2) throw DomainError("density_of_states: bins must be >= 2");
    const int n = static_cast<int>(s.energies.size());
    const double lo = s.energies(0) / j.j();
    const double hi = s.energies(n - 1) / j.j();
    if (!(hi > lo)) throw DomainError("density_of_states: degenerate energy range");

    DosHistogram h;
    h.bin_edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    const double w = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) h.bin_edges[b] = lo + b * w;
    h.bin_edges[bins] = hi;

    for (int k = 0; k < n; ++k) {
        const double x = s.energies(k) / j.j();
        int b = static_cast<int>((x - lo) / w);
        if (b >= bins) b = bins - 1;  // right-closed last bin
        if (b < 0) b = 0;
        ++h.counts[b];
    }
    return h;
}

}  // namespace lmg
