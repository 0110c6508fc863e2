#pragma once

#include <vector>

#include "lmg/spin_model.hpp"

namespace lmg {

/// Full eigendecomposition of a real-symmetric Hamiltonian.
/// Eigenvalues ascending; columns of `states` orthonormal, sign-fixed so the
/// largest-magnitude component of each eigenvector is positive.
struct Spectrum {
    RealVector energies;
    RealMatrix states;
    double width() const { return energies(energies.size() - 1) - energies(0); }
};

/// General Hermitian variant (kept for rotated/complex Hamiltonians).
/// Phase-fixed so the largest-magnitude component is positive real.
struct ComplexSpectrum {
    RealVector energies;
    ComplexMatrix states;
    double width() const { return energies(energies.size() - 1) - energies(0); }
};

Spectrum diagonalize(const RealMatrix& h);
ComplexSpectrum diagonalize_hermitian(const ComplexMatrix& h);

struct StateSelector {
    enum class Kind { Ground, Highest, Index };
    Kind kind = Kind::Ground;
    int index = 0;

    static StateSelector ground() { return {Kind::Ground, 0}; }
    static StateSelector highest() { return {Kind::Highest, 0}; }
    static StateSelector at(int k) { return {Kind::Index, k}; }
};

/// Resolve a selector against a spectrum of the given dimension.
int select_state(int dim, StateSelector sel);

struct DosHistogram {
    std::vector<double> bin_edges;  // bins+1 edges over E/j, strictly increasing
    std::vector<long> counts;       // sum = 2j+1
};

/// Histogram of {E_k/j} with equal-width bins over [min, max]; the last bin
/// is right-closed.
DosHistogram density_of_states(const Spectrum& s, SpinMagnitude j, int bins);

}  // namespace lmg
