#include "triax/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triax/errors.hpp"
#include "triax/linalg.hpp"

namespace triax {

std::string to_string(Centering c) {
    switch (c) {
    case Centering::AllModes: return "all-modes";
    case Centering::Grand: return "grand";
    case Centering::None: return "none";
    }
    return "?";
}

std::string to_string(Prediction p) {
    switch (p) {
    case Prediction::Unique: return "UNIQUE";
    case Prediction::NonUnique: return "NON_UNIQUE";
    case Prediction::Marginal: return "MARGINAL";
    }
    return "?";
}

Tensor3 center_all_modes(const Tensor3& x) {
    const index_t n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
    Tensor3 y = x;
    for (index_t k = 0; k < n3; ++k)
        for (index_t j = 0; j < n2; ++j) {
            double mean = 0.0;
            for (index_t i = 0; i < n1; ++i) mean += y(i, j, k);
            mean /= static_cast<double>(n1);
            for (index_t i = 0; i < n1; ++i) y(i, j, k) -= mean;
        }
    for (index_t k = 0; k < n3; ++k)
        for (index_t i = 0; i < n1; ++i) {
            double mean = 0.0;
            for (index_t j = 0; j < n2; ++j) mean += y(i, j, k);
            mean /= static_cast<double>(n2);
            for (index_t j = 0; j < n2; ++j) y(i, j, k) -= mean;
        }
    for (index_t j = 0; j < n2; ++j)
        for (index_t i = 0; i < n1; ++i) {
            double mean = 0.0;
            for (index_t k = 0; k < n3; ++k) mean += y(i, j, k);
            mean /= static_cast<double>(n3);
            for (index_t k = 0; k < n3; ++k) y(i, j, k) -= mean;
        }
    return y;
}

Tensor3 center_grand(const Tensor3& x) {
    double mean = 0.0;
    for (double v : x.values()) mean += v;
    mean /= static_cast<double>(x.size());
    Tensor3 y = x;
    for (index_t i = 0; i < y.size(); ++i) y.data()[i] -= mean;
    return y;
}

std::array<std::vector<double>, 3> identity_spectra(const Tensor3& x, Centering centering) {
    Tensor3 c = x;
    switch (centering) {
    case Centering::AllModes: c = center_all_modes(x); break;
    case Centering::Grand: c = center_grand(x); break;
    case Centering::None: break;
    }
    if (frobenius_norm_sq(c) == 0.0)
        throw DataError("identity_spectra: degenerate spectrum (tensor is zero after centering)");

    std::array<std::vector<double>, 3> spectra;
    for (int mode = 1; mode <= 3; ++mode) {
        const Matrix m = unfold(c, mode);
        const Matrix gram = matmul_nt(m, m);
        std::vector<double> vals = sym_eig_all(gram).values;
        double sum = 0.0;
        for (double& v : vals) {
            if (v < 0.0) v = 0.0; // clamp eigen-roundoff
            sum += v;
        }
        for (double& v : vals) v /= sum;
        spectra[static_cast<std::size_t>(mode - 1)] = std::move(vals);
    }
    return spectra;
}

SpectrumReport predict_uniqueness(const std::array<std::vector<double>, 3>& spectra,
                                  TargetDims dims, double tau) {
    if (tau <= 0.0) throw ArgumentError("predict_uniqueness: tau must be positive");
    SpectrumReport report;
    report.spectra = spectra;
    report.dims = dims;
    report.tau = tau;

    const index_t cutoffs[3] = {dims.m1, dims.m2, dims.m3};
    bool any_vote = false;
    bool any_nonunique = false;
    bool all_unique = true;
    for (int m = 0; m < 3; ++m) {
        const auto& lam = spectra[static_cast<std::size_t>(m)];
        const index_t n = static_cast<index_t>(lam.size());
        const index_t cut = cutoffs[m];
        if (cut < 1) throw ArgumentError("predict_uniqueness: cutoff dims must be >= 1");
        if (cut >= n) {
            // Exact along this mode: no discarded eigenmode, no vote.
            report.gaps[static_cast<std::size_t>(m)] = std::numeric_limits<double>::quiet_NaN();
            report.mode_votes[static_cast<std::size_t>(m)] = Prediction::Unique;
            continue;
        }
        any_vote = true;
        const double top = lam[0];
        const double gap = (lam[static_cast<std::size_t>(cut - 1)] -
                            lam[static_cast<std::size_t>(cut)]) /
                           (top > 0.0 ? top : 1.0);
        report.gaps[static_cast<std::size_t>(m)] = gap;
        Prediction vote;
        if (gap < tau)
            vote = Prediction::NonUnique;
        else if (gap >= 2.0 * tau)
            vote = Prediction::Unique;
        else
            vote = Prediction::Marginal;
        report.mode_votes[static_cast<std::size_t>(m)] = vote;
        if (vote == Prediction::NonUnique) any_nonunique = true;
        if (vote != Prediction::Unique) all_unique = false;
    }

    if (!any_vote) {
        report.exact_decomposition = true;
        report.prediction = Prediction::Unique;
        report.note = "exact decomposition: retained dims cover every mode";
        return report;
    }
    if (any_nonunique)
        report.prediction = Prediction::NonUnique;
    else if (all_unique)
        report.prediction = Prediction::Unique;
    else
        report.prediction = Prediction::Marginal;
    return report;
}

SpectrumReport analyze_spectrum(const Tensor3& x, TargetDims dims, double tau,
                                Centering centering) {
    SpectrumReport report = predict_uniqueness(identity_spectra(x, centering), dims, tau);
    report.centering = centering;
    return report;
}

} // namespace triax
