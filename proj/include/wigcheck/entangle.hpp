#pragma once

// Two-mode entanglement detection via partial transpose. On phase-space
// functions the partial transpose conjugates one mode's variable; on the
// coefficient table it swaps that mode's index pair. A separable state stays
// positive under this map, so a negative eigenvalue (or a negative principal
// minor) of the partially transposed quasi-density matrix certifies
// entanglement. A positive result never claims separability: PPT entangled
// states exist and the truncation is finite.

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "wigcheck/fock_matrix.hpp"

namespace wigcheck {

enum class EntangleVerdict { entangled_certified, no_pt_witness_up_to_N };

inline const char* verdict_name(EntangleVerdict v) {
    return v == EntangleVerdict::entangled_certified ? "entangled-certified" : "no-PT-witness-up-to-N";
}

struct EntanglementReport {
    EntangleVerdict verdict = EntangleVerdict::no_pt_witness_up_to_N;
    double pt_min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    std::vector<cx> witness; // certificate in the collective Fock basis
    std::vector<double> determinant_trace; // leading principal minors of the PT matrix
    std::vector<std::pair<int, int>> basis;
    int truncation = 0;
    double tolerance = 0.0;
    double normalization = std::numeric_limits<double>::quiet_NaN();
    bool quad_warning = false;
    bool truncation_flag = false;
};

// Full PT test: two-mode coefficients, index swap, collective matrix,
// positivity verdict.
inline EntanglementReport pt_test(const DistributionSpec& spec, int truncation,
                                  double tolerance = std::numeric_limits<double>::quiet_NaN()) {
    if (spec.modes != 2) throw usage_error("pt_test: two-mode spec required");
    const CharacteristicFunction cf = characteristic(spec);
    const CoefficientTable table = pt_coefficients(coefficients_lambda_route(cf, truncation));
    const QuasiDensityMatrix pt = build_matrix(table, truncation);
    const double tol = std::isnan(tolerance) ? default_psd_tolerance(pt) : tolerance;
    const LegitimacyReport inner = psd_verdict(pt, tol);

    EntanglementReport rep;
    rep.pt_min_eigenvalue = inner.min_eigenvalue;
    rep.witness = inner.certificate;
    rep.determinant_trace = inner.leading_minors;
    rep.basis = pt.basis;
    rep.truncation = truncation;
    rep.tolerance = tol;
    rep.quad_warning = inner.quad_warning;
    rep.truncation_flag = inner.truncation_flag;
    rep.normalization = check_normalization(spec).value;

    bool negative_minor = false;
    for (double d : rep.determinant_trace)
        if (d < -tol) negative_minor = true;
    rep.verdict = (inner.verdict == Verdict::illegitimate_certified || negative_minor)
                      ? EntangleVerdict::entangled_certified
                      : EntangleVerdict::no_pt_witness_up_to_N;
    return rep;
}

struct PtBlock {
    double determinant = 0.0;
    Eigen::MatrixXcd block;
    std::vector<std::pair<int, int>> basis;
    std::vector<double> leading_minors;
};

// PT matrix restricted to collective indices with k1+k2 <= N (dimension
// (N+1)(N+2)/2) and its determinant. N = 1 gives the 3x3 block on
// {|00>, |01>, |10>}; a negative principal block determinant certifies
// entanglement for states with bounded total excitation.
inline PtBlock pt_block_determinant(const DistributionSpec& spec, int excitation_bound) {
    if (spec.modes != 2) throw usage_error("pt_block_determinant: two-mode spec required");
    if (excitation_bound < 1) throw usage_error("pt_block_determinant: excitation bound must be >= 1");
    const CharacteristicFunction cf = characteristic(spec);
    const CoefficientTable table = pt_coefficients(coefficients_lambda_route(cf, excitation_bound));
    const QuasiDensityMatrix pt = build_matrix(table, excitation_bound);

    PtBlock out;
    out.block = pt.mat;
    out.basis = pt.basis;
    out.determinant = pt.mat.determinant().real();
    out.leading_minors = detail::leading_principal_minors(pt.mat);
    return out;
}

} // namespace wigcheck
