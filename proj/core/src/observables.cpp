#include "crowdyn/observables.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace crowdyn {

std::vector<cplx> amplitude(std::span<const cplx> u, cplx alpha0) {
    std::vector<cplx> a(u.size());
    std::transform(u.begin(), u.end(), a.begin(), [&](cplx x) { return x * alpha0; });
    return a;
}

std::vector<double> photon_number(std::span<const cplx> u, std::span<const double> v, double n0) {
    if (u.size() != v.size()) throw ConfigError("u and v have different lengths");
    std::vector<double> n(u.size());
    for (std::size_t j = 0; j < n.size(); ++j) n[j] = std::norm(u[j]) * n0 + v[j];
    return n;
}

std::vector<double> photon_current(std::span<const double> n, double dt) {
    const std::size_t len = n.size();
    std::vector<double> current(len, 0.0);
    if (len < 2) return current;
    if (dt <= 0.0) throw ConfigError("photon_current: dt must be positive");
    current[0] = -(n[1] - n[0]) / dt;
    current[len - 1] = -(n[len - 1] - n[len - 2]) / dt;
    for (std::size_t j = 1; j + 1 < len; ++j) current[j] = -(n[j + 1] - n[j - 1]) / (2.0 * dt);
    return current;
}

double FockDensityMatrix::mean_photon_number() const {
    double s = 0.0;
    for (Eigen::Index m = 0; m < elements.rows(); ++m) s += static_cast<double>(m) * elements(m, m).real();
    return s;
}

FockDensityMatrix density_matrix(cplx alpha, double v, std::size_t n_max) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("density_matrix: v must be non-negative");
    if (n_max < 1) throw ConfigError("density_matrix: n_max must be at least 1");

    const auto dim = static_cast<Eigen::Index>(n_max + 1);
    const cplx z = alpha / (1.0 + v);
    const double abs_z = std::abs(z);
    const double arg_z = std::arg(z);
    const double log_ratio = v > 0.0 ? std::log(v / (1.0 + v)) : 0.0;
    const double log_lead = -std::log1p(v);

    // Columns ψ_n = e^{z a†}|n⟩ scaled by sqrt(w_n), so ρ ∝ Σ_n ψ_n ψ_n†.
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dim, dim);
    double kept_weight = 0.0;
    Eigen::Index n_terms = 0;
    for (Eigen::Index n = 0; n < dim; ++n) {
        if (n > 0 && v == 0.0) break;
        const double log_w = log_lead + static_cast<double>(n) * log_ratio;
        for (Eigen::Index m = n; m < dim; ++m) {
            const auto k = static_cast<double>(m - n);
            if (k > 0 && abs_z == 0.0) break;
            const double log_mag = (k > 0 ? k * std::log(abs_z) : 0.0) - std::lgamma(k + 1.0) +
                                   0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) + 0.5 * log_w;
            psi(m, n) = std::polar(std::exp(log_mag), k * arg_z);
        }
        kept_weight += std::exp(log_w);
        n_terms = n + 1;
        if (kept_weight > 1.0 - 1e-12) break;
    }

    FockDensityMatrix rho;
    rho.n_max = n_max;
    rho.alpha = alpha;
    rho.v = v;
    Eigen::MatrixXcd un = psi.leftCols(n_terms) * psi.leftCols(n_terms).adjoint();
    un = 0.5 * (un + un.adjoint()).eval();
    const double tr = un.trace().real();
    // Exact trace of the untruncated mixture is e^{|α|²/(1+v)}.
    const double log_exact = std::norm(alpha) / (1.0 + v);
    rho.truncation_error = std::max(0.0, -std::expm1(std::log(tr) - log_exact));
    rho.elements = un / tr;

    if (rho.elements(dim - 1, dim - 1).real() > kFockTailLimit) {
        throw NumericalError("truncation too small: n_max=" + std::to_string(n_max));
    }
    return rho;
}

FockDensityMatrix density_matrix_auto(cplx alpha, double v, std::size_t n_start, std::size_t n_cap) {
    std::size_t n = std::max<std::size_t>(1, n_start);
    while (true) {
        try {
            return density_matrix(alpha, v, n);
        } catch (const NumericalError&) {
            if (n >= n_cap) throw;
            n = std::min(2 * n, n_cap);
        }
    }
}

double purity(const FockDensityMatrix& rho) { return rho.elements.cwiseAbs2().sum(); }

double min_eigenvalue(const FockDensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.elements, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace crowdyn
