#include "hbell/fock.hpp"

#include "hbell/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hbell {

namespace {

constexpr std::string_view kModule = "fock-core";

double sum_squares(std::span<const double> c) {
    return std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
}

Eigen::MatrixXcd density_matrix(const ConditionalEnsemble& e) {
    const std::size_t dim = (e.cutoff_a() + 1) * (e.cutoff_b() + 1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& br : e.branches()) {
        const Eigen::Map<const Eigen::VectorXcd> psi(br.state.data().data(), dim);
        rho.noalias() += br.weight * (psi * psi.adjoint());
    }
    return rho;
}

}  // namespace

CoefficientVector::CoefficientVector() : coeffs_{1.0}, normalized_(true) {}

CoefficientVector::CoefficientVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error(kModule, "coefficient vector needs at least one level");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw Error(kModule, "non-finite coefficient");
        }
    }
    normalized_ = std::abs(sum_squares(coeffs_) - 1.0) <= kNormTolerance;
}

CoefficientVector CoefficientVector::vacuum(std::size_t cutoff) {
    std::vector<double> c(cutoff + 1, 0.0);
    c[0] = 1.0;
    return CoefficientVector(std::move(c));
}

CoefficientVector CoefficientVector::resized(std::size_t cutoff) const {
    std::vector<double> c(coeffs_);
    c.resize(cutoff + 1, 0.0);
    return CoefficientVector(std::move(c));
}

double norm_squared(const CoefficientVector& v) { return sum_squares(v.coeffs()); }

CoefficientVector normalize(const CoefficientVector& v) {
    const double n2 = norm_squared(v);
    if (!(n2 > 0.0)) {
        throw Error(kModule, "cannot normalize a zero vector (impossible conditioning branch)");
    }
    const auto c = v.coeffs();
    const auto first = std::find_if(c.begin(), c.end(), [](double x) { return x != 0.0; });
    const double scale = (*first < 0.0 ? -1.0 : 1.0) / std::sqrt(n2);
    std::vector<double> out(c.size());
    std::transform(c.begin(), c.end(), out.begin(), [scale](double x) { return x * scale; });
    return CoefficientVector(std::move(out));
}

// ---------------------------------------------------------------------------

TwoModeAmplitudeMatrix::TwoModeAmplitudeMatrix(std::size_t cutoff_a, std::size_t cutoff_b, std::vector<cplx> amps)
    : rows_(cutoff_a + 1), cols_(cutoff_b + 1), amps_(std::move(amps)) {
    if (amps_.size() != rows_ * cols_) {
        throw Error(kModule, "two-mode amplitude size does not match cutoffs");
    }
    if (norm_squared() > 1.0 + kNormTolerance) {
        throw Error(kModule, "two-mode amplitude norm exceeds 1");
    }
}

TwoModeAmplitudeMatrix TwoModeAmplitudeMatrix::zeros(std::size_t cutoff_a, std::size_t cutoff_b) {
    return {cutoff_a, cutoff_b, std::vector<cplx>((cutoff_a + 1) * (cutoff_b + 1))};
}

TwoModeAmplitudeMatrix TwoModeAmplitudeMatrix::from_diagonal(const CoefficientVector& v) {
    const std::size_t dim = v.size();
    std::vector<cplx> amps(dim * dim);
    for (std::size_t n = 0; n < dim; ++n) {
        amps[n * dim + n] = v[n];
    }
    return {v.cutoff(), v.cutoff(), std::move(amps)};
}

double TwoModeAmplitudeMatrix::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& z : amps_) s += std::norm(z);
    return s;
}

CoefficientVector TwoModeAmplitudeMatrix::diagonal() const {
    const std::size_t dim = std::min(rows_, cols_);
    std::vector<double> c(dim);
    for (std::size_t n = 0; n < dim; ++n) c[n] = (*this)(n, n).real();
    return CoefficientVector(std::move(c));
}

double TwoModeAmplitudeMatrix::off_diagonal_max() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j < rows_; ++j)
        for (std::size_t k = 0; k < cols_; ++k)
            if (j != k) m = std::max(m, std::abs((*this)(j, k)));
    return m;
}

// ---------------------------------------------------------------------------

FourModeTensor::FourModeTensor(Dims dims, std::vector<cplx> amps) : dims_(dims), amps_(std::move(amps)) {
    const std::size_t expected = dims_[0] * dims_[1] * dims_[2] * dims_[3];
    if (expected == 0 || amps_.size() != expected) {
        throw Error(kModule, "four-mode tensor size does not match cutoffs");
    }
    if (norm_squared() > 1.0 + kNormTolerance) {
        throw Error(kModule, "four-mode tensor norm exceeds 1");
    }
}

FourModeTensor FourModeTensor::product(const TwoModeAmplitudeMatrix& ab, const TwoModeAmplitudeMatrix& cd) {
    const Dims dims{ab.rows(), ab.cols(), cd.rows(), cd.cols()};
    std::vector<cplx> amps;
    amps.reserve(ab.data().size() * cd.data().size());
    for (const auto& x : ab.data())
        for (const auto& y : cd.data()) amps.push_back(x * y);
    return {dims, std::move(amps)};
}

double FourModeTensor::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& z : amps_) s += std::norm(z);
    return s;
}

// ---------------------------------------------------------------------------

ConditionalEnsemble::ConditionalEnsemble(std::vector<Branch> branches, double success_probability)
    : branches_(std::move(branches)), success_probability_(success_probability) {}

ConditionalEnsemble ConditionalEnsemble::from_projections(std::vector<TwoModeAmplitudeMatrix> projected,
                                                          std::vector<std::vector<std::size_t>> outcomes) {
    if (projected.empty() || projected.size() != outcomes.size()) {
        throw Error(kModule, "ensemble needs one outcome label per projected branch");
    }
    double total = 0.0;
    for (const auto& p : projected) total += p.norm_squared();
    if (!(total > 0.0)) {
        throw Error(kModule, "impossible conditioning: zero success probability");
    }
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < projected.size(); ++i) {
        const double p = projected[i].norm_squared();
        if (p == 0.0) continue;
        const double inv = 1.0 / std::sqrt(p);
        std::vector<cplx> amps(projected[i].data().begin(), projected[i].data().end());
        for (auto& z : amps) z *= inv;
        branches.push_back({p / total,
                            TwoModeAmplitudeMatrix(projected[i].cutoff_a(), projected[i].cutoff_b(), std::move(amps)),
                            std::move(outcomes[i])});
    }
    return {std::move(branches), std::min(total, 1.0)};
}

ConditionalEnsemble ConditionalEnsemble::pure(const TwoModeAmplitudeMatrix& state) {
    const double p = state.norm_squared();
    if (std::abs(p - 1.0) > kNormTolerance) {
        throw Error(kModule, "pure ensemble requires a normalized state");
    }
    return {{Branch{1.0, state, {}}}, 1.0};
}

double trace_distance(const ConditionalEnsemble& lhs, const ConditionalEnsemble& rhs) {
    if (lhs.cutoff_a() != rhs.cutoff_a() || lhs.cutoff_b() != rhs.cutoff_b()) {
        throw Error(kModule, "trace distance between ensembles with different cutoffs");
    }
    const Eigen::MatrixXcd diff = density_matrix(lhs) - density_matrix(rhs);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    const double d = 0.5 * solver.eigenvalues().cwiseAbs().sum();
    return std::clamp(d, 0.0, 1.0);
}

double trace_distance_pure_vs_ensemble(const CoefficientVector& target, const ConditionalEnsemble& e) {
    if (target.cutoff() != e.cutoff_a() || target.cutoff() != e.cutoff_b()) {
        throw Error(kModule, "cutoff mismatch between target and ensemble");
    }
    return trace_distance(ConditionalEnsemble::pure(TwoModeAmplitudeMatrix::from_diagonal(normalize(target))), e);
}

}  // namespace hbell
