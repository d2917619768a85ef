#include "microsing/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "microsing/error.hpp"
#include "microsing/simd.hpp"

namespace microsing {

namespace {

bool all_finite(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(), [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// Class Gram matrix G_{ab} = sum_{j in a, k in b} |K_jk|^2, stored dense (classes x classes).
std::vector<long double> class_gram(const SmoothingKernel& T) {
    const auto& lat = T.lattice();
    const auto& cls = lat.eigen_class();
    const std::size_t C = lat.class_count();
    std::vector<long double> G(C * C, 0.0L);
    const auto& K = T.matrix();
    for (Eigen::Index k = 0; k < K.cols(); ++k) {
        const std::size_t b = std::size_t(cls[std::size_t(k)]);
        for (Eigen::Index j = 0; j < K.rows(); ++j) {
            const double m = std::norm(K(j, k));
            if (m != 0.0) G[std::size_t(cls[std::size_t(j)]) * C + b] += m;
        }
    }
    return G;
}

std::vector<long double> class_log_weights(const FrequencyLattice& lat) {
    std::vector<long double> lw;
    lw.reserve(lat.class_count());
    for (double l : lat.class_eigenvalue()) lw.push_back(std::log1p(static_cast<long double>(l)));
    return lw;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectralDistribution

SpectralDistribution::SpectralDistribution(FrequencyLattice lattice)
    : lattice_(std::move(lattice)), coeffs_(lattice_.size(), cplx(0.0)) {}

SpectralDistribution::SpectralDistribution(FrequencyLattice lattice, std::vector<cplx> coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == lattice_.size(), ErrorKind::InvalidInput, "coefficient count does not match lattice");
    require(all_finite(coeffs_), ErrorKind::InvalidInput, "non-finite distribution coefficient");
}

SpectralDistribution SpectralDistribution::from_function(const FrequencyLattice& lattice,
                                                         const std::function<cplx(Mode)>& f) {
    std::vector<cplx> c(lattice.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = f(lattice.mode(i));
    return SpectralDistribution(lattice, std::move(c));
}

cplx SpectralDistribution::at(Mode k) const { return coeffs_[lattice_.index(k)]; }

bool SpectralDistribution::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx z) { return z == cplx(0.0); });
}

SpectralDistribution SpectralDistribution::operator+(const SpectralDistribution& o) const {
    require_same_lattice(lattice_, o.lattice_, "distribution sum");
    std::vector<cplx> c(coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
    return SpectralDistribution(lattice_, std::move(c));
}

SpectralDistribution SpectralDistribution::operator-(const SpectralDistribution& o) const { return *this + o * cplx(-1.0); }

SpectralDistribution SpectralDistribution::operator*(cplx s) const {
    std::vector<cplx> c(coeffs_);
    for (auto& z : c) z *= s;
    return SpectralDistribution(lattice_, std::move(c));
}

bool SpectralDistribution::operator==(const SpectralDistribution& o) const {
    return lattice_ == o.lattice_ && coeffs_ == o.coeffs_;
}

// ---------------------------------------------------------------------------
// SmoothingKernel

SmoothingKernel::SmoothingKernel(FrequencyLattice lattice)
    : lattice_(std::move(lattice)),
      K_(Eigen::MatrixXcd::Zero(Eigen::Index(lattice_.size()), Eigen::Index(lattice_.size()))) {}

SmoothingKernel::SmoothingKernel(FrequencyLattice lattice, Eigen::MatrixXcd matrix)
    : lattice_(std::move(lattice)), K_(std::move(matrix)) {
    const auto n = Eigen::Index(lattice_.size());
    require(K_.rows() == n && K_.cols() == n, ErrorKind::InvalidInput, "kernel matrix must be square over the lattice");
    require(K_.allFinite(), ErrorKind::InvalidInput, "non-finite kernel entry");
}

SmoothingKernel SmoothingKernel::identity(const FrequencyLattice& lattice) {
    const auto n = Eigen::Index(lattice.size());
    return SmoothingKernel(lattice, Eigen::MatrixXcd::Identity(n, n));
}

SmoothingKernel SmoothingKernel::diagonal(const FrequencyLattice& lattice, const std::vector<cplx>& weights) {
    require(weights.size() == lattice.size(), ErrorKind::InvalidInput, "diagonal weight count does not match lattice");
    SmoothingKernel T(lattice);
    for (std::size_t i = 0; i < weights.size(); ++i) T.K_(Eigen::Index(i), Eigen::Index(i)) = weights[i];
    require(T.K_.allFinite(), ErrorKind::InvalidInput, "non-finite diagonal weight");
    return T;
}

SmoothingKernel SmoothingKernel::rank_one(const FrequencyLattice& lattice, Mode j, Mode k, cplx value) {
    SmoothingKernel T(lattice);
    T.K_(Eigen::Index(lattice.index(j)), Eigen::Index(lattice.index(k))) = value;
    return T;
}

bool SmoothingKernel::is_zero() const noexcept { return K_.isZero(0.0); }

SmoothingKernel SmoothingKernel::operator+(const SmoothingKernel& o) const {
    require_same_lattice(lattice_, o.lattice_, "kernel sum");
    return SmoothingKernel(lattice_, K_ + o.K_);
}
SmoothingKernel SmoothingKernel::operator-(const SmoothingKernel& o) const {
    require_same_lattice(lattice_, o.lattice_, "kernel difference");
    return SmoothingKernel(lattice_, K_ - o.K_);
}
SmoothingKernel SmoothingKernel::operator*(cplx s) const { return SmoothingKernel(lattice_, K_ * s); }

// ---------------------------------------------------------------------------
// norms

double sobolev_norm(const SpectralDistribution& u, double s) {
    require(std::isfinite(s), ErrorKind::InvalidInput, "Sobolev index must be finite");
    const auto& lat = u.lattice();
    const auto& lambda = lat.eigenvalues();
    // Rescale weights by the largest exponent so huge |s| cannot overflow.
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != cplx(0.0)) shift = std::max(shift, s * std::log1p(lambda[i]));
    if (!std::isfinite(shift)) return 0.0;
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(s * std::log1p(lambda[i]) - shift);
    const double acc = simd::weighted_norm2(w.data(), u.coeffs().data(), u.size());
    return std::sqrt(acc) * std::exp(0.5 * shift);
}

double hs_norm(const SmoothingKernel& T, double p, double q) {
    require(std::isfinite(p) && std::isfinite(q), ErrorKind::InvalidInput, "HS exponents must be finite");
    const auto G = class_gram(T);
    const auto lw = class_log_weights(T.lattice());
    const std::size_t C = lw.size();
    long double acc = 0.0L;
    for (std::size_t a = 0; a < C; ++a)
        for (std::size_t b = 0; b < C; ++b) {
            const long double g = G[a * C + b];
            if (g != 0.0L) acc += g * std::exp(static_cast<long double>(p) * lw[a] + static_cast<long double>(q) * lw[b]);
        }
    return double(std::sqrt(acc));
}

long graded_pair_count(double n) {
    if (n < 0) return 0;
    const long lo = long(std::ceil(-n));
    long count = 0;
    for (long p = lo; double(p) + double(lo) <= n; ++p)
        for (long q = lo; double(p + q) <= n; ++q) ++count;
    return count;
}

double graded_kernel_norm(const SmoothingKernel& T, double n) {
    require(n >= 0.0, ErrorKind::InvalidInput, "graded kernel norm needs n >= 0");
    return KernelNormTable(T, int(std::ceil(n))).graded(n);
}

SpectralDistribution apply_kernel(const SmoothingKernel& T, const SpectralDistribution& u) {
    require_same_lattice(T.lattice(), u.lattice(), "apply_kernel");
    const Eigen::Map<const Eigen::VectorXcd> a(u.coeffs().data(), Eigen::Index(u.size()));
    const Eigen::VectorXcd b = T.matrix() * a;
    return SpectralDistribution(u.lattice(), std::vector<cplx>(b.data(), b.data() + b.size()));
}

// ---------------------------------------------------------------------------
// cached tables

DistributionNormTable::DistributionNormTable(const SpectralDistribution& u)
    : class_mass_(u.lattice().class_count(), 0.0L), class_log_weight_(class_log_weights(u.lattice())) {
    const auto& cls = u.lattice().eigen_class();
    for (std::size_t i = 0; i < u.size(); ++i) class_mass_[std::size_t(cls[i])] += std::norm(u[i]);
}

double DistributionNormTable::sobolev(double s) const {
    long double acc = 0.0L;
    for (std::size_t a = 0; a < class_mass_.size(); ++a)
        if (class_mass_[a] != 0.0L) acc += class_mass_[a] * std::exp(static_cast<long double>(s) * class_log_weight_[a]);
    return double(std::sqrt(acc));
}

KernelNormTable::KernelNormTable(const SmoothingKernel& T, int max_index) : S_(max_index), width_(3 * max_index + 1) {
    require(max_index >= 0, ErrorKind::InvalidInput, "norm table index must be >= 0");
    const auto G = class_gram(T);
    const auto lw = class_log_weights(T.lattice());
    const std::size_t C = lw.size();
    // Powers (1+lambda_a)^e for e in [-S, 2S]; long double keeps the products in range.
    std::vector<long double> pw(std::size_t(width_) * C);
    for (int e = -S_; e <= 2 * S_; ++e)
        for (std::size_t a = 0; a < C; ++a) pw[std::size_t(e + S_) * C + a] = std::exp(static_cast<long double>(e) * lw[a]);
    std::vector<std::pair<std::size_t, std::size_t>> nz;
    for (std::size_t a = 0; a < C; ++a)
        for (std::size_t b = 0; b < C; ++b)
            if (G[a * C + b] != 0.0L) nz.emplace_back(a, b);
    table_.assign(std::size_t(width_) * std::size_t(width_), 0.0);
    std::vector<long double> v(C);
    for (int q = -S_; q <= 2 * S_; ++q) {
        std::fill(v.begin(), v.end(), 0.0L);
        const long double* wq = &pw[std::size_t(q + S_) * C];
        for (auto [a, b] : nz) v[a] += G[a * C + b] * wq[b];
        for (int p = -S_; p <= 2 * S_; ++p) {
            const long double* wp = &pw[std::size_t(p + S_) * C];
            long double acc = 0.0L;
            for (std::size_t a = 0; a < C; ++a) acc += wp[a] * v[a];
            table_[std::size_t(p + S_) * std::size_t(width_) + std::size_t(q + S_)] = double(std::sqrt(acc));
        }
    }
}

double KernelNormTable::hs(int p, int q) const {
    require(p >= -S_ && p <= 2 * S_ && q >= -S_ && q <= 2 * S_, ErrorKind::InvalidInput, "HS index outside cached table");
    return table_[std::size_t(p + S_) * std::size_t(width_) + std::size_t(q + S_)];
}

double KernelNormTable::graded(double n) const {
    require(n >= 0.0 && n <= double(S_), ErrorKind::InvalidInput, "graded index outside cached table");
    const int lo = int(std::ceil(-n));
    double acc = 0.0;
    for (int p = lo; double(p + lo) <= n; ++p)
        for (int q = lo; double(p + q) <= n; ++q) acc += hs(p, q);
    return acc;
}

// ---------------------------------------------------------------------------
// reports

bool GradedNormReport::nonnegative() const noexcept {
    return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.second >= 0.0; });
}

bool GradedNormReport::nondecreasing(double rel_tol) const noexcept {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i].second < values[i - 1].second * (1.0 - rel_tol)) return false;
    return true;
}

std::string GradedNormReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,value\n";
    for (const auto& [n, v] : values) os << n << ',' << v << '\n';
    return os.str();
}

GradedNormReport graded_norm_report(const std::string& id, const SpectralDistribution& u, int n_lo, int n_hi) {
    require(n_lo <= n_hi, ErrorKind::InvalidConfig, "empty norm window");
    GradedNormReport r{id, {}};
    const DistributionNormTable t(u);
    for (int n = n_lo; n <= n_hi; ++n) r.values.emplace_back(n, t.sobolev(n));
    return r;
}

GradedNormReport graded_norm_report(const std::string& id, const SmoothingKernel& T, int n_lo, int n_hi) {
    require(0 <= n_lo && n_lo <= n_hi, ErrorKind::InvalidConfig, "kernel norm window must satisfy 0 <= n_lo <= n_hi");
    GradedNormReport r{id, {}};
    const KernelNormTable t(T, n_hi);
    for (int n = n_lo; n <= n_hi; ++n) r.values.emplace_back(n, t.graded(n));
    return r;
}

}  // namespace microsing
