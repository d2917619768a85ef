#include "microsing/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "microsing/error.hpp"
#include "microsing/serialization.hpp"

namespace microsing::corpus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm_factor(int d) { return std::pow(kTwoPi, -0.5 * d); }

double parse_number(const std::string& s, const std::string& spec) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::Usage, "cannot parse number in distribution spec '" + spec + "'");
    }
}

std::uint64_t parse_seed(const std::string& s, const std::string& spec) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::Usage, "cannot parse seed in distribution spec '" + spec + "'");
    }
}

}  // namespace

SpectralDistribution delta(const FrequencyLattice& lat, Point x0) {
    const double c = norm_factor(lat.dim());
    return SpectralDistribution::from_function(lat, [&](Mode k) { return std::polar(c, -(k.k1 * x0[0] + k.k2 * x0[1])); });
}

SpectralDistribution delta_prime(const FrequencyLattice& lat, double x0) {
    require(lat.dim() == 1, ErrorKind::Unsupported, "delta_prime is one-dimensional");
    const double c = norm_factor(1);
    // <delta', phi> = -phi'(x0); coefficient of phi_k is i k times that of delta
    return SpectralDistribution::from_function(
        lat, [&](Mode k) { return std::complex<double>(0.0, double(k.k1)) * std::polar(c, -k.k1 * x0); });
}

SpectralDistribution hardy(const FrequencyLattice& lat) {
    require(lat.dim() == 1, ErrorKind::Unsupported, "hardy distribution is one-dimensional");
    return SpectralDistribution::from_function(lat, [](Mode k) { return k.k1 >= 0 ? cplx(1.0 / (1.0 + k.k1)) : cplx(0.0); });
}

SpectralDistribution sawtooth(const FrequencyLattice& lat) {
    require(lat.dim() == 1, ErrorKind::Unsupported, "sawtooth is one-dimensional");
    return SpectralDistribution::from_function(lat, [](Mode k) {
        return k.k1 == 0 ? cplx(0.0) : cplx(1.0) / cplx(0.0, double(k.k1));
    });
}

SpectralDistribution power_law(const FrequencyLattice& lat, double alpha) {
    return SpectralDistribution::from_function(lat, [&](Mode k) {
        const double r = std::max(std::abs(k.k1), std::abs(k.k2));
        return std::polar(std::pow(1.0 + r, -alpha), 0.7 * k.k1 + 0.3 * k.k2);
    });
}

SpectralDistribution exp_decay(const FrequencyLattice& lat, double rate) {
    return SpectralDistribution::from_function(lat, [&](Mode k) {
        return cplx(std::exp(-rate * std::sqrt(double(k.k1) * k.k1 + double(k.k2) * k.k2)));
    });
}

SpectralDistribution gaussian_decay(const FrequencyLattice& lat, double width) {
    require(width > 0, ErrorKind::InvalidInput, "gaussian width must be positive");
    return SpectralDistribution::from_function(lat, [&](Mode k) {
        return cplx(std::exp(-(double(k.k1) * k.k1 + double(k.k2) * k.k2) / (2.0 * width * width)));
    });
}

SpectralDistribution random_smooth(const FrequencyLattice& lat, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> c(lat.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Mode k = lat.mode(i);
        const double r = std::sqrt(double(k.k1) * k.k1 + double(k.k2) * k.k2);
        const double re = g(rng), im = g(rng);
        c[i] = cplx(re, im) * std::exp(-0.5 * r);
    }
    return SpectralDistribution(lat, std::move(c));
}

SpectralDistribution random_phase(const FrequencyLattice& lat, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    std::vector<cplx> c(lat.size());
    for (auto& z : c) z = std::polar(1.0, ph(rng));
    return SpectralDistribution(lat, std::move(c));
}

SpectralDistribution band_limited_random(const FrequencyLattice& lat, std::uint64_t seed, int K) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> c(lat.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double re = g(rng), im = g(rng);
        if (lat.sup_norm(i) <= K) c[i] = cplx(re, im);
    }
    return SpectralDistribution(lat, std::move(c));
}

SpectralDistribution line_delta(const FrequencyLattice& lat2) {
    require(lat2.dim() == 2, ErrorKind::Unsupported, "line delta lives on T^2");
    // delta(x) (x) 1(y) = sum_k phi_k(x) phi_0(y) * (2pi)^{-1/2} * (2pi)^{1/2}
    return SpectralDistribution::from_function(lat2, [](Mode k) { return k.k2 == 0 ? cplx(1.0) : cplx(0.0); });
}

SpectralDistribution multiply(const TrigPoly& f, const SpectralDistribution& u) {
    const auto& lat = u.lattice();
    require(f.dim() == lat.dim(), ErrorKind::LatticeMismatch, "multiplier dimension differs from lattice");
    // phi_k times e^{i nu x} = phi_{k+nu}; out-of-lattice frequencies are dropped
    std::vector<cplx> out(u.size(), cplx(0.0));
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == cplx(0.0)) continue;
        const Mode k = lat.mode(i);
        for (const auto& [nu, c] : f.coeffs()) {
            const Mode j = k + nu;
            if (lat.contains(j)) out[lat.index(j)] += c * u[i];
        }
    }
    return SpectralDistribution(lat, std::move(out));
}

SpectralDistribution parse_spec(const std::string& spec, const FrequencyLattice& lat) {
    require(!spec.empty(), ErrorKind::Usage, "empty distribution spec");
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    const bool has_arg = colon != std::string::npos;
    auto need_arg = [&] { require(has_arg && !arg.empty(), ErrorKind::Usage, "spec '" + spec + "' needs an argument"); };
    if (name == "delta") {
        const double x0 = has_arg ? parse_number(arg, spec) : 0.0;
        return delta(lat, {x0, 0.0});
    }
    if (name == "hardy" && !has_arg) return hardy(lat);
    if (name == "sawtooth" && !has_arg) return sawtooth(lat);
    if (name == "zero" && !has_arg) return SpectralDistribution(lat);
    if (name == "power") return need_arg(), power_law(lat, parse_number(arg, spec));
    if (name == "exp") return need_arg(), exp_decay(lat, parse_number(arg, spec));
    if (name == "gaussian") return need_arg(), gaussian_decay(lat, parse_number(arg, spec));
    if (name == "random") return need_arg(), random_phase(lat, parse_seed(arg, spec));
    if (name == "random-smooth") return need_arg(), random_smooth(lat, parse_seed(arg, spec));
    if (name == "modes") {
        need_arg();
        auto u = read_distribution_file(arg);
        require_same_lattice(u.lattice(), lat, "modes file");
        return u;
    }
    fail(ErrorKind::Usage, "unknown distribution spec '" + spec + "'");
}

}  // namespace microsing::corpus
