#include "microsing/lattice.hpp"

#include <algorithm>
#include <map>

#include "microsing/error.hpp"

namespace microsing {

FrequencyLattice::FrequencyLattice(int dim, int bandlimit) : dim_(dim), N_(bandlimit) {
    require(dim == 1 || dim == 2, ErrorKind::InvalidConfig, "lattice dimension must be 1 or 2");
    require(bandlimit >= 4, ErrorKind::InvalidConfig, "lattice bandlimit must be >= 4");
    require(bandlimit <= (dim == 1 ? 1 << 16 : 1024), ErrorKind::InvalidConfig, "lattice bandlimit too large");
    auto t = std::make_shared<Tables>();
    const std::size_t n = size();
    t->lambda.resize(n);
    std::map<long, int> classes;
    for (std::size_t i = 0; i < n; ++i) {
        const Mode k = mode(i);
        const long l = long(k.k1) * k.k1 + long(k.k2) * k.k2;
        t->lambda[i] = double(l);
        classes.emplace(l, 0);
    }
    int c = 0;
    for (auto& [l, id] : classes) {
        id = c++;
        t->class_lambda.push_back(double(l));
    }
    t->cls.resize(n);
    for (std::size_t i = 0; i < n; ++i) t->cls[i] = classes.at(long(t->lambda[i]));
    tables_ = std::move(t);
}

std::size_t FrequencyLattice::size() const noexcept {
    const std::size_t s = std::size_t(side());
    return dim_ == 1 ? s : s * s;
}

bool FrequencyLattice::contains(Mode k) const noexcept {
    if (k.k1 < -N_ || k.k1 > N_) return false;
    if (dim_ == 1) return k.k2 == 0;
    return k.k2 >= -N_ && k.k2 <= N_;
}

std::size_t FrequencyLattice::index(Mode k) const {
    require(contains(k), ErrorKind::InvalidInput, "mode outside lattice");
    if (dim_ == 1) return std::size_t(k.k1 + N_);
    return std::size_t(k.k1 + N_) * std::size_t(side()) + std::size_t(k.k2 + N_);
}

Mode FrequencyLattice::mode(std::size_t i) const noexcept {
    if (dim_ == 1) return {int(i) - N_, 0};
    const int s = side();
    return {int(i / s) - N_, int(i % s) - N_};
}

int FrequencyLattice::sup_norm(std::size_t i) const noexcept {
    const Mode k = mode(i);
    return std::max(std::abs(k.k1), std::abs(k.k2));
}

std::string FrequencyLattice::describe() const {
    return "d=" + std::to_string(dim_) + " N=" + std::to_string(N_);
}

void require_same_lattice(const FrequencyLattice& a, const FrequencyLattice& b, const char* where) {
    if (a != b)
        fail(ErrorKind::LatticeMismatch, std::string(where) + ": " + a.describe() + " vs " + b.describe());
}

}  // namespace microsing
