#include "dha/dyadic.hpp"

#include <cstdlib>
#include <sstream>

namespace dha {

double tolerance() {
    static const double tol = [] {
        if (const char* env = std::getenv("DHT_TOLERANCE")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end != env && v > 0.0) return v;
        }
        return pow2(-40);
    }();
    return tol;
}

namespace {

bool is_multiple(double x, int scale) {
    const double q = std::ldexp(x, -scale);
    return std::floor(q) == q;
}

}  // namespace

bool GridInterval::aligned_to(int scale) const noexcept {
    return is_multiple(lo, scale) && is_multiple(hi, scale);
}

bool DyadicInterval::contains(const DyadicInterval& o) const noexcept {
    if (o.n > n) return false;
    return (o.k >> (n - o.n)) == k;
}

std::optional<DyadicInterval> intersect(const DyadicInterval& a, const DyadicInterval& b) {
    if (a.contains(b)) return b;
    if (b.contains(a)) return a;
    return std::nullopt;
}

std::optional<DyadicInterval> as_dyadic(const GridInterval& J) {
    const double len = J.length();
    if (!(len > 0.0)) return std::nullopt;
    int e = 0;
    const double mant = std::frexp(len, &e);
    if (mant != 0.5) return std::nullopt;
    const int n = e - 1;
    const double q = std::ldexp(J.lo, -n);
    if (std::floor(q) != q) return std::nullopt;
    return DyadicInterval{n, static_cast<std::int64_t>(q)};
}

std::optional<DyadicInterval> smallest_dyadic_cover(const GridInterval& J) {
    if (!(J.length() > 0.0) || !J.one_sided()) return std::nullopt;
    int e = 0;
    std::frexp(J.length(), &e);
    // 2^(e-1) <= |J| < 2^e; start from the first scale that can hold J.
    for (int n = e - 1; n < 1100; ++n) {
        const double k = std::floor(std::ldexp(J.lo, -n));
        const DyadicInterval I{n, static_cast<std::int64_t>(k)};
        if (I.grid().contains(J)) return I;
    }
    return std::nullopt;
}

std::string to_string(const DyadicInterval& I) {
    std::ostringstream os;
    os << "I(" << I.n << "," << I.k << ")";
    return os.str();
}

std::string to_string(const GridInterval& J) {
    std::ostringstream os;
    os << "[" << J.lo << "," << J.hi << ")";
    return os.str();
}

}  // namespace dha
