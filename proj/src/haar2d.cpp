#include "dha/haar2d.hpp"

#include <algorithm>
#include <cmath>

#include "dha/errors.hpp"

namespace dha {

StepFunction2D::StepFunction2D(int cell_scale, std::int64_t kx0, std::int64_t ky0, std::size_t nx, std::size_t ny,
                               std::vector<double> values)
    : m_(cell_scale), kx0_(kx0), ky0_(ky0), nx_(nx), ny_(ny), v_(std::move(values)) {
    if (v_.size() != nx_ * ny_) throw PreconditionError("StepFunction2D: value count does not match the shape");
    if (std::abs(cell_scale) > 900) throw RangeError("StepFunction2D: cell scale is not representable");
    if (v_.size() > static_cast<std::size_t>(kMaxCells)) throw RangeError("StepFunction2D: too many cells");
}

StepFunction2D StepFunction2D::tensor(const StepFunction& f, const StepFunction& g) {
    const int m = std::min(f.cell_scale(), g.cell_scale());
    const StepFunction a = f.cell_scale() > m ? f.refined(m) : f;
    const StepFunction b = g.cell_scale() > m ? g.refined(m) : g;
    std::vector<double> v(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) v[i * b.size() + j] = a.values()[i] * b.values()[j];
    return {m, a.cell_start(), b.cell_start(), a.size(), b.size(), std::move(v)};
}

double StepFunction2D::at(std::int64_t i, std::int64_t j) const noexcept {
    const std::int64_t a = i - kx0_, b = j - ky0_;
    if (a < 0 || b < 0 || a >= static_cast<std::int64_t>(nx_) || b >= static_cast<std::int64_t>(ny_)) return 0.0;
    return v_[static_cast<std::size_t>(a) * ny_ + static_cast<std::size_t>(b)];
}

double StepFunction2D::operator()(double x, double y) const noexcept {
    return at(static_cast<std::int64_t>(std::floor(std::ldexp(x, -m_))),
              static_cast<std::int64_t>(std::floor(std::ldexp(y, -m_))));
}

StepFunction2D StepFunction2D::refined(int new_scale) const {
    if (new_scale > m_) throw ResolutionError("StepFunction2D: cannot coarsen");
    if (new_scale == m_) return *this;
    const std::size_t r = std::size_t{1} << (m_ - new_scale);
    std::vector<double> v(nx_ * r * ny_ * r);
    for (std::size_t i = 0; i < nx_ * r; ++i)
        for (std::size_t j = 0; j < ny_ * r; ++j) v[i * ny_ * r + j] = v_[(i / r) * ny_ + j / r];
    return {new_scale, kx0_ * static_cast<std::int64_t>(r), ky0_ * static_cast<std::int64_t>(r), nx_ * r, ny_ * r,
            std::move(v)};
}

double StepFunction2D::integral() const {
    CompensatedSum acc;
    for (double x : v_) acc.add(x);
    return acc.value() * cell_area();
}

namespace {

std::pair<StepFunction2D, StepFunction2D> common(const StepFunction2D& f, const StepFunction2D& g) {
    const int m = std::min(f.cell_scale(), g.cell_scale());
    return {f.refined(m), g.refined(m)};
}

struct Box {
    std::int64_t x0, x1, y0, y1;
};

Box union_box(const StepFunction2D& a, const StepFunction2D& b) {
    auto ex = [](const StepFunction2D& f) {
        return Box{f.kx0(), f.kx0() + static_cast<std::int64_t>(f.nx()), f.ky0(),
                   f.ky0() + static_cast<std::int64_t>(f.ny())};
    };
    const Box p = ex(a), q = ex(b);
    if (a.values().empty()) return q;
    if (b.values().empty()) return p;
    return {std::min(p.x0, q.x0), std::max(p.x1, q.x1), std::min(p.y0, q.y0), std::max(p.y1, q.y1)};
}

}  // namespace

StepFunction2D combine(const StepFunction2D& f, double alpha, const StepFunction2D& g, double beta) {
    const auto [a, b] = common(f, g);
    const Box u = union_box(a, b);
    const auto nx = static_cast<std::size_t>(u.x1 - u.x0), ny = static_cast<std::size_t>(u.y1 - u.y0);
    std::vector<double> v(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const std::int64_t gi = u.x0 + static_cast<std::int64_t>(i), gj = u.y0 + static_cast<std::int64_t>(j);
            v[i * ny + j] = alpha * a.at(gi, gj) + beta * b.at(gi, gj);
        }
    return {a.cell_scale(), u.x0, u.y0, nx, ny, std::move(v)};
}

double inner(const StepFunction2D& f, const StepFunction2D& g) {
    const auto [a, b] = common(f, g);
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.nx(); ++i)
        for (std::size_t j = 0; j < a.ny(); ++j) {
            const double x = a.values()[i * a.ny() + j];
            if (x != 0.0) acc.add(x * b.at(a.kx0() + static_cast<std::int64_t>(i), a.ky0() + static_cast<std::int64_t>(j)));
        }
    return acc.value() * a.cell_area();
}

double max_difference(const StepFunction2D& f, const StepFunction2D& g) {
    const StepFunction2D d = combine(f, 1.0, g, -1.0);
    double m = 0.0;
    for (double x : d.values()) m = std::max(m, std::fabs(x));
    return m;
}

StepFunction2D psi(int j, int n, std::int64_t k, std::int64_t l, int cell_scale) {
    if (j < 1 || j > 3) throw DomainError("psi: generator index must be 1, 2 or 3");
    if (cell_scale > -n - 1) throw ResolutionError("psi: cell scale too coarse for the generator");
    const StepFunction hx = haar({-n, k}, cell_scale);  // +-2^n
    const StepFunction hy = haar({-n, l}, cell_scale);
    const StepFunction cx = StepFunction::indicator(DyadicInterval{-n, k}.grid(), cell_scale);
    const StepFunction cy = StepFunction::indicator(DyadicInterval{-n, l}.grid(), cell_scale);
    switch (j) {
        case 1: return StepFunction2D::tensor(hx, cy);
        case 2: return StepFunction2D::tensor(cx, hy);
        default: return StepFunction2D::tensor(hx, pow2(-n) * hy);
    }
}

std::array<double, 4> quadrant_integrals(const StepFunction2D& f) {
    std::array<CompensatedSum, 4> acc;
    for (std::size_t i = 0; i < f.nx(); ++i)
        for (std::size_t j = 0; j < f.ny(); ++j) {
            const double v = f.values()[i * f.ny() + j];
            if (v == 0.0) continue;
            const bool xp = f.kx0() + static_cast<std::int64_t>(i) >= 0;
            const bool yp = f.ky0() + static_cast<std::int64_t>(j) >= 0;
            const int q = xp ? (yp ? 0 : 3) : (yp ? 1 : 2);
            acc[static_cast<std::size_t>(q)].add(v);
        }
    std::array<double, 4> out{};
    for (std::size_t q = 0; q < 4; ++q) out[q] = acc[q].value() * f.cell_area();
    return out;
}

StepFunction2D special_b(int which, int cell_scale) {
    const StepFunction b = b_function(cell_scale);
    const StepFunction up = StepFunction::indicator({0.0, 1.0}, cell_scale);
    const StepFunction down = StepFunction::indicator({-1.0, 0.0}, cell_scale);
    switch (which) {
        case 1: return StepFunction2D::tensor(b, up);
        case 2: return StepFunction2D::tensor(up, b);
        case 3: return StepFunction2D::tensor(b, down);
        default: throw DomainError("special_b: index must be 1, 2 or 3");
    }
}

std::string to_string(Pattern p) {
    switch (p) {
        case Pattern::vert: return "vert";
        case Pattern::horiz: return "horiz";
        case Pattern::checker: return "checker";
    }
    return "?";
}

Pattern pattern_from_string(const std::string& s) {
    if (s == "vert") return Pattern::vert;
    if (s == "horiz") return Pattern::horiz;
    if (s == "checker") return Pattern::checker;
    throw ParseError("unknown pattern '" + s + "'");
}

std::array<int, 4> pattern_signs(Pattern p) {
    switch (p) {
        case Pattern::vert: return {1, -1, 1, -1};
        case Pattern::horiz: return {1, 1, -1, -1};
        case Pattern::checker: return {1, -1, -1, 1};
    }
    return {0, 0, 0, 0};
}

StepFunction2D special2d(Pattern p, int n, std::int64_t k, int m, std::int64_t l, int cell_scale) {
    if (cell_scale > std::min(n, m)) throw ResolutionError("special2d: cell scale too coarse");
    if (n - cell_scale > 12 || m - cell_scale > 12) throw RangeError("special2d: too many cells");
    const std::int64_t Bx = std::int64_t{1} << (n - cell_scale);
    const std::int64_t By = std::int64_t{1} << (m - cell_scale);
    const auto s = pattern_signs(p);
    const double c = pow2(-(n + m + 2));
    const auto nx = static_cast<std::size_t>(2 * Bx), ny = static_cast<std::size_t>(2 * By);
    std::vector<double> v(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const bool right = static_cast<std::int64_t>(i) >= Bx;  // block k rather than k-1
            const bool top = static_cast<std::int64_t>(j) >= By;    // block l rather than l-1
            const int idx = right ? (top ? 0 : 2) : (top ? 1 : 3);
            v[i * ny + j] = c * s[static_cast<std::size_t>(idx)];
        }
    return {cell_scale, (k - 1) * Bx, (l - 1) * By, nx, ny, std::move(v)};
}

Pairing2DReport bmo2d_pairing(const StepFunction2D& phi, int L) {
    const int c = phi.cell_scale();
    if (L < c) throw DomainError("bmo2d_pairing: window smaller than one cell");
    if (L + 1 - c > 10) throw RangeError("bmo2d_pairing: window holds too many cells");
    const auto N = static_cast<std::size_t>(std::int64_t{1} << (L + 1 - c));
    const std::int64_t first = -static_cast<std::int64_t>(N / 2);
    for (std::size_t i = 0; i < phi.nx(); ++i)
        for (std::size_t j = 0; j < phi.ny(); ++j) {
            if (phi.values()[i * phi.ny() + j] == 0.0) continue;
            const std::int64_t gi = phi.kx0() + static_cast<std::int64_t>(i);
            const std::int64_t gj = phi.ky0() + static_cast<std::int64_t>(j);
            if (gi < first || gi >= first + static_cast<std::int64_t>(N) || gj < first ||
                gj >= first + static_cast<std::int64_t>(N))
                throw PreconditionError("bmo2d_pairing: window does not cover the support");
        }

    std::vector<double> d(N * N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            d[i * N + j] = phi.at(first + static_cast<std::int64_t>(i), first + static_cast<std::int64_t>(j));
    std::vector<double> P((N + 1) * (N + 1), 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return P[i * (N + 1) + j]; };
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) at(i + 1, j + 1) = d[i * N + j] + at(i, j + 1) + at(i + 1, j) - at(i, j);
    auto rect = [&](std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1) {
        return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
    };

    Pairing2DReport r;
    const double area = phi.cell_area();
    bool any = false;
    for (int n = c; n < L + 1; ++n) {
        const std::size_t Bx = std::size_t{1} << (n - c);
        if (2 * Bx > N) break;
        for (int m = c; m < L + 1; ++m) {
            const std::size_t By = std::size_t{1} << (m - c);
            if (2 * By > N) break;
            const double scale = pow2(-(n + m + 2)) * area;
            for (std::size_t mx = Bx; mx + Bx <= N; mx += Bx)
                for (std::size_t my = By; my + By <= N; my += By) {
                    const double q1 = rect(mx, mx + Bx, my, my + By);  // Q(k, l)
                    const double q2 = rect(mx - Bx, mx, my, my + By);  // Q(k-1, l)
                    const double q3 = rect(mx, mx + Bx, my - By, my);  // Q(k, l-1)
                    const double q4 = rect(mx - Bx, mx, my - By, my);  // Q(k-1, l-1)
                    for (Pattern p : {Pattern::vert, Pattern::horiz, Pattern::checker}) {
                        const auto s = pattern_signs(p);
                        const double v = std::fabs(scale * (s[0] * q1 + s[1] * q2 + s[2] * q3 + s[3] * q4));
                        if (!any || v > r.value) {
                            r.value = v;
                            r.pattern = p;
                            r.n = n;
                            r.m = m;
                            r.k = (first + static_cast<std::int64_t>(mx)) / static_cast<std::int64_t>(Bx);
                            r.l = (first + static_cast<std::int64_t>(my)) / static_cast<std::int64_t>(By);
                            any = true;
                        }
                    }
                }
        }
    }

    bool any_sq = false;
    for (int s = c; s <= L; ++s) {
        const std::size_t B = std::size_t{1} << (s - c);
        const double cnt = static_cast<double>(B * B);
        for (std::size_t x0 = 0; x0 + B <= N; x0 += B)
            for (std::size_t y0 = 0; y0 + B <= N; y0 += B) {
                double sum = 0.0;
                for (std::size_t i = x0; i < x0 + B; ++i)
                    for (std::size_t j = y0; j < y0 + B; ++j) sum += d[i * N + j];
                const double mean = sum / cnt;
                double osc = 0.0;
                for (std::size_t i = x0; i < x0 + B; ++i)
                    for (std::size_t j = y0; j < y0 + B; ++j) osc += std::fabs(d[i * N + j] - mean);
                osc /= cnt;
                if (!any_sq || osc > r.square_norm) {
                    r.square_norm = osc;
                    r.square_scale = s;
                    r.square_k = (first + static_cast<std::int64_t>(x0)) / static_cast<std::int64_t>(B);
                    r.square_l = (first + static_cast<std::int64_t>(y0)) / static_cast<std::int64_t>(B);
                    any_sq = true;
                }
            }
    }
    r.lambda = std::max(r.value, r.square_norm);
    return r;
}

}  // namespace dha
