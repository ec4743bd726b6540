#include "dha/json_io.hpp"

#include <bit>
#include <cmath>

#include "dha/errors.hpp"

namespace dha {

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

Json atom_json(const Atom& a) {
    return {{"defining", to_json(a.defining)}, {"shape", to_json(a.shape)}};
}

}  // namespace

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json to_json(const StepFunction& f) {
    return {{"cell_scale", f.cell_scale()}, {"cell_start", f.cell_start()}, {"values", f.values()}};
}

StepFunction step_function_from_json(const Json& j) {
    const auto m = field<int>(j, "cell_scale");
    const auto k0 = field<std::int64_t>(j, "cell_start");
    const auto v = field<std::vector<double>>(j, "values");
    for (double x : v)
        if (!std::isfinite(x)) throw ParseError("values must be finite");
    try {
        return {m, k0, v};
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

Json to_json(const StepFunction2D& f) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < f.nx(); ++i) {
        const auto first = f.values().begin() + static_cast<std::ptrdiff_t>(i * f.ny());
        rows.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(f.ny())));
    }
    return {{"cell_scale", f.cell_scale()}, {"cell_start", {f.kx0(), f.ky0()}}, {"values", rows}};
}

StepFunction2D step_function_2d_from_json(const Json& j) {
    const auto m = field<int>(j, "cell_scale");
    const auto start = field<std::vector<std::int64_t>>(j, "cell_start");
    if (start.size() != 2) throw ParseError("cell_start must be [k0, l0]");
    const auto rows = field<std::vector<std::vector<double>>>(j, "values");
    const std::size_t ny = rows.empty() ? 0 : rows.front().size();
    std::vector<double> v;
    v.reserve(rows.size() * ny);
    for (const auto& r : rows) {
        if (r.size() != ny) throw ParseError("values must be a rectangular array");
        for (double x : r) {
            if (!std::isfinite(x)) throw ParseError("values must be finite");
            v.push_back(x);
        }
    }
    try {
        return {m, start[0], start[1], rows.size(), ny, std::move(v)};
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

Json to_json(const SampledFunction& g) {
    return {{"refine", g.refine}, {"lo", g.lo}, {"step", g.step}, {"values", g.values}};
}

Json to_json(const GridInterval& J) { return {{"lo", J.lo}, {"hi", J.hi}}; }

Json to_json(const NormReport& r) {
    return {{"value", r.value}, {"witness", to_json(r.witness)}, {"family", to_string(r.family)},
            {"n", r.n},         {"k", r.k}};
}

Json to_json(const SplitResult& s) {
    return {{"c1", s.c1}, {"c2", s.c2}, {"c3", s.c3}, {"n", s.n}, {"k", s.k},
            {"aL", atom_json(s.a_left)}, {"aR", atom_json(s.a_right)}};
}

Json to_json(const AtomicDecomposition& d) {
    Json terms = Json::array();
    for (const Term& t : d.terms) {
        Json a = atom_json(t.atom);
        a["lambda"] = t.lambda;
        terms.push_back(std::move(a));
    }
    return {{"flavor", to_string(d.flavor)}, {"cost", d.cost()}, {"terms", terms}};
}

Json to_json(const HaarExpansion& h) {
    Json coeffs = Json::array();
    for (const auto& [I, c] : h.coefficients)
        if (c != 0.0) coeffs.push_back({{"n", I.n}, {"k", I.k}, {"c", c}});
    return {{"max_scale", h.max_scale}, {"cell_scale", h.cell_scale}, {"coefficients", coeffs},
            {"residual", to_json(h.residual)}, {"residual_l1", h.residual.l1_norm()}};
}

Json to_json(const DistanceResult& d) {
    return {{"obstruction", d.obstruction}, {"half_line_integral", d.half_line_integral},
            {"correction_cost", d.correction_cost}, {"corrected", to_json(d.corrected)}};
}

Json to_json(const ExtensionReport& e) {
    return {{"even_norm", e.even_norm}, {"two_sided_norm", e.two_sided_norm}, {"ratio", e.ratio},
            {"ratio_flag", e.ratio_flag}, {"odd_norm", e.odd_norm}, {"g_value", e.g_value},
            {"g_scale", e.g_scale}, {"g_top", e.g_top}, {"odd_ratio", number(e.odd_ratio)},
            {"odd_unbounded", e.odd_unbounded}};
}

Json to_json(const QuadratureReport& q) {
    return {{"value", q.value}, {"coarse", q.coarse}, {"rel_diff", q.rel_diff}, {"converged", q.converged}};
}

Json to_json(const MaximalResult& m) {
    return {{"values", to_json(m.values)}, {"tail_bound", number(m.tail_bound)}};
}

Json to_json(const OpNormReport& r) {
    Json parts = Json::array();
    for (const PartReport& p : r.parts)
        parts.push_back({{"name", p.name}, {"sup", p.sup}, {"argmax", p.argmax}, {"count", p.count}});
    return {{"overall", r.overall}, {"parts", parts}};
}

Json to_json(const T1Report& r) {
    return {{"c_1d", r.c_1d},
            {"c_2d", r.c_2d},
            {"c_1s", r.c_1s},
            {"c_2s", r.c_2s},
            {"wbp", r.wbp_constant},
            {"lambda_t1", r.lambda_t1},
            {"lambda_t1_star", r.lambda_t1_star},
            {"bmo_t1", r.bmo_t1},
            {"bmo_t1_star", r.bmo_t1_star},
            {"propagation_ok", r.propagation_ok},
            {"truncation_band", number(r.truncation_band)},
            {"matrix_norm", r.matrix_norm},
            {"t1_even", r.t1_even},
            {"even_route", r.t1_even ? to_json(r.even_route) : Json()},
            {"t1", to_json(r.t1)},
            {"t1_star", to_json(r.t1_star)}};
}

Json to_json(const Pairing2DReport& r) {
    return {{"value", r.value},
            {"pattern", to_string(r.pattern)},
            {"pattern_convention", "fixed tensor sign patterns vert/horiz/checker"},
            {"n", r.n},
            {"k", r.k},
            {"m", r.m},
            {"l", r.l},
            {"square_norm", r.square_norm},
            {"square", {{"scale", r.square_scale}, {"k", r.square_k}, {"l", r.square_l}}},
            {"lambda", r.lambda}};
}

Json quadrants_json(const std::array<double, 4>& q) {
    return {{"q1", q[0]}, {"q2", q[1]}, {"q3", q[2]}, {"q4", q[3]},
            {"vanishes", q[0] == 0.0 && q[1] == 0.0 && q[2] == 0.0 && q[3] == 0.0}};
}

Json infeasible_json(const InfeasibleError& e) {
    return {{"error", "infeasible"}, {"obstruction", e.obstruction()}, {"message", e.what()}};
}

KernelOperator kernel_from_json(const Json& j, int cell_scale, int L, std::uint64_t seed) {
    const auto type = field<std::string>(j, "type");
    if (type == "expr") return catalog_kernel(field<std::string>(j, "name"), cell_scale, L, seed);
    if (type != "sampled") throw ParseError("kernel type must be 'sampled' or 'expr'");
    const auto rows = field<std::vector<std::vector<double>>>(j, "values");
    const std::size_t n = rows.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ParseError("sampled kernel size must be a power of two");
    std::vector<double> v;
    v.reserve(n * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw ParseError("sampled kernel must be square");
        for (double x : r) {
            if (!std::isfinite(x)) throw ParseError("kernel values must be finite");
            v.push_back(x);
        }
    }
    // The window [-2^L, 2^L) holds n cells, so the cell scale follows from L.
    const int m = L + 1 - static_cast<int>(std::bit_width(n) - 1);
    return {"sampled", m, L, std::move(v)};
}

}  // namespace dha
