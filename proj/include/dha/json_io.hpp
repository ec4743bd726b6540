#pragma once

#include <array>
#include <json.hpp>

#include "dha/atoms.hpp"
#include "dha/bmo.hpp"
#include "dha/errors.hpp"
#include "dha/haar2d.hpp"
#include "dha/operators.hpp"
#include "dha/t1.hpp"

namespace dha {

using Json = nlohmann::ordered_json;

/// {"cell_scale": m, "cell_start": k0, "values": [...]}; doubles are
/// written with round-trip precision.
Json to_json(const StepFunction& f);
StepFunction step_function_from_json(const Json& j);

/// {"cell_scale": m, "cell_start": [k0, l0], "values": [[...], ...]} with
/// values[ix][iy].
Json to_json(const StepFunction2D& f);
StepFunction2D step_function_2d_from_json(const Json& j);

Json to_json(const SampledFunction& g);
Json to_json(const GridInterval& J);
Json to_json(const NormReport& r);
Json to_json(const SplitResult& s);
Json to_json(const AtomicDecomposition& d);
Json to_json(const HaarExpansion& h);
Json to_json(const DistanceResult& d);
Json to_json(const ExtensionReport& e);
Json to_json(const QuadratureReport& q);
Json to_json(const MaximalResult& m);
Json to_json(const OpNormReport& r);
Json to_json(const T1Report& r);
Json to_json(const Pairing2DReport& r);
Json quadrants_json(const std::array<double, 4>& q);

/// {"error": "infeasible", "obstruction": A, "message": ...}
Json infeasible_json(const InfeasibleError& e);

/// Kernel file: {"type": "sampled", "values": [[...]]} with an N x N matrix
/// on the window grid, or {"type": "expr", "name": ...} from the catalog.
KernelOperator kernel_from_json(const Json& j, int cell_scale, int L, std::uint64_t seed = 1);

/// Non-finite doubles as the strings "inf", "-inf", "nan".
Json number(double x);

}  // namespace dha
