#pragma once

#include <string>

#include "json.hpp"

#include "gsirs/equilibria.hpp"
#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"
#include "gsirs/simulate.hpp"
#include "gsirs/stability.hpp"

namespace gsirs {

using Json = nlohmann::ordered_json;

/// Serialises with two-space indentation, fixed key order, and every floating
/// point number printed with 17 significant digits. Non-finite numbers become
/// null. Output ends with a newline.
std::string dump_json(const Json& j);

Json to_json(const State& x);
Json to_json(const ModelParams& p);
Json to_json(const HypothesisReport& r);
Json to_json(const BoundCheck& b);
Json to_json(const EquilibriumReport& r);
Json to_json(const A1Check& a);
Json to_json(const A2Check& a);
Json to_json(const PQMatrices& m);
Json to_json(const DvdtScan& d);
Json to_json(const DfeBound& d);
Json to_json(const CertificateReport& r);
Json to_json(const StepStats& s);
/// Trajectories are not embedded; runs carry initial/final/distance only.
Json to_json(const SweepReport& r);

}  // namespace gsirs
