#include "gsirs/report_json.hpp"

#include <cmath>
#include <cstdio>

namespace gsirs {
namespace {

void write(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(key).dump();
        out += ": ";
        write(value, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write(value, out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

Json pair_json(double a, double b) { return Json::array({a, b}); }

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += '\n';
  return out;
}

Json to_json(const State& x) { return Json{{"S", x.S}, {"I", x.I}, {"R", x.R}}; }

Json to_json(const ModelParams& p) {
  return Json{{"Lambda", p.Lambda()}, {"mu", p.mu()},       {"gamma1", p.gamma1()},
              {"gamma2", p.gamma2()}, {"alpha", p.alpha()}, {"delta", p.delta()}};
}

Json to_json(const HypothesisReport& r) {
  Json limits = Json::array();
  for (const auto& [S, value] : r.h3_limit_at) limits.push_back(pair_json(S, value));
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(Json{{"hypothesis", v.hypothesis},
                              {"S", v.S},
                              {"I", v.I},
                              {"observed", v.observed}});
  }
  return Json{{"h1_pass", r.h1_pass},
              {"h2_pass", r.h2_pass},
              {"h3_pass", r.h3_pass},
              {"all_pass", r.all_pass()},
              {"grid", Json{{"S_max", r.grid.S_max}, {"grid_n", r.grid.grid_n}, {"eps", r.grid.eps}}},
              {"h2_boundary_degenerate", r.h2_boundary_degenerate},
              {"h3_limit_at", std::move(limits)},
              {"violations", std::move(violations)}};
}

Json to_json(const BoundCheck& b) {
  return Json{{"pass", b.pass}, {"min_slack", b.min_slack}, {"at", pair_json(b.S_at, b.I_at)}};
}

Json to_json(const EquilibriumReport& r) {
  Json endemic = Json::array();
  for (const auto& e : r.endemic) {
    endemic.push_back(Json{{"state", to_json(e.state)}, {"residual", e.residual}});
  }
  Json brackets = Json::array();
  for (const auto& b : r.bracket_log) {
    brackets.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"g_lo", b.g_lo}, {"g_hi", b.g_hi}});
  }
  Json out{{"r0", r.r0},
           {"beta", r.beta},
           {"dfe", to_json(r.dfe)},
           {"I0", r.I0},
           {"S_star_curve", r.S_star_curve ? Json(*r.S_star_curve) : Json(nullptr)},
           {"endemic", std::move(endemic)},
           {"bracket_log", std::move(brackets)}};
  return out;
}

Json to_json(const A1Check& a) {
  return Json{{"pass", a.pass},
              {"lhs", a.lhs},
              {"rhs", a.rhs},
              {"margin", a.margin},
              {"remark_value", a.remark_value}};
}

Json to_json(const A2Check& a) {
  return Json{{"pass", a.pass},
              {"sup_h", a.sup_h},
              {"at", pair_json(a.u_at, a.v_at)},
              {"bound", a.bound},
              {"divergence_flag", a.divergence_flag},
              {"grid_n", a.grid_n},
              {"exclusion", a.exclusion}};
}

Json to_json(const PQMatrices& m) {
  auto mat = [](const Sym2& s) {
    return Json::array({Json::array({s.a11, s.a12}), Json::array({s.a12, s.a22})});
  };
  return Json{{"P", mat(m.P)},
              {"Q", mat(m.Q)},
              {"p_minors", pair_json(m.p_minors[0], m.p_minors[1])},
              {"q_minors", pair_json(m.q_minors[0], m.q_minors[1])}};
}

Json to_json(const DvdtScan& d) {
  return Json{{"max_dvdt", d.max_dvdt}, {"at", to_json(d.at)}, {"samples", d.samples}, {"k2", d.k2}};
}

Json to_json(const DfeBound& d) {
  return Json{{"holds", d.holds},
              {"worst_slack", d.worst_slack},
              {"at", pair_json(d.S_at, d.I_at)},
              {"max_didt", d.max_didt},
              {"samples", d.samples}};
}

Json to_json(const CertificateReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json out{{"granted", r.granted},
           {"a1", to_json(r.a1)},
           {"k1", opt(r.k1)},
           {"k1_candidate", opt(r.k1_candidate)},
           {"k1_forced", r.k1_forced},
           {"k2", opt(r.k2)},
           {"h_bound", r.h_bound},
           {"a2", r.a2 ? to_json(*r.a2) : Json(nullptr)},
           {"pq", r.pq ? to_json(*r.pq) : Json(nullptr)},
           {"dvdt", r.dvdt ? to_json(*r.dvdt) : Json(nullptr)},
           {"notes", r.notes}};
  return out;
}

Json to_json(const StepStats& s) {
  return Json{{"steps", s.steps}, {"rejected", s.rejected}, {"max_error", s.max_error}};
}

Json to_json(const SweepReport& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json j{{"initial", to_json(run.initial)},
           {"final", to_json(run.final_state)},
           {"distance", run.distance}};
    if (run.error) j["error"] = *run.error;
    runs.push_back(std::move(j));
  }
  return Json{{"target", to_json(r.target)},
              {"target_kind", r.target_is_endemic ? "endemic" : "dfe"},
              {"t_end", r.t_end},
              {"conv_tol", r.conv_tol},
              {"converged_fraction", r.converged_fraction},
              {"runs", std::move(runs)}};
}

}  // namespace gsirs
