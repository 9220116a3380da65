#include "hkq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hkq/hyperpolygon.hpp"
#include "hkq/linalg.hpp"
#include "hkq/localization.hpp"

namespace hkq::cli {

namespace {

constexpr int kSchemaVersion = 1;

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Thrown for bad input that reaches us as a generic hkq::Error (fixture
// validation and the like) so it maps to kUsage rather than kInternal.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

Json subset_list(const std::vector<Subset>& subsets) {
  Json out = Json::array();
  for (Subset s : subsets) out.push_back(subset_to_string(s));
  return out;
}

Json elements_json(Subset s) {
  Json out = Json::array();
  for (int i : elements(s)) out.push_back(i);
  return out;
}

class ReportBuilder {
 public:
  explicit ReportBuilder(const RunConfig& config) : config_(config) {}

  void instance(Json inst) { instance_ = std::move(inst); }

  void stage(const std::string& name, bool passed, std::string reason, Json data, double ms) {
    Json st;
    st["name"] = name;
    st["passed"] = passed;
    st["reason"] = passed ? Json(nullptr) : Json(reason.empty() ? "check failed" : reason);
    st["data"] = data.is_null() ? Json::object() : std::move(data);
    if (!config_.omit_timing) st["timing_ms"] = ms;
    stages_.push_back(std::move(st));
    all_passed_ = all_passed_ && passed;
  }

  void summary(const std::string& key, Json value) { summary_[key] = std::move(value); }

  void error(std::string kind, std::string message, Json extra = Json::object()) {
    Json e;
    e["kind"] = std::move(kind);
    e["message"] = std::move(message);
    for (auto& [k, v] : extra.items()) e[k] = v;
    error_ = std::move(e);
  }

  Json finish(int exit_code, double total_ms) const {
    Json r;
    r["schema_version"] = kSchemaVersion;
    r["toolkit"] = {{"name", "hkq"}, {"version", HKQ_VERSION}};
    r["command"] = config_.command;
    r["budget"] = {{"max_basis_size", config_.budget.max_basis_size}, {"max_degree", config_.budget.max_degree}};
    r["instance"] = instance_;
    r["stages"] = stages_;
    r["summary"] = summary_;
    r["passed"] = exit_code == kOk;
    r["exit_code"] = exit_code;
    r["exit_status"] = exit_status_name(exit_code);
    r["error"] = error_;
    if (!config_.omit_timing) r["timing_ms"] = total_ms;
    return r;
  }

  bool all_passed() const { return all_passed_; }

 private:
  const RunConfig& config_;
  Json instance_ = nullptr;
  Json stages_ = Json::array();
  Json summary_ = Json::object();
  Json error_ = nullptr;
  bool all_passed_ = true;
};

// Runs body() as a stage; body returns (passed, data).
template <class F>
void timed_stage(ReportBuilder& rb, const std::string& name, F&& body) {
  const auto t0 = Clock::now();
  auto [ok, data] = body();
  rb.stage(name, ok, {}, std::move(data), millis_since(t0));
}

EdgeLengths require_xi(const RunConfig& c) {
  if (!c.xi) throw ParseError("--xi is required for '" + c.command + "'");
  return EdgeLengths::parse(*c.xi);
}

Json instance_echo(const EdgeLengths& xi) {
  Json inst;
  inst["n"] = xi.n();
  Json values = Json::array();
  for (const auto& v : xi.xi) values.push_back(hkq::to_string(v));
  inst["xi"] = values;
  inst["shorts_count"] = nullptr;
  return inst;
}

bool complement_property(const ShortSubsetTable& t) {
  for (Subset s = 0; s <= t.full(); ++s) {
    if (t.is_short(s) == t.is_short(t.full() & ~s)) return false;
  }
  return true;
}

void cmd_shorts(const RunConfig& c, ReportBuilder& rb) {
  const EdgeLengths xi = require_xi(c);
  Json inst = instance_echo(xi);
  rb.instance(inst);
  const auto t0 = Clock::now();
  const ShortSubsetTable t = shorts(xi);
  inst["shorts_count"] = t.shorts.size();
  rb.instance(inst);
  const bool ok = t.shorts.size() == (std::size_t{1} << (xi.n() - 1)) && complement_property(t);
  rb.stage("shorts", ok, "short subsets are not half of all subsets",
           {{"count", t.shorts.size()}, {"subsets", subset_list(t.shorts)}}, millis_since(t0));
  rb.summary("shorts", t.shorts.size());
}

Json variable_list(const Ring& r) {
  Json out = Json::array();
  for (std::size_t i = 0; i < r.table().size(); ++i) {
    out.push_back(r.table().name(i) + ":" + std::to_string(r.table().degree(i)));
  }
  return out;
}

void cmd_present(const RunConfig& c, ReportBuilder& rb) {
  const EdgeLengths xi = require_xi(c);
  rb.instance(instance_echo(xi));
  const auto t0 = Clock::now();
  const HyperpolygonInstance in(xi, c.budget);
  Json inst = instance_echo(xi);
  inst["shorts_count"] = in.table().shorts.size();
  rb.instance(inst);

  bool ok = true;
  const auto sigma = in.weyl_involution();
  Json gens = Json::array();
  for (Subset s : in.table().shorts) {
    const auto [a, b] = in.gens_AB(s);
    const Polynomial cs = in.gens_C(s);
    ok = ok && substitute(a, sigma) == b && in.to_P(cs) == a + b;
    Json g;
    g["subset"] = subset_to_string(s);
    g["A"] = a.to_string();
    g["B"] = b.to_string();
    g["C"] = cs.to_string();
    g["D"] = s == 0 ? Json(nullptr) : Json(in.gens_D(s).to_string());
    gens.push_back(std::move(g));
  }
  Json rel = Json::array();
  for (const auto& r : in.relations_Q().generators()) rel.push_back(r.to_string());
  Json data;
  data["ring_P"] = variable_list(in.ring_P());
  data["ring_Q"] = variable_list(in.ring_Q());
  data["relations_Q"] = rel;
  data["euler_e"] = in.euler_e().to_string();
  data["euler_eprime"] = in.euler_eprime().to_string();
  data["generators"] = gens;
  data["generators_I"] = in.ideal_I().generators().size();
  data["generators_J"] = in.ideal_J().generators().size();
  data["basis_size_J"] = in.ideal_J().basis(c.budget).size();
  rb.stage("presentation", ok, "generator symmetry check failed", std::move(data), millis_since(t0));
  rb.summary("generators_J", in.ideal_J().generators().size());
}

Json stage_data(const HyperpolygonReport& rep, const std::string& name) {
  Json d = Json::object();
  if (name == "shorts") {
    d["count"] = rep.shorts.size();
    d["subsets"] = subset_list(rep.shorts);
  } else if (name == "presentation") {
    d["generators_I"] = rep.generators_I;
    d["generators_J"] = rep.generators_J;
    d["basis_size_J"] = rep.basis_size_J;
  } else if (name == "prop_hp") {
    d["basis_size_colon"] = rep.basis_size_colon;
  } else if (name == "certificates") {
    d["count"] = rep.certificates.size();
    Json items = Json::array();
    for (const auto& cs : rep.certificates) {
      items.push_back({{"subject", subset_to_string(cs.subject)},
                       {"path", to_string(cs.path)},
                       {"relabelings", cs.relabelings},
                       {"terms", cs.terms},
                       {"verified", cs.verified},
                       {"groebner_membership", cs.groebner_membership}});
    }
    d["items"] = items;
  } else if (name == "basis_count") {
    d["top_degree_dim"] = rep.top_degree_dim;
    d["d_rank"] = rep.d_rank;
  } else if (name == "konno") {
    d["betti"] = rep.betti;
    d["konno_betti"] = rep.konno_betti;
  } else if (name == "formality") {
    d["degree_bound"] = rep.formality_bound;
  } else if (name == "localized_rank") {
    d["rank"] = rep.localized_rank;
  } else if (name == "kirwan_bridge") {
    d["surjectivity"] = rep.surjectivity_assumed ? "assumed" : "not assumed";
  } else if (name == "second_iso" && rep.second_iso) {
    d["max_degree"] = rep.second_iso->max_degree;
    d["invariant_dims"] = rep.second_iso->invariant_dims;
    d["full_fixed_dims"] = rep.second_iso->full_fixed_dims;
  }
  return d;
}

void cmd_report(const RunConfig& c, ReportBuilder& rb, bool with_data) {
  const EdgeLengths xi = require_xi(c);
  rb.instance(instance_echo(xi));
  const HyperpolygonReport rep = full_report(xi, c.budget, {.second_iso = c.second_iso, .parallel = true});
  Json inst = instance_echo(xi);
  if (!rep.shorts.empty()) inst["shorts_count"] = rep.shorts.size();
  rb.instance(inst);
  Json failed = Json::array();
  for (const auto& st : rep.stages) {
    rb.stage(st.name, st.passed, st.error, with_data ? stage_data(rep, st.name) : Json::object(), st.millis);
    if (!st.passed) failed.push_back(st.name);
  }
  if (with_data) {
    rb.summary("betti", rep.betti);
    rb.summary("shorts", rep.shorts.size());
    rb.summary("certificates", rep.certificates.size());
  }
  rb.summary("stages", rep.stages.size());
  rb.summary("failed_stages", failed);
}

void cmd_certify(const RunConfig& c, ReportBuilder& rb) {
  const EdgeLengths xi = require_xi(c);
  rb.instance(instance_echo(xi));
  const HyperpolygonInstance in(xi, c.budget);
  Json inst = instance_echo(xi);
  inst["shorts_count"] = in.table().shorts.size();
  rb.instance(inst);

  std::vector<Subset> subjects = in.table().nonempty_shorts();
  if (c.subset) {
    const Subset s = parse_subset(*c.subset);
    if (s == 0 || s > in.table().full() || !in.table().is_short(s)) {
      throw ParseError("subset " + *c.subset + " is not a nonempty short subset");
    }
    subjects = {s};
  }
  timed_stage(rb, "certificates", [&] {
    bool ok = true;
    Json items = Json::array();
    for (Subset s : subjects) {
      const MembershipCertificate cert = certify_membership(in, s, {.force_fallback = c.force_fallback});
      const bool verified = verify_certificate(in, cert);
      const MembershipCertificate reloaded = MembershipCertificate::deserialize(in.ring_Q(), cert.serialize());
      const bool reverified = verify_certificate(in, reloaded);
      ok = ok && verified && reverified;
      Json combination = Json::array();
      for (const auto& [t, coef] : cert.combination) combination.push_back({subset_to_string(t), coef.to_string()});
      Json item;
      item["subject"] = subset_to_string(s);
      item["path"] = to_string(cert.path);
      item["relabelings"] = cert.relabelings;
      item["fallback_reason"] = cert.fallback_reason.empty() ? Json(nullptr) : Json(cert.fallback_reason);
      item["verified"] = verified;
      item["reverified_after_reload"] = reverified;
      item["combination"] = combination;
      items.push_back(std::move(item));
    }
    return std::pair{ok, Json{{"count", subjects.size()}, {"items", items}}};
  });
  rb.summary("certificates", subjects.size());
}

void cmd_betti(const RunConfig& c, ReportBuilder& rb) {
  const EdgeLengths xi = require_xi(c);
  rb.instance(instance_echo(xi));
  const HyperpolygonInstance in(xi, c.budget);
  Json inst = instance_echo(xi);
  inst["shorts_count"] = in.table().shorts.size();
  rb.instance(inst);
  std::vector<std::uint64_t> betti;
  timed_stage(rb, "betti", [&] {
    const PropHpResult hp = prop_hp(in);
    const HilbertSeries reduced = QuotientRing(sum(hp.ring.ideal(), {in.x()}), c.budget).hilbert_series(0);
    const HilbertSeries konno = konno_ring(in.n(), c.budget).hilbert_series(0);
    betti = reduced.even_coefficients();
    const auto rank = hp.ring.localized_rank(*in.ring_Q().table().index_of("x"));
    const bool ok = reduced.exact && konno.exact && betti == konno.even_coefficients() && rank == konno.total();
    return std::pair{ok, Json{{"betti", betti},
                              {"konno_betti", konno.even_coefficients()},
                              {"total", reduced.total()},
                              {"localized_rank", rank}}};
  });
  rb.summary("betti", betti);
}

Fixture load_input_fixture(const RunConfig& c) {
  if (!c.fixture) throw ParseError("--fixture is required for '" + c.command + "'");
  const std::string path = resolve_fixture(*c.fixture);
  try {
    return load_fixture(path);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw InvalidInput(e.what());
  }
}

int max_top_degree(const CircleCompactModel& m) {
  int top = 0;
  for (const auto& comp : m.components()) top = std::max(top, comp.top_degree());
  return top;
}

void cmd_localize(const RunConfig& c, ReportBuilder& rb) {
  const Fixture fx = load_input_fixture(c);
  Json inst;
  inst["fixture"] = *c.fixture;
  Json names = Json::array();
  for (const auto& m : fx.models) names.push_back(m->name());
  inst["models"] = names;
  Json map_names = Json::array();
  for (const auto& f : fx.maps) map_names.push_back(f.name());
  inst["maps"] = map_names;
  rb.instance(inst);

  for (const auto& m : fx.models) {
    timed_stage(rb, "model " + m->name(), [&] {
      Json comps = Json::array();
      for (const auto& comp : m->components()) {
        comps.push_back({{"name", comp.name()},
                         {"dim", comp.dim()},
                         {"euler", comp.euler_polynomial().to_string()},
                         {"codim", comp.euler_codim()},
                         {"euler_leading", hkq::to_string(comp.euler_leading())}});
      }
      const auto basis = m->standard_basis();
      const bool nondeg = m->is_nondegenerate(basis);
      Json data;
      data["dim"] = m->dim();
      data["components"] = comps;
      data["gram_determinant"] = determinant(m->gram(basis)).to_string();
      data["nondegenerate"] = nondeg;
      bool ok = nondeg;
      if (m->total()) {
        // every class of the total ring lives below the top degree plus
        // the Euler codimension; twice dim() is a safe margin
        const int bound = 2 * (max_top_degree(*m) + static_cast<int>(m->dim()));
        const std::size_t r = restriction_rank(*m, bound);
        data["restriction_rank"] = r;
        ok = ok && r == m->dim();
      } else {
        data["restriction_rank"] = nullptr;
      }
      return std::pair{ok, data};
    });
  }

  for (const auto& m : fx.models) {
    timed_stage(rb, "diagonal " + m->name(), [&] {
      const auto dec = diagonal_decomposition(m);
      bool ok = false;
      std::string mismatch;
      try {
        ok = diagonal_basis(m, dec);
      } catch (const DiagonalMismatch& e) {
        mismatch = e.what();
      }
      return std::pair{ok, Json{{"pairs", dec.size()}, {"spans", ok},
                                {"mismatch", mismatch.empty() ? Json(nullptr) : Json(mismatch)}}};
    });
  }

  Json maps_summary = Json::object();
  for (const auto& f : fx.maps) {
    timed_stage(rb, "map " + f.name(), [&] {
      const auto& src = *f.source();
      const auto& tgt = *f.target();
      const auto sb = src.standard_basis();
      const auto tb = tgt.standard_basis();
      bool adjoint = true;
      bool projection = true;
      for (const auto& g : sb) {
        const auto pushed = f.pushforward(g);
        for (const auto& a : tb) {
          adjoint = adjoint && tgt.pairing(pushed, a) == src.pairing(g, f.pullback(a));
          projection = projection && f.pushforward(src.multiply(g, f.pullback(a))) == tgt.multiply(pushed, a);
        }
      }
      Json data;
      data["source"] = src.name();
      data["target"] = tgt.name();
      data["adjoint"] = adjoint;
      data["projection_formula"] = projection;
      if (f.total_pullback() && src.total() && tgt.total()) {
        const PullbackComparison cmp = compare_pullback(f, c.degree);
        data["k_rank"] = cmp.k_rank;
        data["source_dim"] = cmp.source_dim;
        data["target_dim"] = cmp.target_dim;
        data["degree"] = cmp.degree;
        data["integral_source_dim"] = cmp.integral_source_dim;
        data["integral_rank"] = cmp.integral_rank;
        data["missing"] = cmp.missing;
        data["rationalized_iso"] = cmp.rationalized_iso();
        data["integral_surjective"] = cmp.integral_surjective();
        maps_summary[f.name()] = {{"rationalized_iso", cmp.rationalized_iso()},
                                  {"integral_surjective", cmp.integral_surjective()}};
      }
      return std::pair{adjoint && projection, data};
    });
  }
  rb.summary("maps", maps_summary);
}

void dispatch(const RunConfig& c, ReportBuilder& rb) {
  if (c.command == "shorts") return cmd_shorts(c, rb);
  if (c.command == "present") return cmd_present(c, rb);
  if (c.command == "verify") return cmd_report(c, rb, false);
  if (c.command == "report") return cmd_report(c, rb, true);
  if (c.command == "certify") return cmd_certify(c, rb);
  if (c.command == "betti") return cmd_betti(c, rb);
  if (c.command == "localize-demo") return cmd_localize(c, rb);
  throw ParseError("unknown command '" + c.command + "'");
}

void strip_timing(Json& j) {
  if (j.is_object()) {
    j.erase("timing_ms");
    for (auto& [k, v] : j.items()) strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

std::string text_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

std::string text_value(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::size_t parse_positive(const char* name, const char* text) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos == std::string(text).size() && v > 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw ParseError(std::string(name) + " must be a positive integer (got '" + text + "')");
}

}  // namespace

std::string exit_status_name(int code) {
  switch (code) {
    case kOk: return "ok";
    case kCheckFailed: return "check_failed";
    case kUsage: return "usage";
    case kNonGeneric: return "non_generic";
    case kBudgetExceeded: return "budget_exceeded";
    case kInternal: return "internal";
    default: return "unknown";
  }
}

Budget default_budget() {
  Budget b;
  if (const char* v = std::getenv("HKQ_MAX_BASIS")) b.max_basis_size = parse_positive("HKQ_MAX_BASIS", v);
  if (const char* v = std::getenv("HKQ_MAX_DEGREE")) {
    b.max_degree = static_cast<int>(std::min<std::size_t>(parse_positive("HKQ_MAX_DEGREE", v), 1 << 20));
  }
  return b;
}

std::string resolve_fixture(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  const bool is_name = name_or_path.find('/') == std::string::npos && !name_or_path.ends_with(".fixture");
  if (!is_name) return name_or_path;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("HKQ_FIXTURES")) dirs.emplace_back(env);
  dirs.emplace_back(HKQ_SOURCE_FIXTURE_DIR);
  dirs.emplace_back(HKQ_INSTALL_FIXTURE_DIR);
  for (const auto& d : dirs) {
    const fs::path p = d / (name_or_path + ".fixture");
    if (fs::exists(p)) return p.string();
  }
  throw ParseError("unknown fixture '" + name_or_path + "'");
}

Json canonical(Json report) {
  strip_timing(report);
  return report;
}

RunResult run(const RunConfig& config) {
  ReportBuilder rb(config);
  const auto t0 = Clock::now();
  int code = kOk;
  try {
    if (config.budget.max_basis_size == 0 || config.budget.max_degree <= 0) {
      throw ParseError("budgets must be positive");
    }
    dispatch(config, rb);
    code = rb.all_passed() ? kOk : kCheckFailed;
  } catch (const NonGenericError& e) {
    code = kNonGeneric;
    rb.error("non_generic", e.what(),
             {{"witness", subset_to_string(e.witness())}, {"witness_elements", elements_json(e.witness())}});
  } catch (const BudgetExceeded& e) {
    code = kBudgetExceeded;
    rb.error("budget_exceeded", e.what());
  } catch (const ParseError& e) {
    code = kUsage;
    rb.error("parse", e.what());
  } catch (const InvalidInput& e) {
    code = kUsage;
    rb.error("invalid_input", e.what());
  } catch (const std::exception& e) {
    code = kInternal;
    rb.error("internal", e.what());
  }
  return {rb.finish(code, millis_since(t0)), code};
}

std::string render(const Json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  std::ostringstream os;
  os << "hkq " << text_value(report["command"]) << " (version " << text_value(report["toolkit"]["version"]) << ")\n";
  const Json& inst = report["instance"];
  if (inst.is_object()) {
    os << "instance:";
    for (const auto& [k, v] : inst.items()) {
      os << ' ' << text_key(k) << '=';
      if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) joined += (joined.empty() ? "" : ",") + text_value(e);
        os << joined;
      } else {
        os << text_value(v);
      }
    }
    os << '\n';
  }
  os << "budget: max-basis-size=" << report["budget"]["max_basis_size"].dump()
     << " max-degree=" << report["budget"]["max_degree"].dump() << '\n';
  for (const auto& st : report["stages"]) {
    os << (st["passed"].get<bool>() ? "[pass] " : "[FAIL] ") << text_value(st["name"]);
    if (st.contains("timing_ms")) os << " (" << static_cast<long long>(st["timing_ms"].get<double>()) << " ms)";
    if (!st["reason"].is_null()) os << ": " << text_value(st["reason"]);
    os << '\n';
    for (const auto& [k, v] : st["data"].items()) os << "  " << text_key(k) << ": " << text_value(v) << '\n';
  }
  for (const auto& [k, v] : report["summary"].items()) os << text_key(k) << ": " << text_value(v) << '\n';
  if (!report["error"].is_null()) {
    for (const auto& [k, v] : report["error"].items()) os << "error-" << text_key(k) << ": " << text_value(v) << '\n';
  }
  os << "result: " << text_value(report["exit_status"]) << " (exit " << report["exit_code"].dump() << ")\n";
  return os.str();
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config.budget = default_budget();
  } catch (const ParseError& e) {
    err << "hkq: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Exact cohomology checks for hyperpolygon spaces and circle-compact localization models", "hkq"};
  app.set_version_flag("--version", std::string("hkq ") + HKQ_VERSION);
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 check failed, 2 usage or invalid input, 3 non-generic lengths, "
      "4 budget exceeded, 5 internal error.\n"
      "Environment: HKQ_MAX_BASIS and HKQ_MAX_DEGREE set default budgets; HKQ_FIXTURES adds a fixture directory.");

  std::size_t max_basis = config.budget.max_basis_size;
  int max_degree = config.budget.max_degree;
  bool no_second_iso = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--max-basis", max_basis, "Largest Groebner basis allowed")->check(CLI::PositiveNumber);
    sub->add_option("--max-degree", max_degree, "Largest S-pair degree allowed")->check(CLI::PositiveNumber);
    sub->add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", config.out, "Write the report here instead of stdout");
    sub->add_flag("--omit-timing", config.omit_timing, "Leave timing fields out of the report");
  };
  auto with_xi = [&](CLI::App* sub) {
    sub->add_option("--xi", config.xi, "Edge lengths, comma-separated exact rationals")->required();
    common(sub);
    return sub;
  };

  with_xi(app.add_subcommand("shorts", "List the short subsets"));
  with_xi(app.add_subcommand("present", "Print the ring presentations and generators"));
  auto* verify = with_xi(app.add_subcommand("verify", "Run every check and report pass/fail"));
  auto* certify = with_xi(app.add_subcommand("certify", "Produce and verify membership certificates"));
  certify->add_option("--subset", config.subset, "A single subject, e.g. {1,3}");
  certify->add_flag("--force-fallback", config.force_fallback, "Skip the recursion, use the Groebner lift");
  with_xi(app.add_subcommand("betti", "Betti numbers of the quotient"));
  auto* report = with_xi(app.add_subcommand("report", "Every check with its data"));
  for (auto* sub : {verify, report}) {
    sub->add_flag("--no-second-iso", no_second_iso, "Skip the Weyl-invariant comparison stages");
  }
  auto* demo = app.add_subcommand("localize-demo", "Localization checks on a fixture");
  demo->add_option("--fixture", config.fixture, "Fixture name (line, product, segre) or path")->required();
  demo->add_option("--degree", config.degree, "Degree of the integral pullback comparison")
      ->check(CLI::PositiveNumber);
  common(demo);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  config.command = app.get_subcommands().front()->get_name();
  config.budget.max_basis_size = max_basis;
  config.budget.max_degree = max_degree;
  config.second_iso = !no_second_iso;

  const RunResult result = run(config);
  const std::string text = render(result.report, config.format);
  if (config.out) {
    std::ofstream f(*config.out, std::ios::binary);
    f << text;
    if (!f) {
      err << "hkq: cannot write " << *config.out << '\n';
      return kUsage;
    }
  } else {
    out << text;
  }
  if (result.exit_code != kOk && !result.report["error"].is_null()) {
    err << "hkq: " << text_value(result.report["error"]["message"]) << '\n';
  }
  return result.exit_code;
}

}  // namespace hkq::cli
