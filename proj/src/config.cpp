#include "qdisk/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace qdisk {

namespace {

using json = nlohmann::ordered_json;

cplx parse_scalar(const json& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw config_error(where + ": expected a number or [re, im] pair");
}

Sequence parse_sequence(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind"))
    throw config_error(where + ": sequence descriptor needs a \"kind\" tag");
  std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "power-law")
      return Sequence::power_law(j.at("p").get<double>(), j.value("scale", 1.0));
    if (kind == "affine")
      return Sequence::affine(j.at("slope").get<double>(), j.at("offset").get<double>());
    if (kind == "eventually-constant") {
      std::vector<cplx> prefix;
      for (const auto& v : j.at("prefix")) prefix.push_back(parse_scalar(v, where));
      return Sequence::eventually_constant(std::move(prefix), parse_scalar(j.at("tail"), where));
    }
    if (kind == "tabulated") {
      std::vector<cplx> table;
      for (const auto& v : j.at("table")) table.push_back(parse_scalar(v, where));
      return Sequence::tabulated(std::move(table), parse_scalar(j.at("diff_limit"), where));
    }
  } catch (const json::exception& e) {
    throw config_error(where + ": " + e.what());
  }
  throw config_error(where + ": unknown sequence kind \"" + kind + "\"");
}

RunConfig from_family(double a, double b, double c, std::string desc) {
  RunConfig cfg;
  try {
    cfg.family.emplace(a, b, c);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  cfg.model = context_from(*cfg.family);
  cfg.description = std::move(desc);
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

void print_header(const RunConfig& cfg, std::ostream& os) {
  os << "# config: " << cfg.description << "  K=" << cfg.K << "  modes=" << cfg.n_min
     << ".." << cfg.n_max << "  seed=" << cfg.seed << "\n";
  if (!cfg.defaulted.empty()) {
    os << "# defaulted:";
    for (const auto& f : cfg.defaulted) os << " " << f;
    os << "\n";
  }
}

}  // namespace

RunConfig preset_config(const std::string& name) {
  if (name == "base") return from_family(4.0, 3.0, 5.5, "preset base (a=4, b=3, c=5.5)");
  if (name == "kernel1") return from_family(4.0, 3.0, 9.0, "preset kernel1 (a=4, b=3, c=9)");
  if (name == "kernel2") return from_family(4.0, 3.0, 10.0, "preset kernel2 (a=4, b=3, c=10)");
  throw config_error("unknown preset \"" + name + "\" (have: base, kernel1, kernel2)");
}

Sequence sequence_from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, true);
  return parse_sequence(j, "sequence");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }

  RunConfig cfg;
  if (j.contains("preset")) {
    cfg = preset_config(j.at("preset").get<std::string>());
  } else if (j.contains("family")) {
    const auto& f = j.at("family");
    if (!f.contains("a") || !f.contains("b") || !f.contains("c"))
      throw config_error("family needs fields a, b, c");
    cfg = from_family(f.at("a").get<double>(), f.at("b").get<double>(),
                      f.at("c").get<double>(), path.string());
  } else if (j.contains("sequences")) {
    const auto& s = j.at("sequences");
    for (const char* key : {"beta", "mu", "w", "wprime"})
      if (!s.contains(key))
        throw config_error(std::string("sequences needs field \"") + key + "\"");
    try {
      cfg.model = ModeContext{parse_sequence(s.at("beta"), "beta"),
                            parse_sequence(s.at("mu"), "mu"),
                            normalize_weight(parse_sequence(s.at("w"), "w")),
                            normalize_weight(parse_sequence(s.at("wprime"), "wprime"))};
    } catch (const std::exception& e) {
      throw config_error(std::string("sequences: ") + e.what());
    }
    cfg.description = path.string();
  } else {
    throw config_error(path.string() + ": need one of preset, family, sequences");
  }

  cfg.defaulted = {"K", "modes", "tol", "seed", "out"};
  auto take = [&](const char* field) {
    std::erase(cfg.defaulted, field);
  };
  try {
    if (j.contains("K")) { cfg.K = j.at("K").get<long>(); take("K"); }
    if (j.contains("modes")) {
      const auto& m = j.at("modes");
      if (!m.is_array() || m.size() != 2) throw config_error("modes must be [min, max]");
      cfg.n_min = m[0].get<long>();
      cfg.n_max = m[1].get<long>();
      take("modes");
    }
    if (j.contains("tol")) {
      const auto& t = j.at("tol");
      if (t.is_number()) {
        cfg.tols.identity = t.get<double>();
      } else {
        cfg.tols.identity = t.value("identity", cfg.tols.identity);
        cfg.tols.tail = t.value("tail", cfg.tols.tail);
        cfg.tols.stabilization = t.value("stabilization", cfg.tols.stabilization);
      }
      take("tol");
    }
    if (j.contains("seed")) { cfg.seed = j.at("seed").get<std::uint64_t>(); take("seed"); }
    if (j.contains("out")) { cfg.out_dir = j.at("out").get<std::string>(); take("out"); }
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  if (cfg.K < 8) throw config_error("K must be >= 8");
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  auto take = [&](const char* field) { std::erase(cfg.defaulted, field); };
  if (ov.K) { cfg.K = *ov.K; take("K"); if (cfg.K < 8) throw config_error("K must be >= 8"); }
  if (ov.n_min) { cfg.n_min = *ov.n_min; take("modes"); }
  if (ov.n_max) { cfg.n_max = *ov.n_max; take("modes"); }
  if (ov.tol) { cfg.tols.identity = *ov.tol; take("tol"); }
  if (ov.seed) { cfg.seed = *ov.seed; take("seed"); }
  if (ov.out_dir) { cfg.out_dir = *ov.out_dir; take("out"); }
}

namespace {

json condition_to_json(const ConditionReport& r) {
  json j;
  j["id"] = r.id;
  j["verdict"] = to_string(r.verdict);
  j["partial_sum"] = r.partial_sum;
  j["tail_bound"] = r.tail_bound;
  if (r.witness >= 0) j["witness"] = r.witness;
  if (r.computed_N >= 0) j["N"] = r.computed_N;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& os) {
  print_header(cfg, os);
  json out = json::array();
  bool all_hold = true;
  long N = -1;
  for (const char* id : {"one", "three", "five", "six", "seven"}) {
    ConditionReport r = check_condition(id, cfg.context(), cfg.tols.tail);
    out.push_back(condition_to_json(r));
    all_hold = all_hold && r.verdict == Verdict::Holds;
    if (r.computed_N >= 0) N = r.computed_N;
    os << "condition (" << r.id << "): " << to_string(r.verdict);
    if (r.witness >= 0) os << "  witness k=" << r.witness;
    if (r.partial_sum != 0.0)
      os << "  partial=" << fmt(r.partial_sum) << "  tail<=" << fmt(r.tail_bound);
    if (!r.detail.empty()) os << "  [" << r.detail << "]";
    os << "\n";
  }
  os << "N = " << N << "\n";
  write_text(cfg.out_dir / "conditions.json", json{{"N", N}, {"conditions", out}}.dump(2) + "\n");
  return all_hold ? 0 : 1;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& os) {
  print_header(cfg, os);
  long dim = kernel_dimension(cfg.context());
  json rows = json::array();
  std::string csv = "n,in_space,partial_norm2,growth_ratio\n";
  for (long n = 0; n <= std::max(dim + 2, 4L); ++n) {
    MembershipVerdict v = kernel_membership(n, cfg.context());
    os << "mode " << n << ": " << (v.in_space ? "in-space" : "not-in-space")
       << "  partial norm^2 = " << fmt(v.partial_sum)
       << "  10x-horizon growth = " << fmt(v.growth_ratio) << "\n";
    rows.push_back({{"n", n},
                    {"in_space", v.in_space},
                    {"partial_norm2", v.partial_sum},
                    {"growth_ratio", v.growth_ratio}});
    csv += std::to_string(n) + "," + (v.in_space ? "1" : "0") + "," + fmt(v.partial_sum) +
           "," + fmt(v.growth_ratio) + "\n";
  }
  os << "kernel dimension = " << dim << "\n";
  write_text(cfg.out_dir / "kernel.json",
             json{{"dimension", dim}, {"modes", rows}}.dump(2) + "\n");
  write_text(cfg.out_dir / "kernel.csv", csv);
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  print_header(cfg, os);
  long window = std::max(std::labs(cfg.n_min), std::labs(cfg.n_max));
  TripleReport rep = verify_triple(cfg.context(), cfg.tols, cfg.seed, cfg.K, window);

  json j;
  j["config"] = cfg.description;
  j["K"] = cfg.K;
  j["modes"] = {cfg.n_min, cfg.n_max};
  j["seed"] = cfg.seed;
  json conds = json::array();
  for (const auto& c : rep.conditions) conds.push_back(condition_to_json(c));
  j["conditions"] = conds;
  j["kernel_dimension"] = rep.kernel_dim;
  j["N"] = rep.predicted_n;
  j["implementation_residual"] = rep.implementation_residual;
  j["covariance_residual"] = rep.covariance_residual;
  j["parametrix_residual"] = rep.parametrix_residual;
  j["max_defect_rank"] = rep.max_defect_rank;
  j["assembly_asymmetry"] = rep.assembly_asymmetry;
  j["grading_anticommutator"] = rep.grading_anticommutator;
  j["grading_pi_commutator"] = rep.grading_pi_commutator;
  j["commutator_delta_u"] = rep.commutator_delta_u;
  j["commutator_delta_ustar"] = rep.commutator_delta_ustar;
  j["hs_max_core"] = rep.hs_max_core;
  j["hs_max_tail"] = rep.hs_max_tail;
  j["pass"] = rep.pass;
  if (!rep.pass) j["first_failure"] = rep.first_failure;
  write_text(cfg.out_dir / "report.json", j.dump(2) + "\n");

  os << "kernel dimension: " << rep.kernel_dim << " (N = " << rep.predicted_n << ")\n"
     << "implementation identity residual: " << fmt(rep.implementation_residual) << "\n"
     << "covariance residual:              " << fmt(rep.covariance_residual) << "\n"
     << "parametrix residual:              " << fmt(rep.parametrix_residual) << "\n"
     << "defect rank (max):                " << rep.max_defect_rank << "\n"
     << "assembly asymmetry:               " << fmt(rep.assembly_asymmetry) << "\n"
     << "grading residuals:                " << fmt(rep.grading_anticommutator) << ", "
     << fmt(rep.grading_pi_commutator) << "\n"
     << "commutator deltas (U, U*):        " << fmt(rep.commutator_delta_u) << ", "
     << fmt(rep.commutator_delta_ustar) << "\n"
     << "HS norm max (core / far modes):   " << fmt(rep.hs_max_core) << " / "
     << fmt(rep.hs_max_tail) << "\n"
     << "verdict: " << (rep.pass ? "pass" : "FAIL (" + rep.first_failure + ")") << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
  print_header(cfg, os);
  std::string hs_csv = "n,hs_norm,tail_bound\n";
  std::string sv_csv = "n,j,sigma\n";
  if (cfg.n_min <= cfg.n_max) {
    long N = kernel_dimension(cfg.context());
    auto hs = kernels::hs_sweep(cfg.n_min, cfg.n_max, N, cfg.context());
    for (long n = cfg.n_min; n <= cfg.n_max; ++n) {
      const HsResult& h = hs[size_t(n - cfg.n_min)];
      hs_csv += std::to_string(n) + "," + (h.finite ? fmt(h.value) : "inf") + "," +
                fmt(h.tail_bound) + "\n";
    }
    for (long n = std::max(cfg.n_min, -5L); n <= std::min(cfg.n_max, 5L); ++n) {
      auto sv = singular_values(n, cfg.K, cfg.context());
      for (size_t i = 0; i < sv.size(); ++i)
        sv_csv += std::to_string(n) + "," + std::to_string(i) + "," + fmt(sv[i]) + "\n";
    }
  }
  write_text(cfg.out_dir / "hs_norms.csv", hs_csv);
  write_text(cfg.out_dir / "singular_values.csv", sv_csv);
  os << "wrote " << (cfg.out_dir / "hs_norms.csv").string() << " and "
     << (cfg.out_dir / "singular_values.csv").string() << "\n";
  return 0;
}

}  // namespace qdisk
