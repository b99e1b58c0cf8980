#include "run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "polyhardy/blh.hpp"
#include "polyhardy/commutator.hpp"
#include "polyhardy/errors.hpp"
#include "polyhardy/lattice.hpp"
#include "polyhardy/rigidity.hpp"

namespace polyhardy::cli {

using nlohmann::json;
using numeric::ComplexMatrix;
using numeric::Index;

namespace {

// Accumulates checks for one analysis block.
class Block {
 public:
  explicit Block(std::string name) : name_(std::move(name)) { body_["name"] = name_; }

  json& operator[](const char* key) { return body_[key]; }

  void check(const std::string& label, double value, double tol, bool upper = true) {
    const bool ok = std::isfinite(value) && (upper ? value <= tol : value >= tol);
    body_["checks"].push_back(json{{"check", label}, {"value", value}, {"tolerance", tol},
                                   {"bound", upper ? "max" : "min"}, {"passed", ok}});
    if (!ok) {
      std::ostringstream msg;
      msg << label << " = " << value << (upper ? " exceeds " : " is below ") << tol;
      failures_.push_back(msg.str());
    }
  }

  void fail(const std::string& what) { failures_.push_back(what); }

  json finish() {
    if (!body_.contains("checks")) body_["checks"] = json::array();
    body_["passed"] = failures_.empty();
    body_["failures"] = failures_;
    return std::move(body_);
  }

  bool passed() const { return failures_.empty(); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  json body_ = json::object();
  std::vector<std::string> failures_;
};

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json one_based(const std::vector<Index>& v) {
  json out = json::array();
  for (Index x : v) out.push_back(x + 1);
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void analysis_project(const lattice::SubmoduleHandle& h, Block& b) {
  b["ambient_dimension"] = h.ambient_dimension();
  b["quotient_dims"] = h.quotient_dims();
  b["quotient_dimension"] = h.quotient_dimension();
  b["degenerate"] = h.is_degenerate();
  b["full_module"] = h.is_full_module();
  b["inner_slots"] = one_based(h.inner_slots());
  json gram = json::array();
  for (const auto& s : h.slots()) gram.push_back(s.gram_deviation);
  b["gram_deviation"] = gram;
  if (h.is_degenerate()) b["note"] = "no Inner slot: S = {0}";

  b.check("doubly_commuting", lattice::doubly_commuting_check(lattice::quotient_of(h)), 1e-10);
  for (Index i = 0; i < h.n(); ++i) {
    b.check("shift_invariance[" + std::to_string(i + 1) + "]", lattice::shift_invariance_defect(h, i),
            lattice::shift_invariance_tolerance(h, i));
  }
  if (h.ambient_dimension() <= kDenseCheckLimit) {
    const auto family = h.slot_projections();
    const auto forms = lattice::projection_sum_forms(family);
    b.check("slot_projection_commutator", forms.max_commutator, 1e-10);
    b.check("projection_formula_agreement", forms.max_disagreement, 1e-10);
    const ComplexMatrix& ps = forms.product;
    const ComplexMatrix pq = h.quotient_projector();
    const Index d = ps.rows();
    b.check("complementarity", numeric::spectral_norm(ps + pq - ComplexMatrix::Identity(d, d)), 1e-9);
    b.check("idempotency", numeric::spectral_norm(ps * ps - ps), 1e-10);
    b.check("hermiticity", numeric::spectral_norm(ps - ps.adjoint()), 1e-12);
    b["dense_checks"] = "run";
  } else {
    b["dense_checks"] = "skipped: ambient dimension above " + std::to_string(kDenseCheckLimit);
  }
}

void analysis_commutator(const lattice::SubmoduleHandle& h, const RunOptions& opt, Block& b) {
  commutator::CommutatorOptions co;
  co.rank_tol = opt.rank_tol;
  co.enforce = false;
  json pairs = json::array();
  for (Index i = 0; i < h.n(); ++i) {
    for (Index j = i + 1; j < h.n(); ++j) {
      const auto r = commutator::commutator_report(h, i, j, co);
      const std::string tag = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      json p;
      p["pair"] = json::array({i + 1, j + 1});
      p["operator_norm"] = r.operator_norm;
      p["hs_norm"] = r.hs_norm;
      p["numerical_rank"] = r.numerical_rank;
      p["leading_singular_values"] = r.leading_singular_values;
      p["residual_bound"] = r.residual_bound;
      p["identity_error"] = r.identity_error;
      p["structural_vs_oracle_error"] = optional_number(r.structural_vs_oracle_error);
      p["structural_norm"] = optional_number(r.structural_norm);
      p["predicted_norm"] = optional_number(r.predicted_norm);
      p["predicted_rank"] = r.predicted_rank ? json(*r.predicted_rank) : json(nullptr);
      p["tensor_hs_prediction"] = optional_number(r.tensor_hs_prediction);
      // The closed form stated for the HS norm coincides with the operator-norm formula.
      p["closed_form_hs"] = optional_number(r.predicted_norm);
      p["rank_tol"] = r.rank_tol;
      pairs.push_back(std::move(p));

      b.check("identity_error" + tag, r.identity_error, r.identity_tol);
      if (r.structural_vs_oracle_error) {
        b.check("structural_vs_oracle" + tag, *r.structural_vs_oracle_error, r.structural_tol);
      }
      if (r.predicted_norm) {
        b.check("norm_law" + tag, std::abs(r.operator_norm - *r.predicted_norm), r.norm_tol);
      }
      if (r.predicted_rank) {
        b.check("rank_law" + tag, std::abs(static_cast<double>(r.numerical_rank - *r.predicted_rank)), 0.0);
      }
      if (h.n() == 2) {
        b.check("rank_at_most_one" + tag, static_cast<double>(r.numerical_rank), 1.0);
        b.check("hs_equals_norm" + tag, std::abs(r.hs_norm - r.operator_norm), 1e-8);
      }
    }
  }
  b["pairs"] = std::move(pairs);
}

void analysis_essnorm(const lattice::SubmoduleHandle& h, const RunOptions& opt, Block& b) {
  const auto rep = commutator::essential_normality_check(lattice::quotient_of(h), opt.rank_tol);
  b["verdict"] = commutator::to_string(rep.verdict);
  b["quotient_dimension"] = rep.quotient_dimension;
  json slots = json::array();
  bool all_inner = true;
  for (const auto& s : rep.slots) {
    all_inner = all_inner && s.inner;
    json j{{"slot", s.slot + 1}, {"inner", s.inner}, {"norm", s.norm}, {"slot_rank", s.slot_rank},
           {"tensor_rank", s.tensor_rank}};
    if (s.inner) j["self_commutator"] = matrix_to_json(s.slot_factor);
    slots.push_back(std::move(j));
  }
  b["slots"] = std::move(slots);
  const bool expected = all_inner;
  if ((rep.verdict == commutator::NormalityVerdict::EssentiallyNormal) != expected) {
    b.fail("verdict does not match the slot types");
  }
}

void analysis_blh(const lattice::SubmoduleHandle& h, const RunOptions& opt, Block& b) {
  if (h.is_degenerate()) {
    b["skipped"] = "no Inner slot: the submodule is {0}";
    return;
  }
  const auto sym = blh::build_blh_symbol(h.scenario());
  json perm = json::array();
  for (auto p : sym.permutation) perm.push_back(p + 1);
  b["permutation"] = perm;
  b["e_dimension"] = sym.e_dimension();
  const auto res = blh::pencil_residuals(sym);
  b["pencil"] = json{{"a_idempotent", res.a_idempotent}, {"b_idempotent", res.b_idempotent},
                     {"a_hermitian", res.a_hermitian},   {"b_hermitian", res.b_hermitian},
                     {"ab", res.ab},                     {"sum_identity", res.sum_identity},
                     {"telescoping", res.telescoping}};
  b.check("pencil_algebra", res.max(), 1e-10);
  const auto inner = blh::verify_inner(sym, opt.grid);
  b["inner"] = json{{"grid", inner.grid_size}, {"max_deviation", inner.max_deviation}, {"exact", inner.exact}};
  b.check("inner_deviation", inner.max_deviation, 1e-8);
  const auto range = blh::verify_range(sym, h);
  b["range"] = json{{"gap", range.gap}, {"containment", range.containment}, {"coverage", range.coverage},
                    {"window", range.window}, {"generator_rank", range.generator_rank}};
  b.check("range_gap", range.gap, 1e-6);
  const auto w = blh::wandering_subspace(h, sym.distinguished_slot());
  const auto gen = blh::wandering_generation_check(h, w);
  b["wandering"] = json{{"slot", w.slot + 1}, {"dimension", w.dimension()}, {"window", w.window},
                        {"generation_gap", gen.gap}};
  b.check("wandering_generation_gap", gen.gap, 1e-6);
}

void analysis_rigidity(const lattice::SubmoduleHandle& h, const lattice::SubmoduleHandle& h2, Block& b) {
  const auto v = rigidity::equivalence_verdict(h, h2);
  const auto back = rigidity::equivalence_verdict(h2, h);
  b["verdict"] = rigidity::to_string(v.verdict);
  b["note"] = v.note;
  b["equal_threshold"] = v.equal_threshold;
  b["certificate_threshold"] = v.certificate_threshold;
  b["distance"] = v.equality ? json(v.equality->distance) : json(nullptr);
  if (v.certificate) {
    b["certificate"] = json{{"max_difference", v.certificate->max_difference},
                            {"differing_fields", v.certificate->differing_fields}};
  } else {
    b["certificate"] = nullptr;
  }
  auto fp_json = [](const rigidity::Fingerprint& f) {
    json pairs = json::array();
    for (const auto& p : f.pairs) {
      pairs.push_back(json{{"pair", json::array({p.i + 1, p.j + 1})}, {"singular_values", p.singular_values}});
    }
    return json{{"degenerate", f.degenerate},
                {"quotient_dims", f.quotient_dims},
                {"full_hardy", f.full_hardy},
                {"pairs", pairs},
                {"wandering_dimension", f.wandering_dimension ? json(*f.wandering_dimension) : json(nullptr)}};
  };
  b["fingerprints"] = json::array({fp_json(rigidity::fingerprint(h)), fp_json(rigidity::fingerprint(h2))});
  if (back.verdict != v.verdict) b.fail("verdict is not symmetric");
}

void analysis_c0(const lattice::SubmoduleHandle& h, Block& b) {
  const auto q = lattice::quotient_of(h);
  json slots = json::array();
  for (Index i : h.inner_slots()) {
    const double r = commutator::c0_annihilation(q, i);
    slots.push_back(json{{"slot", i + 1}, {"residual", r}});
    b.check("annihilation[" + std::to_string(i + 1) + "]", r, 1e-8);
  }
  b["slots"] = std::move(slots);
}

commutator::DecayProfile analysis_decay(const lattice::PolydiscScenario& s, const ScenarioFile& f,
                                        const RunOptions& opt, Block& b) {
  std::vector<Index> schedule(opt.schedule.begin(), opt.schedule.end());
  auto p = commutator::essential_dc_diagnostic(s, f.decay_pair.first - 1, f.decay_pair.second - 1, schedule,
                                                opt.rank_tol);
  b["pair"] = json::array({f.decay_pair.first, f.decay_pair.second});
  b["schedule"] = p.schedule;
  b["grown_slots"] = one_based(p.grown_slots);
  b["verdict"] = commutator::to_string(p.verdict);
  b["predicted_norm"] = optional_number(p.predicted_norm);
  b["reference_norm"] = p.reference_norm;
  b["plateau_fraction"] = p.plateau_fraction;
  b["plateau_deviation"] = optional_number(p.plateau_deviation);
  b["rank_tol"] = p.rank_tol;
  json snaps = json::array();
  for (const auto& sn : p.snapshots) {
    snaps.push_back(json{{"N", sn.N}, {"ambient_dimension", sn.ambient_dimension}, {"rank", sn.rank},
                         {"singular_values", sn.singular_values}});
  }
  b["snapshots"] = std::move(snaps);
  return p;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

RunResult execute(const ScenarioFile& file, const RunOptions& opt) {
  if (opt.grid < 64) throw InputError("--grid must be at least 64");
  if (!(opt.rank_tol > 0.0 && opt.rank_tol < 1.0)) throw InputError("--rank-tol must lie in (0, 1)");

  RunResult result;
  const auto scenario = to_scenario(file.primary);
  std::optional<lattice::PolydiscScenario> second;
  if (file.second) second = to_scenario(*file.second);

  json analyses = json::array();
  result.timings["analyses"] = json::object();
  try {
    const lattice::SubmoduleHandle h = lattice::submodule_projection(scenario);
    std::optional<lattice::SubmoduleHandle> h2;
    for (const auto& name : file.analyses) {
      const auto start = std::chrono::steady_clock::now();
      Block b(name);
      try {
        if (name == "project") {
          analysis_project(h, b);
        } else if (name == "commutator") {
          analysis_commutator(h, opt, b);
        } else if (name == "essnorm") {
          analysis_essnorm(h, opt, b);
        } else if (name == "blh") {
          analysis_blh(h, opt, b);
        } else if (name == "rigidity") {
          if (second->n() != scenario.n() || second->degrees != scenario.degrees) {
            throw InputError("rigidity: the second scenario must have the same n and truncation degrees");
          }
          if (!h2) h2 = lattice::submodule_projection(*second);
          analysis_rigidity(h, *h2, b);
        } else if (name == "c0") {
          analysis_c0(h, b);
        } else if (name == "decay") {
          result.decay = analysis_decay(scenario, file, opt, b);
        }
      } catch (const AssertionFailure& e) {
        b.fail(e.what());
      }
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      result.timings["analyses"][name] = elapsed.count();
      if (!b.passed()) result.failed_blocks.push_back(name);
      analyses.push_back(b.finish());
    }
  } catch (const SizingError& e) {
    throw InputError(std::string("sizing: ") + e.what() + " (offending dimension " +
                     std::to_string(e.dimension()) + ")");
  } catch (const TruncationError& e) {
    throw InputError(std::string("truncation: ") + e.what());
  } catch (const Error& e) {
    throw InputError(e.what());
  }

  json settings;
  settings["grid"] = opt.grid;
  settings["rank_tol"] = opt.rank_tol;
  settings["schedule"] = opt.schedule;
  settings["truncations"] = scenario.degrees;
  settings["dense_check_limit"] = kDenseCheckLimit;

  result.report["tool"] = json{{"name", "polyhardy"}, {"version", kToolVersion}};
  result.report["scenario"] = to_json(file);
  result.report["settings"] = std::move(settings);
  result.report["analyses"] = std::move(analyses);
  result.report["failed_blocks"] = result.failed_blocks;
  result.report["status"] = result.failed_blocks.empty() ? "pass" : "fail";
  result.exit_code = result.failed_blocks.empty() ? kExitOk : kExitAssertion;
  return result;
}

std::string decay_csv(const commutator::DecayProfile& profile) {
  std::ostringstream out;
  out << "N,sigma_index,sigma_value\n";
  for (const auto& snap : profile.snapshots) {
    for (std::size_t k = 0; k < snap.singular_values.size(); ++k) {
      out << snap.N << ',' << k + 1 << ',' << format_double(snap.singular_values[k]) << '\n';
    }
  }
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void emit_decay_csv(const commutator::DecayProfile& profile, const std::string& path) {
  write_file(path, decay_csv(profile));
}

std::string summary_text(const json& report) {
  std::ostringstream out;
  out << "polyhardy " << report["tool"]["version"].get<std::string>() << "\n";
  out << "status: " << report["status"].get<std::string>() << "\n\n";
  out << std::left << std::setw(12) << "analysis" << std::setw(8) << "result" << "details\n";
  for (const auto& a : report["analyses"]) {
    std::ostringstream details;
    const std::string name = a["name"].get<std::string>();
    if (a.contains("verdict")) details << "verdict " << a["verdict"].get<std::string>() << "; ";
    if (name == "commutator") {
      for (const auto& p : a["pairs"]) {
        details << "(" << p["pair"][0] << "," << p["pair"][1] << ") norm "
                << format_double(p["operator_norm"].get<double>()) << " rank " << p["numerical_rank"] << "; ";
      }
    }
    details << a["checks"].size() << " checks";
    out << std::left << std::setw(12) << name << std::setw(8) << (a["passed"].get<bool>() ? "PASS" : "FAIL")
        << details.str() << "\n";
    for (const auto& f : a["failures"]) out << std::string(20, ' ') << "failure: " << f.get<std::string>() << "\n";
  }
  return out.str();
}

int run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  RunResult result;
  try {
    const ScenarioFile file = load_scenario(opt.scenario_path);
    result = execute(file, opt);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    const std::filesystem::path dir(opt.out_dir);
    std::filesystem::create_directories(dir);
    const std::string stem = std::filesystem::path(opt.scenario_path).stem().string();
    write_file(dir / (stem + ".report.json"), result.report.dump(2) + "\n");
    write_file(dir / (stem + ".timings.json"), result.timings.dump(2) + "\n");
    if (!opt.json_only) {
      write_file(dir / (stem + ".summary.txt"), summary_text(result.report));
      if (result.decay) emit_decay_csv(*result.decay, (dir / (stem + ".decay.csv")).string());
      out << summary_text(result.report);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  for (const auto& name : result.failed_blocks) err << "assertion failure in block '" << name << "'\n";
  return result.exit_code;
}

}  // namespace polyhardy::cli
