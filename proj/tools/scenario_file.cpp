#include "scenario_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyhardy/errors.hpp"

namespace polyhardy::cli {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw InputError("field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) field_error(path + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(field, "must be finite");
  return x;
}

std::complex<double> complex_value(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) field_error(field, "expected a complex number [re, im]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      field_error(path + key, "unknown field");
    }
  }
}

ScenarioSpec parse_spec(const json& obj, const std::string& path) {
  if (!obj.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
  ScenarioSpec spec;
  const json& n = require(obj, "n", path);
  if (!n.is_number_integer() || n.get<long>() < 2 || n.get<long>() > 16) {
    field_error(path + "n", "expected an integer between 2 and 16");
  }
  spec.n = n.get<int>();
  if (obj.contains("max_modulus")) {
    spec.max_modulus = number(obj.at("max_modulus"), path + "max_modulus");
    if (!(spec.max_modulus > 0.0 && spec.max_modulus <= 1.0 - disc::kZeroMargin)) {
      field_error(path + "max_modulus", "must lie in (0, 1 - 1e-8]");
    }
  }
  const json& slots = require(obj, "slots", path);
  if (!slots.is_array()) field_error(path + "slots", "expected an array");
  if (static_cast<int>(slots.size()) != spec.n) {
    field_error(path + "slots", "has " + std::to_string(slots.size()) + " entries but n = " +
                                    std::to_string(spec.n));
  }
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const std::string sp = path + "slots[" + std::to_string(k) + "].";
    const json& s = slots[k];
    if (!s.is_object()) field_error(sp.substr(0, sp.size() - 1), "expected an object");
    SlotSpec slot;
    const json& kind = require(s, "kind", sp);
    if (kind == "blaschke") {
      slot.kind = SlotSpec::Kind::Blaschke;
      reject_unknown(s, {"kind", "zeros", "constant", "truncation"}, sp);
      const json& zeros = require(s, "zeros", sp);
      if (!zeros.is_array()) field_error(sp + "zeros", "expected an array of [re, im] pairs");
      for (std::size_t z = 0; z < zeros.size(); ++z) {
        const std::string zf = sp + "zeros[" + std::to_string(z) + "]";
        const auto a = complex_value(zeros[z], zf);
        if (std::abs(a) > spec.max_modulus) {
          std::ostringstream msg;
          msg << "zero modulus " << std::abs(a) << " exceeds the modulus bound " << spec.max_modulus;
          field_error(zf, msg.str());
        }
        slot.zeros.push_back(a);
      }
      if (s.contains("constant")) {
        slot.constant = complex_value(s.at("constant"), sp + "constant");
        if (std::abs(std::abs(slot.constant) - 1.0) > disc::kConstantTol) {
          field_error(sp + "constant", "must be unimodular");
        }
      }
    } else if (kind == "full") {
      slot.kind = SlotSpec::Kind::Full;
      reject_unknown(s, {"kind", "truncation"}, sp);
    } else {
      field_error(sp + "kind", "expected \"blaschke\" or \"full\"");
    }
    if (s.contains("truncation")) {
      const json& t = s.at("truncation");
      if (!t.is_number_integer() || t.get<long>() < 1 || t.get<long>() > 100000) {
        field_error(sp + "truncation", "expected a positive integer");
      }
      slot.truncation = t.get<long>();
    }
    spec.slots.push_back(std::move(slot));
  }
  return spec;
}

json spec_to_json(const ScenarioSpec& spec) {
  json slots = json::array();
  for (const auto& s : spec.slots) {
    json j;
    if (s.kind == SlotSpec::Kind::Blaschke) {
      j["kind"] = "blaschke";
      j["zeros"] = json::array();
      for (const auto& a : s.zeros) j["zeros"].push_back(complex_to_json(a));
      j["constant"] = complex_to_json(s.constant);
    } else {
      j["kind"] = "full";
    }
    if (s.truncation) j["truncation"] = *s.truncation;
    slots.push_back(std::move(j));
  }
  return json{{"n", spec.n}, {"slots", std::move(slots)}, {"max_modulus", spec.max_modulus}};
}

}  // namespace

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

bool ScenarioFile::requests(const std::string& analysis) const {
  return std::find(analyses.begin(), analyses.end(), analysis) != analyses.end();
}

ScenarioFile parse_scenario(const json& doc) {
  if (!doc.is_object()) throw InputError("scenario: top level must be a JSON object");
  reject_unknown(doc, {"schema_version", "n", "slots", "max_modulus", "analyses", "second", "decay_pair"}, "");
  ScenarioFile f;
  const json& version = require(doc, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    field_error("schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
  }
  f.schema_version = version.get<int>();
  json primary = json::object();
  for (const char* key : {"n", "slots", "max_modulus"}) {
    if (doc.contains(key)) primary[key] = doc.at(key);
  }
  f.primary = parse_spec(primary, "");

  const json& analyses = require(doc, "analyses", "");
  if (!analyses.is_array() || analyses.empty()) field_error("analyses", "expected a non-empty array");
  for (std::size_t k = 0; k < analyses.size(); ++k) {
    const std::string field = "analyses[" + std::to_string(k) + "]";
    if (!analyses[k].is_string()) field_error(field, "expected a string");
    const auto name = analyses[k].get<std::string>();
    if (std::find(kKnownAnalyses.begin(), kKnownAnalyses.end(), name) == kKnownAnalyses.end()) {
      field_error(field, "unknown analysis '" + name + "'");
    }
    if (f.requests(name)) field_error(field, "duplicate analysis '" + name + "'");
    f.analyses.push_back(name);
  }
  if (doc.contains("second")) {
    const json& second = doc.at("second");
    if (second.is_object()) reject_unknown(second, {"n", "slots", "max_modulus"}, "second.");
    f.second = parse_spec(second, "second.");
  }
  if (doc.contains("decay_pair")) {
    const json& p = doc.at("decay_pair");
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
      field_error("decay_pair", "expected [i, j] with 1-based slot indices");
    }
    f.decay_pair = {p[0].get<int>(), p[1].get<int>()};
    if (!(1 <= f.decay_pair.first && f.decay_pair.first < f.decay_pair.second &&
          f.decay_pair.second <= f.primary.n)) {
      field_error("decay_pair", "need 1 <= i < j <= n");
    }
  }
  if (f.requests("rigidity") && !f.second) throw InputError("rigidity requires two scenarios");
  return f;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    throw InputError("scenario file '" + path + "': " + what);
  }
  return parse_scenario(doc);
}

json to_json(const ScenarioFile& f) {
  json j = spec_to_json(f.primary);
  j["schema_version"] = f.schema_version;
  j["analyses"] = f.analyses;
  if (f.second) j["second"] = spec_to_json(*f.second);
  j["decay_pair"] = json::array({f.decay_pair.first, f.decay_pair.second});
  return j;
}

lattice::PolydiscScenario to_scenario(const ScenarioSpec& spec) {
  std::vector<lattice::DiscFactor> factors;
  std::vector<std::optional<numeric::Index>> overrides;
  for (std::size_t k = 0; k < spec.slots.size(); ++k) {
    const auto& s = spec.slots[k];
    try {
      if (s.kind == SlotSpec::Kind::Blaschke) {
        factors.push_back(lattice::DiscFactor::inner(disc::BlaschkeProduct(s.zeros, s.constant, spec.max_modulus)));
      } else {
        factors.push_back(lattice::DiscFactor::full_hardy());
      }
    } catch (const ContractError& e) {
      throw InputError("slot " + std::to_string(k + 1) + ": " + e.what());
    }
    overrides.push_back(s.truncation ? std::optional<numeric::Index>(*s.truncation) : std::nullopt);
  }
  try {
    return lattice::PolydiscScenario::make(std::move(factors), overrides);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

}  // namespace polyhardy::cli
