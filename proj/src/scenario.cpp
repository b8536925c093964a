#include <pjb/scenario.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include <pjb/equivalence.hpp>
#include <pjb/errors.hpp>

namespace pjb {

namespace {

using json = nlohmann::json;

constexpr int max_lemma_degree = 8;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw error(errc::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      fail(join(path, k), "unknown field");
    }
  }
}

double parse_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int parse_int(const json& j, const std::string& path, int lo, int hi) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo || v > hi) fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

cplx parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a number or a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

BlaschkeProduct parse_blaschke(const json& j, const std::string& path) {
  allow_keys(j, path, {"zeros", "constant", "guard"});
  if (!j.contains("zeros") || !j["zeros"].is_array()) fail(join(path, "zeros"), "expected an array of zeros");
  std::vector<cplx> zeros;
  for (std::size_t i = 0; i < j["zeros"].size(); ++i) {
    zeros.push_back(parse_complex(j["zeros"][i], join(join(path, "zeros"), i)));
  }
  const cplx constant = j.contains("constant") ? parse_complex(j["constant"], join(path, "constant")) : cplx(1.0);
  const double guard = j.contains("guard") ? parse_number(j["guard"], join(path, "guard")) : default_zero_guard;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (!std::isfinite(zeros[i].real()) || !std::isfinite(zeros[i].imag()) || std::abs(zeros[i]) >= 1.0) {
      fail(join(join(path, "zeros"), i), "zero must lie in the open unit disc");
    }
  }
  try {
    return BlaschkeProduct(constant, std::move(zeros), guard);
  } catch (const error& e) {
    fail(path, e.what());
  }
}

Factorization parse_factorization(const json& j, const std::string& path) {
  allow_keys(j, path, {"eta", "phi"});
  if (!j.contains("eta") || !j.contains("phi")) fail(path, "needs both eta and phi");
  return {parse_blaschke(j["eta"], join(path, "eta")), parse_blaschke(j["phi"], join(path, "phi"))};
}

InnerGenerator parse_generator(const json& j, const std::string& path) {
  allow_keys(j, path, {"per_var"});
  if (!j.contains("per_var") || !j["per_var"].is_array()) fail(join(path, "per_var"), "expected an array");
  InnerGenerator g;
  for (std::size_t i = 0; i < j["per_var"].size(); ++i) {
    g.per_var.push_back(parse_blaschke(j["per_var"][i], join(join(path, "per_var"), i)));
  }
  return g;
}

std::vector<Vec> parse_vectors(const json& j, const std::string& path, Eigen::Index length) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of vectors");
  std::vector<Vec> out;
  for (std::size_t c = 0; c < j.size(); ++c) {
    const std::string vp = join(path, c);
    if (!j[c].is_array()) fail(vp, "expected an array of coordinates");
    if (static_cast<Eigen::Index>(j[c].size()) != length) {
      fail(vp, "expected " + std::to_string(length) + " coordinates, got " + std::to_string(j[c].size()));
    }
    Vec v(length);
    for (std::size_t i = 0; i < j[c].size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[c][i], join(vp, i));
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------------

struct SubspaceSpec {
  enum class Kind { factorizations, vectors, aux_vectors } kind = Kind::factorizations;
  std::vector<Factorization> factorizations;
  std::vector<Vec> vectors;
  std::optional<InnerGenerator> generator;
};

struct Action {
  std::string type;
  std::string subspace = "M";
  std::string left;
  std::string right;
  std::optional<BlaschkeProduct> theta;
  int trials = 0;
  std::map<std::string, bool> expect;
  std::optional<std::string> expect_error;
  std::string label;
};

struct Scenario {
  std::string name;
  std::vector<BlaschkeProduct> factors;
  int aux_dim = 0;
  std::optional<std::pair<int, int>> hardy;
  std::optional<InnerGenerator> generator;
  std::map<std::string, SubspaceSpec> subspaces;
  std::vector<Action> actions;
  std::map<std::string, double> tol;
  std::uint64_t seed = 0;
};

std::map<std::string, double> parse_tolerances(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) {
    if (!default_tolerances().contains(k)) fail(join(path, k), "unknown tolerance");
    const double x = parse_number(v, join(path, k));
    if (!(x >= min_tolerance)) fail(join(path, k), "tolerance must be at least 1e-12");
    out[k] = x;
  }
  return out;
}

std::int64_t ambient_length(const Scenario& s) {
  std::int64_t d = 1;
  for (const auto& f : s.factors) d *= std::max(f.degree(), 1);
  if (s.aux_dim > 0) d *= s.aux_dim;
  if (s.hardy) {
    for (int i = 0; i < s.hardy->first; ++i) d *= s.hardy->second + 1;
  }
  return d;
}

SubspaceSpec parse_subspace(const json& j, const std::string& path, const Scenario& s) {
  allow_keys(j, path, {"factorization", "factorizations", "vectors", "aux_vectors", "inner_generator"});
  const int kinds = static_cast<int>(j.contains("factorization")) + static_cast<int>(j.contains("factorizations")) +
                    static_cast<int>(j.contains("vectors")) + static_cast<int>(j.contains("aux_vectors"));
  if (kinds != 1) fail(path, "give exactly one of factorization, factorizations, vectors, aux_vectors");
  SubspaceSpec spec;
  if (j.contains("inner_generator")) {
    if (!s.hardy) fail(join(path, "inner_generator"), "only meaningful with a hardy part");
    spec.generator = parse_generator(j["inner_generator"], join(path, "inner_generator"));
  }
  if (j.contains("factorization")) {
    if (s.factors.size() != 1) fail(join(path, "factorization"), "use factorizations with several factors");
    spec.factorizations.push_back(parse_factorization(j["factorization"], join(path, "factorization")));
  } else if (j.contains("factorizations")) {
    const auto& fs = j["factorizations"];
    if (!fs.is_array() || fs.size() != s.factors.size()) {
      fail(join(path, "factorizations"), "expected one factorization per factor");
    }
    for (std::size_t i = 0; i < fs.size(); ++i) {
      spec.factorizations.push_back(parse_factorization(fs[i], join(join(path, "factorizations"), i)));
    }
  } else if (j.contains("vectors")) {
    if (spec.generator) fail(join(path, "inner_generator"), "vectors already describe the whole subspace");
    spec.kind = SubspaceSpec::Kind::vectors;
    spec.vectors = parse_vectors(j["vectors"], join(path, "vectors"), ambient_length(s));
  } else {
    if (s.aux_dim < 1) fail(join(path, "aux_vectors"), "needs aux_dim >= 1");
    spec.kind = SubspaceSpec::Kind::aux_vectors;
    spec.vectors = parse_vectors(j["aux_vectors"], join(path, "aux_vectors"), s.aux_dim);
  }
  return spec;
}

Action parse_action(const json& j, const std::string& path, const Scenario& s) {
  Action a;
  if (j.is_string()) {
    a.type = j.get<std::string>();
  } else {
    allow_keys(j, path,
               {"type", "subspace", "left", "right", "theta", "trials", "expect", "expect_error", "label"});
    if (!j.contains("type") || !j["type"].is_string()) fail(join(path, "type"), "expected an action name");
    a.type = j["type"].get<std::string>();
    if (j.contains("subspace")) {
      if (!j["subspace"].is_string()) fail(join(path, "subspace"), "expected a subspace name");
      a.subspace = j["subspace"].get<std::string>();
    }
    for (const char* side : {"left", "right"}) {
      if (!j.contains(side)) continue;
      if (!j[side].is_string()) fail(join(path, side), "expected a subspace name");
      (std::string(side) == "left" ? a.left : a.right) = j[side].get<std::string>();
    }
    if (j.contains("theta")) a.theta = parse_blaschke(j["theta"], join(path, "theta"));
    if (j.contains("trials")) a.trials = parse_int(j["trials"], join(path, "trials"), 0, 1000);
    if (j.contains("expect")) {
      if (!j["expect"].is_object()) fail(join(path, "expect"), "expected an object of booleans");
      for (const auto& [k, v] : j["expect"].items()) {
        if (!v.is_boolean()) fail(join(join(path, "expect"), k), "expected a boolean");
        a.expect[k] = v.get<bool>();
      }
    }
    if (j.contains("expect_error")) {
      if (!j["expect_error"].is_string()) fail(join(path, "expect_error"), "expected an error name");
      a.expect_error = j["expect_error"].get<std::string>();
    }
    if (j.contains("label")) {
      if (!j["label"].is_string()) fail(join(path, "label"), "expected a string");
      a.label = j["label"].get<std::string>();
    }
  }
  static const std::set<std::string> known{"check", "decompose", "split", "equiv", "verify-lemmas"};
  if (!known.contains(a.type)) fail(join(path, "type"), "unknown action '" + a.type + "'");
  auto need = [&](const std::string& name, const std::string& field) {
    if (name.empty()) fail(join(path, field), "missing subspace name");
    if (!s.subspaces.contains(name)) fail(join(path, field), "no subspace named '" + name + "'");
  };
  if (a.type == "equiv") {
    need(a.left, "left");
    need(a.right, "right");
  } else if (a.type == "verify-lemmas") {
    if (!a.theta) {
      if (s.factors.empty()) fail(join(path, "theta"), "verify-lemmas needs theta");
      a.theta = s.factors.front();
    }
  } else {
    need(a.subspace, "subspace");
    if (s.factors.empty()) fail(path, "this action needs factors");
  }
  if (a.type == "split" && s.aux_dim < 1) fail(path, "split needs aux_dim >= 1");
  if (a.type != "verify-lemmas" && a.type != "split" && s.aux_dim > 0 && a.type != "check") {
    fail(path, "'" + a.type + "' works without an auxiliary slot");
  }
  return a;
}

Scenario parse_scenario(const json& root) {
  allow_keys(root, "", {"name", "factors", "aux_dim", "hardy", "inner_generator", "subspace", "subspaces", "action",
                        "actions", "tolerances", "seed"});
  Scenario s;
  s.tol = default_tolerances();
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail("/name", "expected a string");
    s.name = root["name"].get<std::string>();
  }
  if (root.contains("factors")) {
    if (!root["factors"].is_array()) fail("/factors", "expected an array of Blaschke products");
    for (std::size_t i = 0; i < root["factors"].size(); ++i) {
      BlaschkeProduct b = parse_blaschke(root["factors"][i], join("/factors", i));
      if (b.is_constant()) fail(join("/factors", i), "factor must have at least one zero");
      s.factors.push_back(std::move(b));
    }
    if (s.factors.empty() || s.factors.size() > static_cast<std::size_t>(max_coordinates)) {
      fail("/factors", "between 1 and 4 factors are supported");
    }
  }
  if (root.contains("aux_dim")) s.aux_dim = parse_int(root["aux_dim"], "/aux_dim", 0, static_cast<int>(max_total_dim));
  if (root.contains("hardy")) {
    const auto& h = root["hardy"];
    allow_keys(h, "/hardy", {"num_vars", "degree_cap"});
    if (!h.contains("num_vars") || !h.contains("degree_cap")) fail("/hardy", "needs num_vars and degree_cap");
    s.hardy = std::make_pair(parse_int(h["num_vars"], "/hardy/num_vars", 1, 4),
                             parse_int(h["degree_cap"], "/hardy/degree_cap", 1, 64));
    if (s.aux_dim > 0) fail("/aux_dim", "an auxiliary slot cannot be combined with a hardy part");
    if (s.factors.empty()) fail("/factors", "the mixed space needs at least one model factor");
  }
  if (root.contains("inner_generator")) {
    if (!s.hardy) fail("/inner_generator", "only meaningful with a hardy part");
    s.generator = parse_generator(root["inner_generator"], "/inner_generator");
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) fail("/seed", "expected a nonnegative integer");
    s.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("tolerances")) {
    for (const auto& [k, v] : parse_tolerances(root["tolerances"], "/tolerances")) s.tol[k] = v;
  }
  if (root.contains("subspace") && root.contains("subspaces")) fail("/subspace", "give subspace or subspaces, not both");
  if (root.contains("subspace")) s.subspaces["M"] = parse_subspace(root["subspace"], "/subspace", s);
  if (root.contains("subspaces")) {
    if (!root["subspaces"].is_object()) fail("/subspaces", "expected an object of named subspaces");
    for (const auto& [k, v] : root["subspaces"].items()) s.subspaces[k] = parse_subspace(v, join("/subspaces", k), s);
  }
  if (root.contains("action") && root.contains("actions")) fail("/action", "give action or actions, not both");
  if (root.contains("action")) s.actions.push_back(parse_action(root["action"], "/action", s));
  if (root.contains("actions")) {
    if (!root["actions"].is_array()) fail("/actions", "expected an array");
    for (std::size_t i = 0; i < root["actions"].size(); ++i) {
      s.actions.push_back(parse_action(root["actions"][i], join("/actions", i), s));
    }
  }
  if (s.actions.empty()) fail("/actions", "no actions given");
  return s;
}

// ---------------------------------------------------------------------------------

struct Ambient {
  std::optional<JordanBlockProduct> jordan;
  std::optional<MixedSpace> mixed;
  int aux_dim = 0;

  const JordanBlockProduct& jb() const { return mixed ? mixed->jordan() : *jordan; }
  int ambient_dim() const { return mixed ? mixed->ambient_dim() : jordan->ambient_dim(); }
};

Ambient build_ambient(const Scenario& s) {
  Ambient a;
  a.aux_dim = s.aux_dim;
  if (s.factors.empty()) return a;
  std::vector<ModelSpace> spaces;
  for (const auto& f : s.factors) spaces.emplace_back(f);
  if (s.hardy) {
    a.mixed.emplace(TruncatedHardy(s.hardy->first, s.hardy->second), JordanBlockProduct(std::move(spaces)));
  } else {
    a.jordan.emplace(std::move(spaces), s.aux_dim);
  }
  return a;
}

InnerGenerator generator_for(const Scenario& s, const SubspaceSpec& spec) {
  if (spec.generator) return *spec.generator;
  if (s.generator) return *s.generator;
  return InnerGenerator{std::vector<BlaschkeProduct>(static_cast<std::size_t>(s.hardy->first))};
}

Subspace materialize(const Scenario& s, const Ambient& amb, const SubspaceSpec& spec) {
  switch (spec.kind) {
    case SubspaceSpec::Kind::vectors: {
      Mat cols(amb.ambient_dim(), static_cast<Eigen::Index>(spec.vectors.size()));
      for (std::size_t c = 0; c < spec.vectors.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = spec.vectors[c];
      return Subspace::span(cols);
    }
    case SubspaceSpec::Kind::aux_vectors: {
      Mat cols(amb.aux_dim, static_cast<Eigen::Index>(spec.vectors.size()));
      for (std::size_t c = 0; c < spec.vectors.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = spec.vectors[c];
      const Mat l = orthonormal_range(cols);
      const int t = amb.jb().total_dim();
      return Subspace::from_orthonormal(kron(l, Mat::Identity(t, t)));
    }
    case SubspaceSpec::Kind::factorizations:
      break;
  }
  if (amb.mixed) {
    if (static_cast<int>(generator_for(s, spec).per_var.size()) != amb.mixed->hardy().num_vars()) {
      throw error(errc::precondition, "inner generator needs one factor per Hardy variable");
    }
    return mixed_submodule(*amb.mixed, generator_for(s, spec), spec.factorizations);
  }
  return tensor_submodule(amb.jb(), spec.factorizations);
}

// ---------------------------------------------------------------------------------

json zeros_json(const BlaschkeProduct& b) {
  json out = json::array();
  for (const cplx a : canonical_zeros(b.zeros())) out.push_back(json::array({a.real(), a.imag()}));
  return out;
}

json factor_json(const CoordinateFactor& cf, int coordinate) {
  return json{{"coordinate", coordinate},
              {"dim", cf.w.dim()},
              {"eta", cf.factorization.left.to_string()},
              {"phi", cf.factorization.right.to_string()},
              {"eta_zeros", zeros_json(cf.factorization.left)},
              {"phi_zeros", zeros_json(cf.factorization.right)},
              {"factor", "(" + cf.factorization.left.to_string() + "," + cf.factorization.right.to_string() + ")"}};
}

json generator_json(const InnerGenerator& g) {
  json per = json::array();
  for (const auto& b : g.per_var) per.push_back(zeros_json(b));
  return json{{"name", g.to_string()}, {"per_var_zeros", per}};
}

struct Record {
  json body = json::object();
  json residuals = json::object();
  json verdicts = json::object();
};

struct Decomposed {
  Decomposition decomposition;
  json result;
  json residuals = json::object();
};

Decomposed decompose_any(const Ambient& amb, const Subspace& m) {
  Decomposed d;
  if (amb.mixed) {
    const MixedDecomposition md = decompose_mixed(*amb.mixed, m);
    d.decomposition = Decomposition::from_mixed(*amb.mixed, md);
    json factors = json::array();
    for (std::size_t i = 0; i < md.factors.size(); ++i) factors.push_back(factor_json(md.factors[i], static_cast<int>(i)));
    d.result = json{{"generator", generator_json(md.hardy.generator)},
                    {"hardy_dim", md.hardy_part.dim()},
                    {"window_codim", md.window_codim},
                    {"factors", factors}};
    d.residuals = json{{"doubly_commuting", md.doubly_commuting_residual},
                       {"rank_one", md.hardy.rank_one_residual},
                       {"generator_reconstruction", md.hardy.reconstruction_residual},
                       {"boundary", md.hardy.boundary_residual},
                       {"reconstruction", md.reconstruction_residual}};
  } else {
    const auto& jb = amb.jb();
    const auto factors = decompose_doubly_commuting(jb, m);
    d.decomposition = Decomposition::from_tensor(jb, factors);
    json fj = json::array();
    std::vector<Subspace> parts;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      fj.push_back(factor_json(factors[i], static_cast<int>(i)));
      parts.push_back(factors[i].w);
    }
    d.result = json{{"factors", fj}};
    d.residuals = json{{"doubly_commuting", is_doubly_commuting(jb, m).residual},
                       {"reconstruction", tensor_submodule(parts).distance(m)}};
  }
  d.result["fingerprint"] = fingerprint(d.decomposition).to_string();
  return d;
}

using Subspaces = std::map<std::string, Subspace>;

Record run_check(const Scenario& s, const Ambient& amb, const Subspace& m) {
  Record r;
  const auto& tol = s.tol;
  r.body["dim"] = m.dim();
  if (amb.mixed) {
    const MixedCheck c = check_mixed(*amb.mixed, m);
    r.body["window_dim"] = c.window_dim;
    r.body["window_codim"] = c.window_codim;
    r.residuals["invariance"] = c.s_invariance;
    r.verdicts["submodule"] = c.s_invariance < tol.at("invariance");
    r.verdicts["window_adequate"] = c.window_adequate();
    if (c.submodule()) {
      r.residuals["doubly_commuting"] = c.doubly_commuting_residual;
      r.verdicts["doubly_commuting"] = c.doubly_commuting_residual < tol.at("doubly_commuting");
    }
    return r;
  }
  const auto& jb = amb.jb();
  const ResidualReport sub = is_submodule(jb, m);
  r.residuals["invariance"] = sub.residual;
  r.verdicts["submodule"] = sub.residual < tol.at("invariance");
  if (sub.pass) {
    const ResidualReport dc = is_doubly_commuting(jb, m);
    r.residuals["doubly_commuting"] = dc.residual;
    r.verdicts["doubly_commuting"] = dc.residual < tol.at("doubly_commuting");
  }
  if (amb.aux_dim > 0) {
    std::vector<int> all(static_cast<std::size_t>(jb.coordinates()));
    for (int j = 0; j < jb.coordinates(); ++j) all[static_cast<std::size_t>(j)] = j;
    const double red = reducing_residual(jb, m, all);
    r.residuals["reducing"] = red;
    r.verdicts["reducing"] = red < tol.at("invariance");
  }
  return r;
}

Record run_decompose(const Scenario& s, const Ambient& amb, const Subspace& m) {
  Record r;
  Decomposed d = decompose_any(amb, m);
  r.body = std::move(d.result);
  r.residuals = std::move(d.residuals);
  const double rec = r.residuals["reconstruction"].get<double>();
  r.verdicts["reconstruction"] = rec < (amb.mixed ? s.tol.at("window") : s.tol.at("reconstruction"));
  r.verdicts["doubly_commuting"] = r.residuals["doubly_commuting"].get<double>() < s.tol.at("doubly_commuting");
  if (amb.mixed) {
    r.verdicts["rank_one"] = r.residuals["rank_one"].get<double>() < s.tol.at("window");
    r.verdicts["generator"] = r.residuals["generator_reconstruction"].get<double>() < s.tol.at("window") &&
                              r.residuals["boundary"].get<double>() < s.tol.at("window");
  }
  return r;
}

Record run_split(const Scenario& s, const Ambient& amb, const Subspace& m, const SubspaceSpec& spec) {
  Record r;
  const auto& jb = amb.jb();
  const Subspace l = reducing_split(jb, m);
  r.body["dim"] = l.dim();
  r.body["aux_dim"] = jb.aux_dim();
  std::vector<int> all(static_cast<std::size_t>(jb.coordinates()));
  for (int j = 0; j < jb.coordinates(); ++j) all[static_cast<std::size_t>(j)] = j;
  r.residuals["reducing"] = reducing_residual(jb, m, all);
  const int t = jb.total_dim();
  const double rec = subspace_distance(kron(l.frame(), Mat::Identity(t, t)), m.frame());
  r.residuals["reconstruction"] = rec;
  r.verdicts["reconstruction"] = rec < s.tol.at("reconstruction");
  if (spec.kind == SubspaceSpec::Kind::aux_vectors) {
    Mat cols(jb.aux_dim(), static_cast<Eigen::Index>(spec.vectors.size()));
    for (std::size_t c = 0; c < spec.vectors.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = spec.vectors[c];
    const double rec_l = l.distance(Subspace::span(cols));
    r.residuals["recovery"] = rec_l;
    r.verdicts["recovery"] = rec_l < s.tol.at("split");
  }
  return r;
}

Record run_equiv(const Ambient& amb, const Subspace& left, const Subspace& right) {
  Record r;
  const Decomposed dl = decompose_any(amb, left);
  const Decomposed dr = decompose_any(amb, right);
  const bool eq = are_unitarily_equivalent(dl.decomposition, dr.decomposition);
  r.body["left_fingerprint"] = dl.result["fingerprint"];
  r.body["right_fingerprint"] = dr.result["fingerprint"];
  if (amb.mixed) {
    r.body["left_generator"] = dl.result["generator"]["name"];
    r.body["right_generator"] = dr.result["generator"]["name"];
  }
  r.verdicts["equivalent"] = eq;
  if (!amb.mixed) {
    const bool oracle = intertwiner_oracle(amb.jb(), left, right);
    r.body["oracle"] = oracle;
    r.verdicts["oracle_agrees"] = oracle == eq;
  }
  return r;
}

json lemma_checks(const BlaschkeProduct& theta, const std::map<std::string, double>& tol, json& verdicts) {
  const ModelSpace ms(theta);
  json checks = json::object();
  auto put = [&](const std::string& name, double value, bool pass) {
    checks[name] = json{{"value", value}, {"pass", pass}};
    verdicts[name] = verdicts.contains(name) ? (verdicts[name].get<bool>() && pass) : pass;
  };

  const DefectResiduals dr = defect_identities(ms);
  const double defect = std::max(dr.residual_ss, dr.residual_s_s);
  put("defect_identities", defect, defect < tol.at("defect"));

  const Vec t = backward_shift_theta(ms, 1).coords;
  const double norm_gap = std::abs(t.squaredNorm() - (1.0 - std::norm(theta(0.0))));
  put("norm_identity", norm_gap, norm_gap < tol.at("norm"));

  const ProjectOne po = project_one(ms);
  const double po_res = std::max(po.direct_residual, po.orthogonality_residual);
  put("project_one", po_res, po_res < tol.at("project_one"));

  const double parseval = parseval_frame_residual(ms, parseval_minimal_tail(ms));
  put("parseval_frame", parseval, parseval < tol.at("parseval"));

  const bool cyclic = star_cyclicity_check(ms);
  put("star_cyclicity", cyclic ? 1.0 : 0.0, cyclic);

  std::vector<Subspace> nonzero;
  int recovered = 0;
  int total = 0;
  bool closure_full = true;
  for (const auto& f : factorizations(theta)) {
    const Subspace w = build_submodule(ms, f);
    if (w.is_zero()) continue;
    ++total;
    const Factorization g = classify_submodule(ms, w);
    if (equal_up_to_unimodular(g.left, f.left) && equal_up_to_unimodular(g.right, f.right)) ++recovered;
    closure_full = closure_full && star_closure_full(ms, w).dim() == ms.dim();
    nonzero.push_back(w);
  }
  put("factorization_roundtrip", static_cast<double>(recovered) / total, recovered == total);

  double min_overlap = 1.0;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    for (std::size_t j = i + 1; j < nonzero.size(); ++j) {
      min_overlap = std::min(min_overlap, orthogonality_impossibility(ms, nonzero[i], nonzero[j]));
    }
  }
  put("orthogonality", min_overlap, min_overlap > tol.at("orthogonality"));
  put("star_closure_full", closure_full ? 1.0 : 0.0, closure_full);
  return checks;
}

Record run_lemmas(const Scenario& s, const Action& a) {
  Record r;
  const BlaschkeProduct& theta = *a.theta;
  if (theta.degree() < 1 || theta.degree() > max_lemma_degree) {
    throw error(errc::precondition, "verify-lemmas needs 1 <= degree <= 8, got " + std::to_string(theta.degree()));
  }
  json runs = json::array();
  runs.push_back(json{{"theta", theta.to_string()}, {"checks", lemma_checks(theta, s.tol, r.verdicts)}});
  for (int t = 0; t < a.trials; ++t) {
    const BlaschkeProduct b = random_blaschke(theta.degree(), 0.9, s.seed + static_cast<std::uint64_t>(t));
    runs.push_back(json{{"theta", b.to_string()}, {"checks", lemma_checks(b, s.tol, r.verdicts)}});
  }
  r.body["runs"] = runs;
  r.body["degree"] = theta.degree();
  return r;
}

struct Outcome {
  json record;
  bool pass = false;
  double millis = 0.0;
};

Outcome run_action(const Scenario& s, const Ambient& amb, const Subspaces& subs, const Action& a, std::size_t index) {
  Outcome out;
  json rec = json::object();
  rec["index"] = index;
  rec["type"] = a.type;
  if (!a.label.empty()) rec["label"] = a.label;
  if (a.type == "equiv") {
    rec["left"] = a.left;
    rec["right"] = a.right;
  } else if (a.type != "verify-lemmas") {
    rec["subspace"] = a.subspace;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    Record r;
    if (a.type == "check") {
      r = run_check(s, amb, subs.at(a.subspace));
    } else if (a.type == "decompose") {
      r = run_decompose(s, amb, subs.at(a.subspace));
    } else if (a.type == "split") {
      r = run_split(s, amb, subs.at(a.subspace), s.subspaces.at(a.subspace));
    } else if (a.type == "equiv") {
      r = run_equiv(amb, subs.at(a.left), subs.at(a.right));
    } else {
      r = run_lemmas(s, a);
    }
    bool pass = !a.expect_error.has_value();
    for (const auto& [k, v] : r.verdicts.items()) {
      const bool want = a.expect.contains(k) ? a.expect.at(k) : true;
      pass = pass && (v.get<bool>() == want);
    }
    for (const auto& [k, want] : a.expect) {
      if (!r.verdicts.contains(k)) pass = false;
    }
    rec["result"] = std::move(r.body);
    rec["residuals"] = std::move(r.residuals);
    rec["verdicts"] = std::move(r.verdicts);
    out.pass = pass;
  } catch (const error& e) {
    const std::string full = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    rec["error"] = json{{"code", to_string(e.code())},
                        {"message", full.rfind(prefix, 0) == 0 ? full.substr(prefix.size()) : full}};
    out.pass = a.expect_error.has_value() && *a.expect_error == to_string(e.code());
  }
  if (!a.expect.empty()) rec["expect"] = a.expect;
  if (a.expect_error) rec["expect_error"] = *a.expect_error;
  rec["pass"] = out.pass;
  out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.record = std::move(rec);
  return out;
}

// 12 significant digits, tiny magnitudes flushed to zero, no negative zero.
void round_numbers(json& j) {
  if (j.is_number_float()) {
    double x = j.get<double>();
    if (!std::isfinite(x)) {
      j = nullptr;
      return;
    }
    if (std::abs(x) < 1e-300) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    x = std::strtod(buf, nullptr);
    j = x == 0.0 ? 0.0 : x;
  } else if (j.is_structured()) {
    for (auto& v : j) round_numbers(v);
  }
}

json ambient_json(const Scenario& s, const Ambient& amb) {
  json a = json::object();
  json factors = json::array();
  for (const auto& f : s.factors) factors.push_back(f.to_string());
  a["factors"] = factors;
  a["aux_dim"] = s.aux_dim;
  if (s.hardy) a["hardy"] = json{{"num_vars", s.hardy->first}, {"degree_cap", s.hardy->second}};
  if (!s.factors.empty()) a["dim"] = amb.ambient_dim();
  return a;
}

std::string position_of(const std::string& text, std::size_t byte) {
  const auto end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"invariance", 1e-8},  {"doubly_commuting", 1e-8}, {"reconstruction", 1e-7}, {"window", 1e-6},
      {"defect", 1e-9},      {"norm", 1e-10},            {"project_one", 1e-9},    {"parseval", 1e-9},
      {"orthogonality", 1e-6}, {"split", 1e-8}};
  return t;
}

RunResult run_scenario(const std::string& text, const RunOptions& opts) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::parse_error, position_of(text, e.byte) + ": malformed JSON");
  }
  Scenario s = parse_scenario(root);
  if (opts.seed) s.seed = *opts.seed;
  for (const auto& [k, v] : opts.tolerances) {
    if (!default_tolerances().contains(k)) throw error(errc::parse_error, "--tol " + k + ": unknown tolerance");
    if (!(v >= min_tolerance)) throw error(errc::parse_error, "--tol " + k + ": tolerance must be at least 1e-12");
    s.tol[k] = v;
  }

  json report = json::object();
  report["schema_version"] = report_schema_version;
  report["name"] = s.name;
  report["seed"] = s.seed;
  report["tolerances"] = s.tol;

  std::vector<Outcome> outcomes(s.actions.size());
  std::optional<Ambient> amb;
  Subspaces subs;
  json setup_error;
  try {
    amb = build_ambient(s);
    for (const auto& [name, spec] : s.subspaces) subs.emplace(name, materialize(s, *amb, spec));
  } catch (const error& e) {
    setup_error = json{{"code", to_string(e.code())}, {"message", e.what()}};
  }

  if (setup_error.is_null()) {
    report["ambient"] = ambient_json(s, *amb);
    json dims = json::object();
    for (const auto& [name, sub] : subs) dims[name] = sub.dim();
    report["subspaces"] = dims;
    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(s.actions.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < s.actions.size(); i = next++) {
        outcomes[i] = run_action(s, *amb, subs, s.actions[i], i);
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  } else {
    report["setup_error"] = setup_error;
  }

  RunResult out;
  bool all = setup_error.is_null();
  json actions = json::array();
  std::ostringstream summary;
  for (std::size_t i = 0; i < outcomes.size() && setup_error.is_null(); ++i) {
    all = all && outcomes[i].pass;
    const Action& a = s.actions[i];
    summary << (outcomes[i].pass ? "[PASS] " : "[FAIL] ") << a.type;
    if (a.type == "equiv") {
      summary << " " << a.left << " vs " << a.right;
    } else if (a.type != "verify-lemmas") {
      summary << " " << a.subspace;
    }
    if (outcomes[i].record.contains("error")) summary << " (" << outcomes[i].record["error"]["code"].get<std::string>() << ")";
    char ms[32];
    std::snprintf(ms, sizeof ms, " %.1f ms", outcomes[i].millis);
    summary << ms << "\n";
    actions.push_back(std::move(outcomes[i].record));
  }
  if (!setup_error.is_null()) summary << "[FAIL] setup: " << setup_error["message"].get<std::string>() << "\n";
  report["actions"] = actions;
  report["pass"] = all;
  round_numbers(report);
  out.report = report.dump(2) + "\n";
  out.summary = summary.str();
  out.exit_code = all ? 0 : 1;
  return out;
}

RunResult run_scenario_file(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::parse_error, path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_scenario(buf.str(), opts);
}

}  // namespace pjb
