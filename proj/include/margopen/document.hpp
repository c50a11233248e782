#ifndef MARGOPEN_DOCUMENT_HPP
#define MARGOPEN_DOCUMENT_HPP

// JSON documents for measures, open sets, grids and reports.
// The schema is described in docs/schema.md; every rational is a string
// "p/q" or "p", every document carries "schema_version" and "kind".

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "couple.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "refine.hpp"
#include "verify.hpp"

namespace margopen::doc {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// ---------------------------------------------------------------------------
// Reading helpers. `path` names the field for diagnostics ("weights[2][1]").
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::schema, "field '" + path + "': " + what);
}

inline const json& field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) bad(path.empty() ? name : path + "." + name, "missing");
  return *it;
}

inline std::string sub(const std::string& path, const char* name) { return path.empty() ? name : path + "." + name; }
inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

inline Rational rational(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a rational string such as \"1/2\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

// Re-raise library errors raised while building a value from a field.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::schema) throw;
    bad(path, e.what());
  }
}

}  // namespace detail

inline void check_header(const json& j, const std::string& kind) {
  const auto& v = detail::field(j, "schema_version", "");
  if (!v.is_number_integer() || v.get<int>() != schema_version) {
    detail::bad("schema_version", "unsupported (expected " + std::to_string(schema_version) + ")");
  }
  const auto& k = detail::field(j, "kind", "");
  if (!k.is_string() || k.get<std::string>() != kind) detail::bad("kind", "expected \"" + kind + "\"");
}

inline json header(const std::string& kind) { return json{{"schema_version", schema_version}, {"kind", kind}}; }

// ---------------------------------------------------------------------------
// Value encoders / decoders
// ---------------------------------------------------------------------------

inline json encode(const Rational& r) { return to_string(r); }

inline json encode(const Space& s) {
  json out = json::array();
  for (const auto& a : s.atoms()) out.push_back({{"id", a.id}, {"coord", to_string(a.coord)}});
  return out;
}

inline SpaceRef decode_space(const json& j, const std::string& path) {
  detail::array(j, path);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = detail::at(path, i);
    atoms.push_back(Atom{detail::string(detail::field(j[i], "id", p), detail::sub(p, "id")),
                         detail::rational(detail::field(j[i], "coord", p), detail::sub(p, "coord"))});
  }
  return detail::guarded(path, [&] { return make_space(std::move(atoms)); });
}

inline json encode(const Interval& iv) { return json::array({to_string(iv.lo), to_string(iv.hi)}); }

inline Interval decode_interval(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) detail::bad(path, "expected [lo, hi]");
  Rational lo = detail::rational(j[0], detail::at(path, 0));
  Rational hi = detail::rational(j[1], detail::at(path, 1));
  return detail::guarded(path, [&] { return Interval(lo, hi); });
}

inline json encode(const IntervalSet& s) {
  json out = json::array();
  for (const auto& iv : s.intervals()) out.push_back(encode(iv));
  return out;
}

inline IntervalSet decode_interval_set(const json& j, const std::string& path) {
  detail::array(j, path);
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < j.size(); ++i) ivs.push_back(decode_interval(j[i], detail::at(path, i)));
  return IntervalSet::canonicalize(std::move(ivs));
}

inline json encode(const BoxSet& s) {
  json out = json::array();
  for (const auto& b : s.boxes()) out.push_back({{"col", encode(b.col)}, {"row", encode(b.row)}});
  return out;
}

inline BoxSet decode_box_set(const json& j, const std::string& path) {
  detail::array(j, path);
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = detail::at(path, i);
    boxes.push_back(Box{decode_interval(detail::field(j[i], "col", p), detail::sub(p, "col")),
                        decode_interval(detail::field(j[i], "row", p), detail::sub(p, "row"))});
  }
  return BoxSet(std::move(boxes));
}

/// Body of a line measure: {"space": [...], "weights": [[id, w], ...]}.
inline json encode(const Measure& m) {
  json w = json::array();
  for (const auto& [k, v] : m.weights()) w.push_back({m.domain().label(k), to_string(v)});
  return {{"space", encode(*m.domain().space)}, {"weights", w}};
}

inline Measure decode_measure(const json& j, const std::string& path) {
  SpaceRef space = decode_space(detail::field(j, "space", path), detail::sub(path, "space"));
  const auto wp = detail::sub(path, "weights");
  const json& w = detail::array(detail::field(j, "weights", path), wp);
  Measure::weight_map weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto p = detail::at(wp, i);
    if (!w[i].is_array() || w[i].size() != 2) detail::bad(p, "expected [id, weight]");
    const auto id = detail::string(w[i][0], detail::at(p, 0));
    auto idx = space->find(id);
    if (!idx) detail::bad(detail::at(p, 0), "unknown atom id \"" + id + "\"");
    weights[*idx] += detail::rational(w[i][1], detail::at(p, 1));
  }
  return detail::guarded(wp, [&] { return Measure(Line{space}, std::move(weights)); });
}

/// Body of a joint measure: {"x_space", "y_space", "weights": [[xid, yid, w], ...]}.
inline json encode(const JointMeasure& m) {
  json w = json::array();
  const Plane& pl = m.domain();
  for (const auto& [k, v] : m.weights()) w.push_back({pl.x->atom(k.first).id, pl.y->atom(k.second).id, to_string(v)});
  return {{"x_space", encode(*pl.x)}, {"y_space", encode(*pl.y)}, {"weights", w}};
}

inline JointMeasure decode_joint(const json& j, const std::string& path) {
  SpaceRef x = decode_space(detail::field(j, "x_space", path), detail::sub(path, "x_space"));
  SpaceRef y = decode_space(detail::field(j, "y_space", path), detail::sub(path, "y_space"));
  const auto wp = detail::sub(path, "weights");
  const json& w = detail::array(detail::field(j, "weights", path), wp);
  JointMeasure::weight_map weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto p = detail::at(wp, i);
    if (!w[i].is_array() || w[i].size() != 3) detail::bad(p, "expected [x_id, y_id, weight]");
    const auto xid = detail::string(w[i][0], detail::at(p, 0));
    const auto yid = detail::string(w[i][1], detail::at(p, 1));
    auto xi = x->find(xid);
    auto yi = y->find(yid);
    if (!xi) detail::bad(detail::at(p, 0), "unknown atom id \"" + xid + "\"");
    if (!yi) detail::bad(detail::at(p, 1), "unknown atom id \"" + yid + "\"");
    weights[std::pair{*xi, *yi}] += detail::rational(w[i][2], detail::at(p, 2));
  }
  return detail::guarded(wp, [&] { return JointMeasure(Plane{x, y}, std::move(weights)); });
}

inline json encode(const Grid& g) {
  json cols = json::array(), rows = json::array();
  for (const auto& c : g.cols()) cols.push_back(encode(c));
  for (const auto& r : g.rows()) rows.push_back(encode(r));
  return {{"cols", cols}, {"rows", rows}};
}

inline Grid decode_grid(const json& j, const std::string& path) {
  std::vector<IntervalSet> cols, rows;
  const auto cp = detail::sub(path, "cols"), rp = detail::sub(path, "rows");
  const json& c = detail::array(detail::field(j, "cols", path), cp);
  const json& r = detail::array(detail::field(j, "rows", path), rp);
  for (std::size_t i = 0; i < c.size(); ++i) cols.push_back(decode_interval_set(c[i], detail::at(cp, i)));
  for (std::size_t i = 0; i < r.size(); ++i) rows.push_back(decode_interval_set(r[i], detail::at(rp, i)));
  return detail::guarded(path.empty() ? "grid" : path, [&] { return Grid(std::move(cols), std::move(rows)); });
}

template <class T>
json optional_rational(const std::optional<T>& v) {
  return v ? json(to_string(*v)) : json(nullptr);
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

inline json measure_document(const Measure& m) {
  json j = header("measure");
  j.update(encode(m));
  return j;
}

inline Measure read_measure_document(const json& j) {
  check_header(j, "measure");
  return decode_measure(j, "");
}

inline json joint_document(const JointMeasure& m) {
  json j = header("joint_measure");
  j.update(encode(m));
  return j;
}

inline JointMeasure read_joint_document(const json& j) {
  check_header(j, "joint_measure");
  return decode_joint(j, "");
}

inline json interval_sets_document(const std::vector<IntervalSet>& sets) {
  json j = header("interval_sets");
  json arr = json::array();
  for (const auto& s : sets) arr.push_back(encode(s));
  j["sets"] = arr;
  return j;
}

inline std::vector<IntervalSet> read_interval_sets_document(const json& j) {
  check_header(j, "interval_sets");
  const json& arr = detail::array(detail::field(j, "sets", ""), "sets");
  std::vector<IntervalSet> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(decode_interval_set(arr[i], detail::at("sets", i)));
  return out;
}

inline json box_sets_document(const std::vector<BoxSet>& sets) {
  json j = header("box_sets");
  json arr = json::array();
  for (const auto& s : sets) arr.push_back(encode(s));
  j["sets"] = arr;
  return j;
}

inline std::vector<BoxSet> read_box_sets_document(const json& j) {
  check_header(j, "box_sets");
  const json& arr = detail::array(detail::field(j, "sets", ""), "sets");
  std::vector<BoxSet> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(decode_box_set(arr[i], detail::at("sets", i)));
  return out;
}

inline json grid_document(const Grid& g) {
  json j = header("grid");
  j.update(encode(g));
  return j;
}

inline Grid read_grid_document(const json& j) {
  check_header(j, "grid");
  return decode_grid(j, "");
}

inline json marginal_pair_document(const MarginalPair& p) {
  json j = header("marginal_pair");
  j["mu"] = encode(p.mu);
  j["nu"] = encode(p.nu);
  return j;
}

inline MarginalPair read_marginal_pair_document(const json& j) {
  check_header(j, "marginal_pair");
  return {decode_measure(detail::field(j, "mu", ""), "mu"), decode_measure(detail::field(j, "nu", ""), "nu")};
}

/// `grid` supplies the (q, s) labels of each cell; cells are listed in
/// Grid::index order.
inline json preimage_report_document(const PreimageReport& r, const Grid& grid) {
  json j = header("preimage_report");
  j["lambda"] = encode(r.lambda);
  j["lambda_tilde"] = encode(r.lambda_tilde);
  j["mu_remainder"] = encode(r.mu_remainder);
  j["nu_remainder"] = encode(r.nu_remainder);
  j["remainder_coupling"] = encode(r.remainder_coupling);
  json cells = json::array();
  for (std::size_t c = 0; c < r.alphas.size(); ++c) {
    auto [q, s] = grid.coords(c);
    cells.push_back({{"q", q},
                     {"s", s},
                     {"alpha_prime", to_string(r.alphas[c].alpha_prime)},
                     {"alpha_dblprime", to_string(r.alphas[c].alpha_dblprime)},
                     {"alpha", to_string(r.alphas[c].alpha)},
                     {"drop", to_string(r.cell_drops[c])}});
  }
  j["cells"] = cells;
  return j;
}

inline PreimageReport read_preimage_report_document(const json& j) {
  check_header(j, "preimage_report");
  PreimageReport r{decode_joint(detail::field(j, "lambda", ""), "lambda"),
                   {},
                   decode_joint(detail::field(j, "lambda_tilde", ""), "lambda_tilde"),
                   decode_measure(detail::field(j, "mu_remainder", ""), "mu_remainder"),
                   decode_measure(detail::field(j, "nu_remainder", ""), "nu_remainder"),
                   decode_joint(detail::field(j, "remainder_coupling", ""), "remainder_coupling"),
                   {}};
  const json& cells = detail::array(detail::field(j, "cells", ""), "cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto p = detail::at("cells", i);
    const json& c = cells[i];
    r.alphas.push_back(CellCoefficients{
        detail::rational(detail::field(c, "alpha_prime", p), detail::sub(p, "alpha_prime")),
        detail::rational(detail::field(c, "alpha_dblprime", p), detail::sub(p, "alpha_dblprime")),
        detail::rational(detail::field(c, "alpha", p), detail::sub(p, "alpha"))});
    r.cell_drops.push_back(detail::rational(detail::field(c, "drop", p), detail::sub(p, "drop")));
  }
  return r;
}

inline json refine_result_document(const RefineResult& r) {
  json j = header("refine_result");
  j["grid"] = encode(r.grid);
  j["delta"] = to_string(r.delta);
  json cells = json::array();
  for (std::size_t c = 0; c < r.owner.size(); ++c) {
    auto [q, s] = r.grid.coords(c);
    cells.push_back({{"q", q}, {"s", s}, {"owner", r.owner[c] ? json(*r.owner[c]) : json(nullptr)}});
  }
  j["cells"] = cells;
  return j;
}

inline RefineResult read_refine_result_document(const json& j) {
  check_header(j, "refine_result");
  RefineResult r{decode_grid(detail::field(j, "grid", ""), "grid"),
                 detail::rational(detail::field(j, "delta", ""), "delta"),
                 {}};
  const json& cells = detail::array(detail::field(j, "cells", ""), "cells");
  if (cells.size() != r.grid.cell_count()) detail::bad("cells", "length does not match the grid");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto p = detail::at("cells", i);
    const json& o = detail::field(cells[i], "owner", p);
    if (o.is_null()) {
      r.owner.emplace_back();
    } else if (o.is_number_unsigned()) {
      r.owner.emplace_back(o.get<std::size_t>());
    } else {
      detail::bad(detail::sub(p, "owner"), "expected a set index or null");
    }
  }
  return r;
}

inline json cert_report_document(const CertReport& r) {
  json j = header("cert_report");
  j["passed"] = r.passed();
  j["trials"] = r.trials;
  j["delta"] = to_string(r.delta);
  j["cells"] = r.cells;
  j["min_observed_gap"] = optional_rational(r.min_observed_gap);
  json vs = json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"trial", v.trial},
                  {"seed", v.seed.value},
                  {"reason", v.reason},
                  {"cell", v.cell ? json(*v.cell) : json(nullptr)},
                  {"gap", optional_rational(v.gap)},
                  {"mu", v.mu ? encode(*v.mu) : json(nullptr)},
                  {"nu", v.nu ? encode(*v.nu) : json(nullptr)}});
  }
  j["violations"] = vs;
  return j;
}

inline CertReport read_cert_report_document(const json& j) {
  check_header(j, "cert_report");
  auto count = [](const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) detail::bad(path, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  };
  CertReport r;
  r.trials = count(detail::field(j, "trials", ""), "trials");
  r.delta = detail::rational(detail::field(j, "delta", ""), "delta");
  r.cells = count(detail::field(j, "cells", ""), "cells");
  const json& g = detail::field(j, "min_observed_gap", "");
  if (!g.is_null()) r.min_observed_gap = detail::rational(g, "min_observed_gap");
  const json& vs = detail::array(detail::field(j, "violations", ""), "violations");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto p = detail::at("violations", i);
    const json& e = vs[i];
    Violation v;
    v.trial = count(detail::field(e, "trial", p), detail::sub(p, "trial"));
    v.seed = Seed{count(detail::field(e, "seed", p), detail::sub(p, "seed"))};
    v.reason = detail::string(detail::field(e, "reason", p), detail::sub(p, "reason"));
    if (const json& c = detail::field(e, "cell", p); !c.is_null()) v.cell = count(c, detail::sub(p, "cell"));
    if (const json& x = detail::field(e, "gap", p); !x.is_null()) v.gap = detail::rational(x, detail::sub(p, "gap"));
    if (const json& x = detail::field(e, "mu", p); !x.is_null()) v.mu = decode_measure(x, detail::sub(p, "mu"));
    if (const json& x = detail::field(e, "nu", p); !x.is_null()) v.nu = decode_measure(x, detail::sub(p, "nu"));
    r.violations.push_back(std::move(v));
  }
  const json& passed = detail::field(j, "passed", "");
  if (!passed.is_boolean() || passed.get<bool>() != r.violations.empty()) {
    detail::bad("passed", "must be a boolean equal to (violations is empty)");
  }
  return r;
}

inline json lemma_check_document(int lemma, const LemmaCheck& c) {
  json j = header("lemma_check");
  j["lemma"] = lemma;
  j["lhs"] = to_string(c.lhs);
  j["bound"] = to_string(c.bound);
  j["ok"] = c.ok;
  return j;
}

inline std::pair<int, LemmaCheck> read_lemma_check_document(const json& j) {
  check_header(j, "lemma_check");
  const json& l = detail::field(j, "lemma", "");
  if (!l.is_number_integer() || (l.get<int>() != 4 && l.get<int>() != 5)) detail::bad("lemma", "expected 4 or 5");
  const json& ok = detail::field(j, "ok", "");
  if (!ok.is_boolean()) detail::bad("ok", "expected a boolean");
  return {l.get<int>(), LemmaCheck{detail::rational(detail::field(j, "lhs", ""), "lhs"),
                                   detail::rational(detail::field(j, "bound", ""), "bound"), ok.get<bool>()}};
}

// ---------------------------------------------------------------------------
// Text I/O
// ---------------------------------------------------------------------------

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::schema, origin + ": malformed JSON (" + e.what() + ")");
  }
}

inline json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::schema, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

}  // namespace margopen::doc

#endif  // MARGOPEN_DOCUMENT_HPP
