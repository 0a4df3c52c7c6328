#include "otlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace otlab {

namespace {

// Route every nlohmann access error into input_error so CLI callers get a
// uniform failure surface (exit code 2).
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Spaces
// ---------------------------------------------------------------------------

json space_to_json(const SpaceDescriptor& space) {
  json j;
  if (space.is_ray()) {
    j["kind"] = "ray";
  } else if (space.is_interval()) {
    j["kind"] = "interval";
    j["a"] = space.as_interval().a;
    j["b"] = space.as_interval().b;
  } else if (space.is_euclidean()) {
    j["kind"] = "euclidean";
    j["dim"] = space.as_euclidean().dim;
  } else if (space.is_finite()) {
    const auto& fin = space.as_finite();
    j["kind"] = "finite";
    json rows = json::array();
    for (std::size_t i = 0; i < fin.n; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < fin.n; ++k) row.push_back(fin.d(i, k));
      rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
  } else if (space.is_qproduct()) {
    const auto& qp = space.as_qproduct();
    j["kind"] = "qproduct";
    j["q"] = qp.q;
    j["left"] = space_to_json(*qp.left);
    j["right"] = space_to_json(*qp.right);
  } else {
    const auto& sus = space.as_suspension();
    j["kind"] = "suspension";
    j["base"] = space_to_json(*sus.base);
    j["strict"] = sus.strict;
  }
  return j;
}

SpacePtr space_from_json(const json& j) {
  return guarded("space", [&]() -> SpacePtr {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ray") return make_ray();
    if (kind == "interval")
      return make_interval(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "euclidean")
      return make_euclidean(j.at("dim").get<std::size_t>());
    if (kind == "finite") {
      const json& rows = j.at("dist");
      if (!rows.is_array() || rows.empty())
        throw input_error("finite space needs a non-empty distance matrix");
      std::size_t n = rows.size();
      std::vector<double> dist;
      dist.reserve(n * n);
      for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n)
          throw input_error("finite distance matrix must be square");
        for (const auto& v : row) dist.push_back(v.get<double>());
      }
      return make_finite(n, std::move(dist));
    }
    if (kind == "qproduct")
      return make_qproduct(space_from_json(j.at("left")),
                           space_from_json(j.at("right")),
                           j.at("q").get<double>());
    if (kind == "suspension") {
      bool strict = j.value("strict", true);
      return make_suspension(space_from_json(j.at("base")), strict);
    }
    throw input_error("unknown space kind '" + kind + "'");
  });
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

json point_to_json(const Point& p) {
  json j;
  if (p.is_scalar()) {
    j["kind"] = "scalar";
    j["value"] = p.as_scalar();
  } else if (p.is_vector()) {
    j["kind"] = "vector";
    j["coords"] = p.as_vector();
  } else if (p.is_index()) {
    j["kind"] = "index";
    j["i"] = p.as_index();
  } else if (p.is_pair()) {
    j["kind"] = "pair";
    j["left"] = point_to_json(*p.as_pair().left);
    j["right"] = point_to_json(*p.as_pair().right);
  } else {
    const auto& s = p.as_susp();
    j["kind"] = "suspension";
    if (s.base == nullptr) {
      j["pole"] = (s.angle == 0.0) ? "zero" : "pi";
    } else {
      j["angle"] = s.angle;
      j["base"] = point_to_json(*s.base);
    }
  }
  return j;
}

Point point_from_json(const json& j) {
  return guarded("point", [&]() -> Point {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "scalar") return Point::scalar(j.at("value").get<double>());
    if (kind == "vector")
      return Point::vec(j.at("coords").get<std::vector<double>>());
    if (kind == "index") return Point::index(j.at("i").get<std::size_t>());
    if (kind == "pair")
      return Point::pair(point_from_json(j.at("left")),
                         point_from_json(j.at("right")));
    if (kind == "suspension") {
      if (j.contains("pole")) {
        const std::string pole = j.at("pole").get<std::string>();
        if (pole == "zero") return Point::pole_zero();
        if (pole == "pi") return Point::pole_pi();
        throw input_error("suspension pole must be 'zero' or 'pi'");
      }
      // The factory canonicalizes angle 0 / pi inputs to poles itself.
      return Point::susp(j.at("angle").get<double>(),
                         point_from_json(j.at("base")));
    }
    throw input_error("unknown point kind '" + kind + "'");
  });
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

json measure_to_json(const AtomicMeasure& mu) {
  json j;
  j["space"] = space_to_json(*mu.space());
  json atoms = json::array();
  for (const auto& atom : mu.atoms()) {
    json a;
    a["point"] = point_to_json(atom.point);
    a["weight"] = atom.weight;
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

AtomicMeasure measure_from_json(const json& j, SpacePtr fallback_space) {
  return guarded("measure", [&]() -> AtomicMeasure {
    SpacePtr space;
    if (j.contains("space"))
      space = space_from_json(j.at("space"));
    else if (fallback_space != nullptr)
      space = std::move(fallback_space);
    else
      throw input_error("measure document carries no space");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back(
          {point_from_json(a.at("point")), a.at("weight").get<double>()});
    return AtomicMeasure::make(std::move(space), std::move(atoms), 1e-9);
  });
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

json plan_to_json(const TransportPlan& plan) {
  json j;
  j["p"] = plan.p();
  j["cost"] = plan.cost();
  j["wp"] = plan.wp();
  j["mu"] = measure_to_json(plan.source());
  j["nu"] = measure_to_json(plan.target());
  json entries = json::array();
  for (const auto& e : plan.entries()) {
    json row;
    row["i"] = e.i;
    row["j"] = e.j;
    row["mass"] = e.mass;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

TransportPlan plan_from_json(const json& j) {
  return guarded("plan", [&]() -> TransportPlan {
    double p = j.at("p").get<double>();
    AtomicMeasure mu = measure_from_json(j.at("mu"));
    AtomicMeasure nu = measure_from_json(j.at("nu"));
    std::vector<PlanEntry> entries;
    for (const auto& e : j.at("entries"))
      entries.push_back({e.at("i").get<std::size_t>(),
                         e.at("j").get<std::size_t>(),
                         e.at("mass").get<double>()});
    TransportPlan plan =
        TransportPlan::make(std::move(mu), std::move(nu), std::move(entries), p);
    // The document's cost and wp must agree with the recomputation.
    if (j.contains("cost")) {
      double stored = j.at("cost").get<double>();
      if (std::fabs(stored - plan.cost()) > 1e-10 * (1.0 + plan.cost()))
        throw input_error("plan cost disagrees with its entries");
    }
    if (j.contains("wp")) {
      double stored = j.at("wp").get<double>();
      if (std::fabs(stored - plan.wp()) > 1e-10 * (1.0 + plan.wp()))
        throw input_error("plan wp disagrees with its entries");
    }
    return plan;
  });
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

json report_to_json_value(const RunReport& report) {
  json j;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["all_pass"] = report.all_pass();
  json rows = json::array();
  for (const auto& a : report.assertions) {
    json row;
    row["id"] = a.id;
    row["description"] = a.description;
    row["expected"] = a.expected;
    row["actual"] = a.actual;
    row["tolerance"] = a.tolerance;
    row["pass"] = a.pass;
    rows.push_back(std::move(row));
  }
  j["assertions"] = std::move(rows);
  return j;
}

RunReport report_from_json_value(const json& j) {
  return guarded("report", [&]() -> RunReport {
    RunReport report;
    report.suite = j.at("suite").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("assertions")) {
      Assertion a;
      a.id = row.at("id").get<std::string>();
      a.description = row.at("description").get<std::string>();
      a.expected = row.at("expected").get<std::string>();
      a.actual = row.at("actual").get<std::string>();
      a.tolerance = row.at("tolerance").get<double>();
      a.pass = row.at("pass").get<bool>();
      report.assertions.push_back(std::move(a));
    }
    return report;
  });
}

// ---------------------------------------------------------------------------
// Text plumbing
// ---------------------------------------------------------------------------

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

}  // namespace otlab
