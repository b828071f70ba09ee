// prodsys: experiment runner and report emitter.
//
// Exit status: 0 when every assertion in the report holds, 1 when one fails,
// 2 for usage errors, 3 when the library rejects the input.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prodsys/amalgam.hpp"
#include "prodsys/cluster.hpp"
#include "prodsys/errors.hpp"
#include "prodsys/fock.hpp"
#include "prodsys/hyperspace.hpp"
#include "prodsys/kernels.hpp"
#include "prodsys/lattice.hpp"
#include "prodsys/random.hpp"
#include "prodsys/random_sets.hpp"
#include "prodsys/selftest.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace prodsys;
using linalg::ComplexVector;

constexpr int kMaxLevel = 8;
constexpr int kMaxSlot = 4;
constexpr int kMaxCells = 12;
constexpr int kMaxRefinement = 20;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  Json body = Json::object();
  std::string table;  // key of the array emitted as CSV rows
  bool ok = true;
};

ComplexVector basis_vector(std::size_t dim, std::size_t i) {
  ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

Json check_json(const CheckResult& c) {
  return {{"name", c.name}, {"pass", c.pass}, {"max_defect", c.max_defect}, {"detail", c.detail}};
}

Json law_json(const hyperspace::RandomClosedSetDist& d) {
  Json out = Json::array();
  for (const auto& [set, p] : d.atoms()) out.push_back({{"atom", set.to_text()}, {"prob", to_string(p)}});
  return out;
}

Report run_euler(double c_norm2, double t, int n_max) {
  if (c_norm2 < 0.0 || !std::isfinite(c_norm2)) throw UsageError("--c-norm2 must be a nonnegative number");
  if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("--t must be positive");
  Report r;
  r.table = "rows";
  ComplexVector c(1);
  c(0) = std::sqrt(c_norm2);
  const long double u = static_cast<long double>(c_norm2) * t;
  Json rows = Json::array();
  double previous = 0.0;
  double worst = 0.0;
  bool monotone = true;
  for (int n = 0; n <= n_max; ++n) {
    const double got = fock::euler_norm_defect(c, t, static_cast<unsigned>(n));
    const long double parts = std::ldexp(1.0L, n);
    const double oracle = static_cast<double>(std::exp(u) - std::pow(1.0L + u / parts, parts));
    worst = std::max(worst, std::abs(got - oracle) / std::max(1.0, std::exp(static_cast<double>(u))));
    if (n > 0 && u > 0 && !(got < previous)) monotone = false;
    previous = got;
    rows.push_back({{"n", n}, {"parts", static_cast<std::uint64_t>(1) << n}, {"defect2", got}, {"oracle", oracle}});
  }
  r.ok = worst <= 1e-12 && monotone;
  r.body["max_relative_error"] = worst;
  r.body["strictly_decreasing"] = monotone;
  r.body["rows"] = std::move(rows);
  return r;
}

Report run_roots(int g, int depth, gen::Rng& rng) {
  if (kernels::ipow(static_cast<std::size_t>(g), static_cast<std::size_t>(depth)) > lattice::kMaxFiberDim) {
    throw UsageError("g^depth exceeds " + std::to_string(lattice::kMaxFiberDim));
  }
  const auto gs = static_cast<std::size_t>(g);
  const ComplexVector u = basis_vector(gs, 0);
  const auto seeds = lattice::solve_addit_seeds(lattice::Subsystem::full(gs, static_cast<std::size_t>(depth)), u);
  std::vector<fock::UnitLabel> units{fock::label_of_slot_unit(u, u)};
  for (std::size_t k = 0; k <= gs; ++k) units.push_back(fock::label_of_slot_unit(u, gen::complex_vector(rng, gs)));
  const std::size_t index = fock::index_from_units(units);
  Report r;
  r.table = "rows";
  r.body["seed_dim"] = seeds.seeds.rank();
  r.body["root_dim"] = seeds.roots.rank();
  r.body["index"] = index;
  r.body["match"] = seeds.roots.rank() == index;
  r.body["rows"] = Json::array({{{"g", g}, {"depth", depth}, {"root_dim", seeds.roots.rank()}, {"index", index}}});
  r.ok = seeds.roots.rank() == index && index == gs - 1;
  return r;
}

Report run_index(int g, int count, gen::Rng& rng) {
  const auto gs = static_cast<std::size_t>(g);
  const ComplexVector u = basis_vector(gs, 0);
  std::vector<fock::UnitLabel> units;
  Json rows = Json::array();
  for (int k = 0; k < count; ++k) {
    units.push_back(fock::label_of_slot_unit(u, gen::complex_vector(rng, gs)));
    const auto& l = units.back();
    std::ostringstream dir;
    for (Eigen::Index i = 0; i < l.direction.size(); ++i) {
      dir << (i ? " " : "") << l.direction(i).real() << (l.direction(i).imag() < 0 ? "" : "+")
          << l.direction(i).imag() << "i";
    }
    rows.push_back({{"unit", k}, {"drift_re", l.drift.real()}, {"drift_im", l.drift.imag()}, {"direction", dir.str()}});
  }
  const std::size_t index = fock::index_from_units(units);
  const std::size_t expected = std::min<std::size_t>(static_cast<std::size_t>(count) - 1, gs - 1);
  Report r;
  r.table = "units";
  r.body["index"] = index;
  r.body["expected"] = expected;
  r.body["match"] = index == expected;
  r.body["units"] = std::move(rows);
  r.ok = index == expected;
  return r;
}

Report run_amalgam(int g1, int g2, int trials, gen::Rng& rng) {
  Report r;
  r.table = "trials";
  Json rows = Json::array();
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const double scale = k % 3 == 0 ? 1.0 : gen::uniform01(rng) * 0.999 + 0.001;
    const amalgam::SlotMorphism c(
        gen::contraction(rng, static_cast<std::size_t>(g1), static_cast<std::size_t>(g2), scale));
    const auto res = amalgam::amalgamate(static_cast<std::size_t>(g1), static_cast<std::size_t>(g2), c);
    const auto d = amalgam::check_invariants(res);
    worst = std::max({worst, d.isometry1, d.isometry2, d.pairing, d.generation});
    rows.push_back({{"trial", k},
                    {"sigma_max", linalg::operator_norm(c.matrix())},
                    {"slot_dim", res.slot_dim},
                    {"isometry1", d.isometry1},
                    {"isometry2", d.isometry2},
                    {"pairing", d.pairing},
                    {"generation", d.generation}});
  }
  linalg::ComplexMatrix half(1, 1);
  half(0, 0) = 0.5;
  const auto inst = amalgam::amalgamate(1, 1, amalgam::SlotMorphism(half));
  const ComplexVector one = ComplexVector::Ones(1);
  const auto roots = lattice::solve_addit_seeds(lattice::Subsystem::full(inst.slot_dim), inst.j2 * one).roots.rank();
  const auto component = lattice::solve_addit_seeds(lattice::Subsystem::full(1), one).roots.rank();
  r.body["max_defect"] = worst;
  r.body["half_instance"] = {{"slot_dim", inst.slot_dim}, {"root_dim", roots}, {"component_root_dims", {component, component}}};
  r.body["trials"] = std::move(rows);
  r.ok = worst < 1e-10 && inst.slot_dim == 2 && roots == 1 && component == 0;
  return r;
}

Report run_cluster(int g, int depth, gen::Rng& rng) {
  const auto gs = static_cast<std::size_t>(g);
  const auto ds = static_cast<std::size_t>(depth);
  if (kernels::ipow(gs, ds) > random_sets::kMaxDenseDim) {
    throw UsageError("g^depth exceeds " + std::to_string(random_sets::kMaxDenseDim));
  }
  const ComplexVector u = gen::unit_vector(rng, gs);
  const auto report = cluster::cluster_report(lattice::Subsystem::unit_line(u, ds), ds);
  Report r;
  r.table = "levels";
  Json levels = Json::array();
  bool formula = true;
  for (std::size_t n = 1; n <= ds; ++n) {
    const std::size_t expected = 1 + n * (gs - 1);
    formula = formula && report.inclusion_dims[n - 1] == expected;
    levels.push_back({{"n", n},
                      {"ominus_dim", report.ominus_dims[n - 1]},
                      {"cluster_dim", report.inclusion_dims[n - 1]},
                      {"formula", expected}});
  }
  std::vector<CheckResult> checks = report.checks;
  if (report.checks.front().pass) {
    const auto xs = cluster::x_spaces(u, ds);
    for (std::size_t m = 1; m < ds; ++m) {
      for (std::size_t n = 1; m + n <= ds; ++n) checks.push_back(cluster::x_decomposition_check(xs, u, m, n));
      auto s = cluster::shift_orthogonality_check(xs, u, m);
      s.detail = "m=" + std::to_string(m) + "," + s.detail;
      checks.push_back(std::move(s));
    }
  }
  const auto generated = lattice::generate_with_report(report.inclusion);
  Json check_rows = Json::array();
  for (const auto& c : checks) check_rows.push_back(check_json(c));
  r.body["dimension_formula"] = formula;
  r.body["generated_full"] = generated.system.level1().is_full();
  r.body["generation_route_defect"] = generated.route_defect;
  r.body["checks"] = std::move(check_rows);
  r.body["levels"] = std::move(levels);
  r.ok = formula && generated.system.level1().is_full() && all_pass(checks);
  return r;
}

Report run_derivative(int g, int cells, int rank, const std::string& state, gen::Rng& rng) {
  const auto gs = static_cast<std::size_t>(g);
  const auto ns = static_cast<std::size_t>(cells);
  if (rank > g) throw UsageError("--rank must not exceed --g");
  const std::size_t dim = kernels::ipow(gs, ns);
  if (dim > random_sets::kMaxDenseDim) {
    throw UsageError("g^cells exceeds " + std::to_string(random_sets::kMaxDenseDim));
  }
  linalg::ComplexMatrix span = linalg::ComplexMatrix::Identity(static_cast<Eigen::Index>(gs), rank);
  const lattice::Subsystem f(linalg::Subspace::from_orthonormal(span), std::max<std::size_t>(ns, 1));
  const random_sets::StateDensity rho = state == "tracial"     ? random_sets::StateDensity::tracial(dim)
                                        : state == "geometric" ? random_sets::StateDensity::geometric_diagonal(dim)
                                                               : random_sets::StateDensity::random_faithful_diagonal(dim, rng);
  const auto report = random_sets::verify_derivative_correspondence(f, rho, ns);
  Report r;
  r.table = "checks";
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back(check_json(c));
  r.body["checks"] = std::move(checks);
  r.body["measure"] = law_json(report.measure.dist);
  r.body["cluster_measure"] = law_json(report.cluster_measure.dist);
  r.body["exact"] = report.measure.dist.exact() && report.cluster_measure.dist.exact();
  r.body["non_faithful_warning"] = report.measure.non_faithful_warning;
  r.ok = report.pass();
  return r;
}

Report run_hausdorff(const std::string& a_text, const std::string& b_text, int trials, gen::Rng& rng) {
  using hyperspace::ClosedSet;
  ClosedSet a, b;
  try {
    a = ClosedSet::parse(a_text);
    b = ClosedSet::parse(b_text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Rational d = hyperspace::hausdorff(a, b);
  Report r;
  r.table = "sets";
  r.body["distance"] = to_string(d);
  r.body["distance_decimal"] = to_double(d);
  r.body["sets"] = Json::array(
      {{{"name", "a"}, {"set", a.to_text()}, {"derivative", hyperspace::cb_derivative(a).to_text()},
        {"boundary", hyperspace::boundary(a).to_text()}},
       {{"name", "b"}, {"set", b.to_text()}, {"derivative", hyperspace::cb_derivative(b).to_text()},
        {"boundary", hyperspace::boundary(b).to_text()}}});
  int failures = 0;
  for (int k = 0; k < trials; ++k) {
    const ClosedSet x = gen::closed_set(rng, 32, 3);
    const ClosedSet y = gen::closed_set(rng, 32, 3);
    const ClosedSet z = gen::closed_set(rng, 32, 3);
    const Rational xy = hyperspace::hausdorff(x, y);
    const bool ok = xy == hyperspace::hausdorff(y, x) && (xy == 0) == (x == y) &&
                    hyperspace::hausdorff(x, z) <= xy + hyperspace::hausdorff(y, z);
    if (!ok) ++failures;
  }
  r.body["metric_trials"] = trials;
  r.body["metric_failures"] = failures;
  r.ok = failures == 0;
  return r;
}

Report run_selftest(std::uint64_t seed) {
  Report r;
  r.table = "criteria";
  Json rows = Json::array();
  for (int id = 1; id <= selftest::kCriterionCount; ++id) {
    const auto c = selftest::run_criterion(id, seed);
    std::fprintf(stderr, "%s\n", selftest::format_line(c).c_str());
    rows.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"max_defect", c.max_defect}, {"detail", c.detail}});
    r.ok = r.ok && c.pass;
  }
  r.body["criteria"] = std::move(rows);
  return r;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return quoted + "\"";
  }
  return v.dump();
}

std::string render(const Json& header, const Report& r, const std::string& format) {
  if (format == "json") {
    Json out;
    out["header"] = header;
    for (const auto& [key, value] : r.body.items()) out[key] = value;
    out["ok"] = r.ok;
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& [key, value] : header.items()) os << "# " << key << ": " << csv_cell(value) << "\n";
  for (const auto& [key, value] : r.body.items()) {
    if (key != r.table) os << "# " << key << ": " << csv_cell(value) << "\n";
  }
  os << "# ok: " << (r.ok ? "true" : "false") << "\n";
  const Json& rows = r.body.at(r.table);
  if (!rows.empty()) {
    bool first = true;
    for (const auto& [key, value] : rows.front().items()) {
      os << (first ? "" : ",") << key;
      first = false;
    }
    os << "\n";
    for (const auto& row : rows) {
      first = true;
      for (const auto& [key, value] : row.items()) {
        os << (first ? "" : ",") << csv_cell(value);
        first = false;
      }
      os << "\n";
    }
  }
  return os.str();
}

std::uint64_t seed_from_env() {
  const char* env = std::getenv("PRODSYS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("PRODSYS_SEED is not an unsigned integer: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product-system experiments on the time lattice"};
  app.require_subcommand(1);
  std::string format = "json";
  std::string out_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "Write the report here instead of standard output");
  };

  Json params = Json::object();
  std::function<Report(gen::Rng&, std::uint64_t)> action;

  double c_norm2 = 1.0, t = 1.0;
  int n_max = 8;
  auto* euler = app.add_subcommand("euler", "Euler product defect e^{t|c|^2} - (1 + 2^-n t|c|^2)^{2^n}");
  euler->add_option("--c-norm2", c_norm2, "|c|^2");
  euler->add_option("--t", t, "Horizon");
  euler->add_option("--n-max", n_max, "Largest refinement level")->check(CLI::Range(0, kMaxRefinement));
  add_common(euler);
  euler->callback([&] {
    params = {{"c_norm2", c_norm2}, {"t", t}, {"n_max", n_max}};
    action = [&](gen::Rng&, std::uint64_t) { return run_euler(c_norm2, t, n_max); };
  });

  int g = 3, depth = 6;
  auto* roots = app.add_subcommand("roots", "Root space dimension against the index of the full system");
  roots->add_option("--g", g, "Slot dimension")->check(CLI::Range(1, kMaxSlot));
  roots->add_option("--depth", depth, "Levels used by the solver")->check(CLI::Range(1, kMaxLevel));
  add_common(roots);
  roots->callback([&] {
    params = {{"g", g}, {"depth", depth}};
    action = [&](gen::Rng& rng, std::uint64_t) { return run_roots(g, depth, rng); };
  });

  int units = 5;
  auto* index = app.add_subcommand("index", "Index of a random unit family");
  index->add_option("--g", g, "Slot dimension")->check(CLI::Range(1, kMaxSlot));
  index->add_option("--units", units, "Number of units")->check(CLI::Range(1, kMaxCells));
  add_common(index);
  index->callback([&] {
    params = {{"g", g}, {"units", units}};
    action = [&](gen::Rng& rng, std::uint64_t) { return run_index(g, units, rng); };
  });

  int g1 = 2, g2 = 2, trials = 100;
  auto* amalgam_cmd = app.add_subcommand("amalgam", "Amalgamation invariants on random contractions");
  amalgam_cmd->add_option("--g1", g1, "First slot dimension")->check(CLI::Range(1, kMaxSlot));
  amalgam_cmd->add_option("--g2", g2, "Second slot dimension")->check(CLI::Range(1, kMaxSlot));
  amalgam_cmd->add_option("--trials", trials, "Random contractions")->check(CLI::Range(0, 10000));
  add_common(amalgam_cmd);
  amalgam_cmd->callback([&] {
    params = {{"g1", g1}, {"g2", g2}, {"trials", trials}};
    action = [&](gen::Rng& rng, std::uint64_t) { return run_amalgam(g1, g2, trials, rng); };
  });

  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster of the unit subsystem C u");
  cluster_cmd->add_option("--g", g, "Slot dimension")->check(CLI::Range(1, kMaxSlot));
  cluster_cmd->add_option("--depth", depth, "Levels")->check(CLI::Range(1, kMaxLevel));
  add_common(cluster_cmd);
  cluster_cmd->callback([&] {
    params = {{"g", g}, {"depth", depth}};
    action = [&](gen::Rng& rng, std::uint64_t) { return run_cluster(g, depth, rng); };
  });

  int cells = 2, rank = 1;
  std::string state = "tracial";
  auto* derivative = app.add_subcommand("derivative", "Derivative pushforward against the cluster on n cells");
  derivative->add_option("--g", g, "Slot dimension")->check(CLI::Range(1, kMaxSlot));
  derivative->add_option("--cells", cells, "Number of cells")->check(CLI::Range(1, kMaxCells));
  derivative->add_option("--rank", rank, "Rank of the slot subspace span{e_0..e_{rank-1}}")->check(CLI::Range(1, kMaxSlot));
  derivative->add_option("--state", state, "Faithful state")->check(CLI::IsMember({"tracial", "geometric", "random"}));
  add_common(derivative);
  derivative->callback([&] {
    params = {{"g", g}, {"cells", cells}, {"rank", rank}, {"state", state}};
    action = [&](gen::Rng& rng, std::uint64_t) { return run_derivative(g, cells, rank, state, rng); };
  });

  std::string a_text, b_text;
  int metric_trials = 0;
  auto* hausdorff = app.add_subcommand("hausdorff", "Exact Hausdorff distance of two closed sets");
  hausdorff->add_option("--a", a_text, "First set, e.g. \"0/1..0/1; 1/4..1/2\"");
  hausdorff->add_option("--b", b_text, "Second set");
  hausdorff->add_option("--trials", metric_trials, "Random metric-axiom trials")->check(CLI::Range(0, 100000));
  add_common(hausdorff);
  hausdorff->callback([&] {
    params = {{"a", a_text}, {"b", b_text}, {"trials", metric_trials}};
    action = [&](gen::Rng& rng, std::uint64_t) { return run_hausdorff(a_text, b_text, metric_trials, rng); };
  });

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  add_common(self);
  self->callback([&] {
    params = Json::object();
    action = [](gen::Rng&, std::uint64_t seed) { return run_selftest(seed); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::uint64_t seed = seed_from_env();
    gen::Rng rng(seed);
    const Report report = action(rng, seed);
    Json header;
    header["tool"] = "prodsys";
    header["subcommand"] = app.get_subcommands().front()->get_name();
    header["seed"] = seed;
    header["config"] = params;
    const std::string text = render(header, report, format);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw UsageError("cannot open " + out_path);
      out << text;
    }
    return report.ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
