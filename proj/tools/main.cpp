// Command-line driver: evaluates the marginal densities, thermodynamic
// curves, truncated integrals, divergence probes and the sampler, and runs
// the fast invariant suites. Every command writes one table, as CSV
// (17 significant digits) or as a JSON array with one object per row.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmvol/complex_matrix.hpp"
#include "mmvol/distributions.hpp"
#include "mmvol/errors.hpp"
#include "mmvol/metrics.hpp"
#include "mmvol/quadrature.hpp"
#include "mmvol/rng.hpp"
#include "mmvol/special_functions.hpp"
#include "mmvol/states.hpp"
#include "mmvol/thermo.hpp"

namespace {

using mmvol::AccuracyError;
using mmvol::DomainError;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

// One output table. Cells keep their native type so the JSON writer can
// emit numbers and booleans rather than strings.
struct Table {
  using Cell = std::variant<double, std::uint64_t, long long, bool,
                            std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> cells) { rows.push_back(std::move(cells)); }

  std::string render_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += std::visit(
            [](const auto& v) -> std::string {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) return fmt17(v);
              else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
              else if constexpr (std::is_same_v<T, std::string>) return v;
              else return std::to_string(v);
            },
            row[c]);
      }
      out += '\n';
    }
    return out;
  }

  std::string render_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj;
      for (std::size_t c = 0; c < row.size(); ++c)
        std::visit([&](const auto& v) { obj[columns[c]] = v; }, row[c]);
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

struct OutputOptions {
  std::string format = "csv";
  std::string path;
  std::string config_path;
};

void add_output_options(CLI::App* sub, OutputOptions& out) {
  sub->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", out.path, "Write the table to this file "
                                     "instead of stdout");
  sub->add_option("--config", out.config_path,
                  "Read defaults from a key=value file; command-line flags "
                  "take precedence");
}

// Applies the optional key=value config file by splicing synthesized
// --key=value tokens in right after the subcommand, skipping keys the
// command line already sets. Flags therefore keep precedence and unknown
// config keys surface as ordinary parse errors. args holds the subcommand
// and everything after it, in command-line order.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  if (args.empty() || args[0].empty() || args[0][0] == '-') return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream file(path);
  if (!file) throw DomainError("cannot read config file: " + path);
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  std::vector<std::string> inject;
  std::string line;
  while (std::getline(file, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DomainError("config line has an empty key");
    const std::string flag = "--" + key;
    bool on_command_line = false;
    for (std::size_t i = 1; i < args.size(); ++i)
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) {
        on_command_line = true;
        break;
      }
    if (!on_command_line) inject.push_back(flag + "=" + value);
  }
  args.insert(args.begin() + 1, inject.begin(), inject.end());
  return args;
}

void emit(const Table& table, const OutputOptions& out) {
  const std::string payload =
      out.format == "json" ? table.render_json() : table.render_csv();
  if (out.path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream file(out.path, std::ios::binary | std::ios::trunc);
  if (!file) throw DomainError("cannot open output file: " + out.path);
  file.write(payload.data(),
             static_cast<std::streamsize>(payload.size()));
  if (!file) throw DomainError("failed while writing: " + out.path);
}

// Numerical failure tied to one output row; mapped to exit code 3.
struct RowFailure {
  std::size_t row;
  std::string detail;
};

void require_finite_row(const std::vector<Table::Cell>& cells,
                        std::size_t row) {
  for (const auto& cell : cells)
    if (const double* v = std::get_if<double>(&cell))
      if (!std::isfinite(*v))
        throw RowFailure{row, "result is not finite"};
}

mmvol::MetricFamily parse_metric(const std::string& name) {
  return name == "minimal" ? mmvol::MetricFamily::minimal
                           : mmvol::MetricFamily::maximal;
}

// ---------------------------------------------------------------------------
// marginal

struct MarginalArgs {
  std::string which = "a";
  int steps = 101;
  std::vector<double> at;
  OutputOptions out;
};

void run_marginal(const MarginalArgs& args) {
  Table t;
  const bool have_at = !args.at.empty();

  auto expect_at = [&](std::size_t n, const char* shape) {
    if (args.at.size() != n)
      throw DomainError(std::string("--at for --which ") + args.which +
                        " needs " + shape);
  };

  if (args.which == "a" || args.which == "b") {
    t.columns = {args.which, "density"};
    const auto f = args.which == "a" ? &mmvol::pdf_a : &mmvol::pdf_b;
    if (have_at) {
      expect_at(1, "one coordinate");
      std::vector<Table::Cell> row{args.at[0], f(args.at[0])};
      require_finite_row(row, 0);
      t.add_row(std::move(row));
    } else {
      if (args.steps < 2) throw DomainError("--steps must be at least 2");
      for (int i = 0; i < args.steps; ++i) {
        // The a-marginal vanishes at both endpoints, so a closed grid is
        // fine; the b-marginal is singular at 0 and gets cell midpoints.
        const double x = args.which == "a"
                             ? static_cast<double>(i) / (args.steps - 1)
                             : (i + 0.5) / args.steps;
        t.add_row({x, f(x)});
      }
    }
  } else if (args.which == "bivariate") {
    t.columns = {"a", "b", "density"};
    if (have_at) {
      expect_at(2, "two coordinates a,b");
      std::vector<Table::Cell> row{args.at[0], args.at[1],
                                   mmvol::pdf_bivariate(args.at[0],
                                                        args.at[1])};
      require_finite_row(row, 0);
      t.add_row(std::move(row));
    } else {
      if (args.steps < 2) throw DomainError("--steps must be at least 2");
      const int s = args.steps;
      for (int i = 0; i < s; ++i)
        for (int j = 0; i + j + 2 <= s; ++j) {
          const double a = (i + 0.5) / s;
          const double b = (j + 0.5) / s;
          t.add_row({a, b, mmvol::pdf_bivariate(a, b)});
        }
    }
  } else {  // six
    t.columns = {"a", "b", "theta1", "theta2", "density"};
    if (!have_at)
      throw DomainError("--which six has no default grid; pass "
                        "--at a,b,theta1,theta2");
    expect_at(4, "four coordinates a,b,theta1,theta2");
    std::vector<Table::Cell> row{
        args.at[0], args.at[1], args.at[2], args.at[3],
        mmvol::pdf_six(args.at[0], args.at[1], args.at[2], args.at[3])};
    require_finite_row(row, 0);
    t.add_row(std::move(row));
  }
  emit(t, args.out);
}

// ---------------------------------------------------------------------------
// thermo

struct ThermoArgs {
  std::string observable = "lambda8";
  double beta_min = 0.0;
  double beta_max = 5.0;
  int beta_steps = 101;
  OutputOptions out;
};

void run_thermo(const ThermoArgs& args) {
  if (args.beta_steps < 1) throw DomainError("--beta-steps must be positive");
  if (args.beta_steps > 1 && !(args.beta_max > args.beta_min))
    throw DomainError("--beta-max must exceed --beta-min");

  const bool companion =
      args.observable == "lambda3" || args.observable == "lambda1";

  Table t;
  t.columns = companion
                  ? std::vector<std::string>{"beta", "q", "ev", "langevin_neg"}
                  : std::vector<std::string>{"beta", "q", "ev"};

  for (int i = 0; i < args.beta_steps; ++i) {
    const double beta =
        args.beta_steps == 1
            ? args.beta_min
            : args.beta_min + (args.beta_max - args.beta_min) * i /
                                  (args.beta_steps - 1);
    double q = 0.0, ev = 0.0;
    try {
      if (args.observable == "lambda8") {
        q = mmvol::q_lambda8(beta);
        ev = mmvol::ev_lambda8(beta);
      } else if (args.observable == "lambda3") {
        q = mmvol::q_lambda3(beta);
        ev = mmvol::ev_lambda3(beta);
      } else if (args.observable == "lambda1") {
        q = mmvol::q_lambda1_strong(beta);
        ev = mmvol::ev_lambda1(beta);
      } else {  // four4
        q = mmvol::q_strong4(beta);
        ev = mmvol::ev_strong4(beta);
      }
    } catch (const mmvol::Error& e) {
      throw RowFailure{static_cast<std::size_t>(i),
                       std::string("beta = ") + fmt17(beta) + ": " + e.what()};
    }
    std::vector<Table::Cell> row{beta, q, ev};
    if (companion) row.push_back(mmvol::langevin_neg(beta));
    require_finite_row(row, static_cast<std::size_t>(i));
    t.add_row(std::move(row));
  }
  emit(t, args.out);
}

// ---------------------------------------------------------------------------
// integrate

struct IntegrateArgs {
  std::string metric = "maximal";
  int n = 3;
  double epsilon = 0.1;
  std::vector<double> epsilons;
  std::string mode = "importance";
  double samples = 1e5;
  std::uint64_t seed = 0;
  OutputOptions out;
};

void run_integrate(const IntegrateArgs& args) {
  const std::vector<double> eps_list =
      args.epsilons.empty() ? std::vector<double>{args.epsilon}
                            : args.epsilons;
  const mmvol::VolumeElementKind kind{parse_metric(args.metric),
                                      mmvol::WeightRoute::closed_form};
  const auto mode = args.mode == "plain" ? mmvol::SamplingMode::plain
                                         : mmvol::SamplingMode::importance;
  if (args.n != 3 && args.n != 4) throw DomainError("--n must be 3 or 4");
  if (!(args.samples >= 2.0 && args.samples <= 4e9))
    throw DomainError("--samples must lie in [2, 4e9]");

  Table t;
  t.columns = {"metric", "n",       "epsilon",   "mode", "value",
               "std_error", "n_samples", "seed", "method"};
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    mmvol::IntegralEstimate est;
    try {
      est = mmvol::truncated_full_integral(
          kind, args.n, eps_list[i],
          static_cast<std::uint64_t>(args.samples), args.seed, mode);
    } catch (const AccuracyError& e) {
      throw RowFailure{i, e.what()};
    } catch (const mmvol::IntegrandError& e) {
      throw RowFailure{i, e.what()};
    }
    std::vector<Table::Cell> row{
        std::string(args.metric),  static_cast<long long>(args.n),
        eps_list[i],               std::string(args.mode),
        est.value,                 est.std_error,
        est.n_samples,             est.seed,
        std::string("mc")};
    require_finite_row(row, i);
    t.add_row(std::move(row));
  }
  emit(t, args.out);
}

// ---------------------------------------------------------------------------
// probe

struct ProbeArgs {
  std::string metric = "maximal";
  int n = 3;
  std::string variant = "full";
  std::vector<double> epsilons;
  double samples = 2e5;
  std::uint64_t seed = 0;
  OutputOptions out;
};

void run_probe(const ProbeArgs& args) {
  mmvol::CutoffSchedule schedule = mmvol::CutoffSchedule::standard();
  if (!args.epsilons.empty()) schedule.epsilons = args.epsilons;
  const mmvol::VolumeElementKind kind{parse_metric(args.metric),
                                      mmvol::WeightRoute::closed_form};
  const mmvol::ProbeVariant variant =
      args.variant == "bounded"
          ? mmvol::ProbeVariant::bounded_control
          : (args.variant == "simplex" ? mmvol::ProbeVariant::simplex_factor
                                       : mmvol::ProbeVariant::full);
  if (args.n != 3 && args.n != 4) throw DomainError("--n must be 3 or 4");
  if (!(args.samples >= 2.0 && args.samples <= 4e9))
    throw DomainError("--samples must lie in [2, 4e9]");

  const mmvol::DivergenceReport report = mmvol::divergence_probe(
      kind, args.n, schedule, static_cast<std::uint64_t>(args.samples),
      args.seed, variant);

  Table t;
  t.columns = {"epsilon",         "value",
               "std_error",       "growth_exponent",
               "exponent_std_error", "divergent"};
  for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
    std::vector<Table::Cell> row{
        report.epsilons[i],          report.estimates[i].value,
        report.estimates[i].std_error, report.growth_exponent,
        report.exponent_std_error,   report.divergent};
    require_finite_row(row, i);
    t.add_row(std::move(row));
  }
  emit(t, args.out);
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  double count = 1000;
  std::uint64_t seed = 0;
  OutputOptions out;
};

void run_sample(const SampleArgs& args) {
  if (!(args.count >= 1.0 && args.count <= 1e8))
    throw DomainError("--n must lie in [1, 1e8]");
  const auto pts = mmvol::sample_bivariate(
      static_cast<std::size_t>(args.count), args.seed);
  Table t;
  t.columns = {"a", "b", "c"};
  t.rows.reserve(pts.size());
  for (const auto& p : pts) t.add_row({p.a, p.b, p.c});
  emit(t, args.out);
}

// ---------------------------------------------------------------------------
// check: fast invariant suites, one row per suite.

bool suite_determinant_identities() {
  for (int trial = 0; trial < 400; ++trial) {
    mmvol::SplitRng rng = mmvol::SplitRng::for_sample(90001, trial);
    auto u = [&] { return 0.02 + 0.96 * rng.next_u01(); };
    mmvol::CoordinatePoint3 q3;
    q3.a = 0.05 + 0.5 * rng.next_u01();
    q3.b = (1.0 - q3.a) * (0.05 + 0.9 * rng.next_u01());
    if (1.0 - q3.a - q3.b < 0.02) continue;
    q3.s = u();
    q3.nu = 6.28 * rng.next_u01();
    q3.r = u();
    q3.theta1 = 3.14 * rng.next_u01();
    q3.theta2 = 3.14 * rng.next_u01();
    q3.theta3 = 6.28 * rng.next_u01();
    const double closed = mmvol::det3_closed(q3);
    const double direct =
        mmvol::build_rho3(mmvol::point3_to_bloore(q3)).det().real();
    if (std::abs(closed - direct) > 1e-12 * std::max(1e-30, std::abs(closed)))
      return false;

    mmvol::CoordinatePoint4 q4;
    q4.a = 0.05 + 0.4 * rng.next_u01();
    q4.b = (1.0 - q4.a) * (0.05 + 0.5 * rng.next_u01());
    q4.c = (1.0 - q4.a - q4.b) * (0.05 + 0.5 * rng.next_u01());
    if (1.0 - q4.a - q4.b - q4.c < 0.02) continue;
    q4.s = u();
    q4.nu = 6.28 * rng.next_u01();
    q4.v = u();
    q4.xi1 = 3.14 * rng.next_u01();
    q4.xi2 = 3.14 * rng.next_u01();
    q4.xi3 = 3.14 * rng.next_u01();
    q4.xi4 = 3.14 * rng.next_u01();
    q4.xi5 = 6.28 * rng.next_u01();
    const double closed4 = mmvol::det4_closed(q4);
    const double direct4 = mmvol::build_rho4(q4).det().real();
    if (std::abs(closed4 - direct4) >
        1e-12 * std::max(1e-30, std::abs(closed4)))
      return false;
  }
  return true;
}

bool suite_pair_sum_routes() {
  for (int trial = 0; trial < 200; ++trial) {
    mmvol::SplitRng rng = mmvol::SplitRng::for_sample(90002, trial);
    for (int n : {2, 3, 4}) {
      std::vector<double> p(n);
      double sum = 0.0;
      for (double& x : p) {
        x = 0.05 + rng.next_u01();
        sum += x;
      }
      mmvol::CMatrix m(n);
      for (int i = 0; i < n; ++i) {
        p[i] /= sum;
        m(i, i) = p[i];
      }
      const mmvol::MinorSums ms = mmvol::minor_sums(m);
      const double factored = mmvol::pair_sum_factor(ms);
      const double product = mmvol::pair_sum_product(p);
      if (std::abs(factored - product) > 1e-10 * std::abs(product))
        return false;
      for (const mmvol::MetricFamily fam :
           {mmvol::MetricFamily::minimal, mmvol::MetricFamily::maximal}) {
        const double closed = mmvol::volume_weight_from_minors(ms, fam);
        const double eig = mmvol::volume_weight_from_eigenvalues(p, fam);
        const double expect =
            fam == mmvol::MetricFamily::minimal
                ? std::pow(2.0, 0.5 * n)
                : std::pow(2.0, 0.5 * (n * n - n));
        if (std::abs(closed / eig - expect) > 1e-10 * expect) return false;
      }
    }
  }
  return true;
}

bool suite_density_normalizations() {
  const auto ia = mmvol::nested_quad(
      [](const std::vector<double>& x) { return mmvol::pdf_a(x[0]); },
      {{0.0, 1.0}}, 1e-10);
  const auto ib = mmvol::nested_quad(
      [](const std::vector<double>& x) { return mmvol::pdf_b(x[0]); },
      {{0.0, 1.0}}, 1e-10);
  std::vector<mmvol::BoundsFn> bounds;
  bounds.push_back(
      [](const std::vector<double>&) { return std::make_pair(0.0, 1.0); });
  bounds.push_back([](const std::vector<double>& outer) {
    return std::make_pair(0.0, 1.0 - outer[0]);
  });
  const auto ibi = mmvol::nested_quad(
      [](const std::vector<double>& x) {
        return mmvol::pdf_bivariate(x[0], x[1]);
      },
      bounds, 1e-9);
  return std::abs(ia.value - 1.0) < 1e-8 && std::abs(ib.value - 1.0) < 1e-8 &&
         std::abs(ibi.value - 1.0) < 1e-7;
}

bool suite_moment_table() {
  const mmvol::MomentTable t = mmvol::moments();
  std::vector<mmvol::BoundsFn> bounds;
  bounds.push_back(
      [](const std::vector<double>&) { return std::make_pair(0.0, 1.0); });
  bounds.push_back([](const std::vector<double>& outer) {
    return std::make_pair(0.0, 1.0 - outer[0]);
  });
  auto weighted = [&](auto g) {
    return mmvol::nested_quad(
               [&](const std::vector<double>& x) {
                 return g(x) * mmvol::pdf_bivariate(x[0], x[1]);
               },
               bounds, 1e-9)
        .value;
  };
  return std::abs(weighted([](const std::vector<double>& x) {
           return x[0];
         }) - t.mean_a) < 1e-7 &&
         std::abs(weighted([](const std::vector<double>& x) {
           return x[1];
         }) - t.mean_b) < 1e-7 &&
         std::abs(weighted([](const std::vector<double>& x) {
           return x[0] * x[1];
         }) - t.mean_ab) < 1e-7;
}

bool suite_sampler_moments() {
  const std::size_t n = 200000;
  const auto pts = mmvol::sample_bivariate(n, 90005);
  double sa = 0.0, sb = 0.0;
  for (const auto& p : pts) {
    sa += p.a;
    sb += p.b;
  }
  const mmvol::MomentTable t = mmvol::moments();
  const double se_a =
      std::sqrt((t.mean_a2 - t.mean_a * t.mean_a) / static_cast<double>(n));
  const double se_b =
      std::sqrt((t.mean_b2 - t.mean_b * t.mean_b) / static_cast<double>(n));
  return std::abs(sa / n - t.mean_a) < 4.0 * se_a &&
         std::abs(sb / n - t.mean_b) < 4.0 * se_b;
}

bool suite_thermo_anchors() {
  const double pi = 3.14159265358979323846;
  if (std::abs(mmvol::q_lambda8(0.0) - 1.0) > 1e-10) return false;
  if (std::abs(mmvol::ev_lambda8(0.0) + 2.0 / (7.0 * std::sqrt(3.0))) > 1e-10)
    return false;
  if (std::abs(mmvol::q_lambda3(0.0) - 1.0) > 1e-8) return false;
  if (std::abs(mmvol::q_lambda1_strong(0.0) - pi) > 1e-8) return false;
  if (std::abs(mmvol::q_strong4(0.0) - pi * pi) > 1e-8) return false;
  for (const double beta : {-2.0, 2.0}) {
    const double closed = mmvol::q_lambda8(beta);
    const double quad =
        mmvol::q_lambda8(beta, mmvol::ThermoMethod::quadrature);
    if (std::abs(closed - quad) > 1e-8 * std::abs(quad)) return false;
  }
  const auto sh = mmvol::spin_half_reference(2.0, mmvol::MetricFamily::maximal);
  if (std::abs(sh.q - std::sinh(2.0) / 2.0) > 1e-13) return false;
  return true;
}

bool suite_mc_determinism() {
  const mmvol::VolumeElementKind kind{mmvol::MetricFamily::maximal,
                                      mmvol::WeightRoute::closed_form};
  const char* saved = std::getenv("MT_THREADS");
  const std::string saved_copy = saved ? saved : "";
  setenv("MT_THREADS", "1", 1);
  const auto one = mmvol::truncated_full_integral(kind, 3, 0.2, 100000, 7);
  setenv("MT_THREADS", "3", 1);
  const auto three = mmvol::truncated_full_integral(kind, 3, 0.2, 100000, 7);
  if (saved)
    setenv("MT_THREADS", saved_copy.c_str(), 1);
  else
    unsetenv("MT_THREADS");
  return one.value == three.value && one.std_error == three.std_error;
}

int run_check(const OutputOptions& out) {
  struct Suite {
    const char* name;
    bool (*fn)();
  };
  const std::vector<Suite> suites = {
      {"determinant-identities", &suite_determinant_identities},
      {"pair-sum-routes", &suite_pair_sum_routes},
      {"density-normalizations", &suite_density_normalizations},
      {"moment-table", &suite_moment_table},
      {"sampler-moments", &suite_sampler_moments},
      {"thermo-anchors", &suite_thermo_anchors},
      {"mc-determinism", &suite_mc_determinism},
  };
  Table t;
  t.columns = {"suite", "status"};
  bool all_pass = true;
  for (const Suite& s : suites) {
    bool ok = false;
    try {
      ok = s.fn();
    } catch (const std::exception&) {
      ok = false;
    }
    all_pass = all_pass && ok;
    t.add_row({std::string(s.name), std::string(ok ? "pass" : "fail")});
  }
  emit(t, out);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone-metric volume elements over small density "
               "matrices: marginal densities, truncated integrals, "
               "divergence probes and thermodynamic curves."};
  app.require_subcommand(1);

  MarginalArgs marginal;
  CLI::App* sub_marginal = app.add_subcommand(
      "marginal", "Evaluate a marginal density on a grid or at a point");
  sub_marginal->add_option("--which", marginal.which, "Which marginal")
      ->check(CLI::IsMember({"a", "b", "bivariate", "six"}));
  sub_marginal->add_option("--steps", marginal.steps, "Grid resolution");
  sub_marginal->add_option("--at", marginal.at,
                           "Evaluate at one comma-separated point")
      ->delimiter(',');
  add_output_options(sub_marginal, marginal.out);

  ThermoArgs thermo;
  CLI::App* sub_thermo = app.add_subcommand(
      "thermo", "Partition function and expected value over a beta grid");
  sub_thermo->add_option("--observable", thermo.observable, "Observable")
      ->check(CLI::IsMember({"lambda8", "lambda3", "lambda1", "four4"}));
  sub_thermo->add_option("--beta-min", thermo.beta_min, "Grid start");
  sub_thermo->add_option("--beta-max", thermo.beta_max, "Grid end");
  sub_thermo->add_option("--beta-steps", thermo.beta_steps, "Grid points");
  add_output_options(sub_thermo, thermo.out);

  IntegrateArgs integrate;
  CLI::App* sub_integrate = app.add_subcommand(
      "integrate", "Monte Carlo estimate of the truncated full integral");
  sub_integrate->add_option("--metric", integrate.metric, "Metric family")
      ->check(CLI::IsMember({"minimal", "maximal"}));
  sub_integrate->add_option("--n", integrate.n, "Matrix dimension (3 or 4)");
  sub_integrate->add_option("--epsilon", integrate.epsilon,
                            "Radial boundary cutoff");
  sub_integrate
      ->add_option("--epsilons", integrate.epsilons,
                   "Comma-separated cutoff list; one output row each")
      ->delimiter(',');
  sub_integrate->add_option("--mode", integrate.mode, "Sampling mode")
      ->check(CLI::IsMember({"importance", "plain"}));
  sub_integrate->add_option("--samples", integrate.samples,
                            "Monte Carlo samples (accepts 1e6 notation)");
  sub_integrate->add_option("--seed", integrate.seed, "RNG seed");
  add_output_options(sub_integrate, integrate.out);

  ProbeArgs probe;
  CLI::App* sub_probe = app.add_subcommand(
      "probe", "Growth of the truncated integral along a cutoff schedule");
  sub_probe->add_option("--metric", probe.metric, "Metric family")
      ->check(CLI::IsMember({"minimal", "maximal"}));
  sub_probe->add_option("--n", probe.n, "Matrix dimension (3 or 4)");
  sub_probe->add_option("--variant", probe.variant, "What to integrate")
      ->check(CLI::IsMember({"full", "bounded", "simplex"}));
  sub_probe
      ->add_option("--epsilons", probe.epsilons,
                   "Comma-separated strictly decreasing cutoff schedule")
      ->delimiter(',');
  sub_probe->add_option("--samples", probe.samples,
                        "Monte Carlo samples per cutoff");
  sub_probe->add_option("--seed", probe.seed, "RNG seed");
  add_output_options(sub_probe, probe.out);

  SampleArgs sample;
  CLI::App* sub_sample = app.add_subcommand(
      "sample", "Draw diagonal triples from the bivariate density");
  sub_sample->add_option("--n", sample.count,
                         "Number of draws (accepts 1e6 notation)");
  sub_sample->add_option("--seed", sample.seed, "RNG seed");
  add_output_options(sub_sample, sample.out);

  OutputOptions check_out;
  CLI::App* sub_check = app.add_subcommand(
      "check", "Run the fast invariant suites; exit 0 iff all pass");
  add_output_options(sub_check, check_out);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config_file(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  }

  try {
    if (sub_marginal->parsed()) run_marginal(marginal);
    else if (sub_thermo->parsed()) run_thermo(thermo);
    else if (sub_integrate->parsed()) run_integrate(integrate);
    else if (sub_probe->parsed()) run_probe(probe);
    else if (sub_sample->parsed()) run_sample(sample);
    else if (sub_check->parsed()) return run_check(check_out);
  } catch (const RowFailure& f) {
    std::fprintf(stderr, "numerical failure at row %zu: %s\n", f.row,
                 f.detail.c_str());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const mmvol::Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
