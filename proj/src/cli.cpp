#include "erw/cli.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "erw/identities.hpp"
#include "erw/moments.hpp"
#include "erw/montecarlo.hpp"

namespace erw {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    std::string item = s.substr(start, comma - start);
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list: '" + s + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(std::stoi(item));
  return out;
}

double default_tol(const std::string& kind, int d) {
  if (kind == "general" && d >= 5) return 1e-6;
  return 1e-7;
}

struct IdentityCase {
  std::string kind;
  double a = 1.0;
  double b = 1.0;
  int d = 2;
  double tol = 1e-7;
};

IdentityReport eval_case(const IdentityCase& c) {
  if (c.kind == "t1") return eval_t1(c.a, c.tol);
  if (c.kind == "t2") return eval_t2(c.a, c.tol);
  if (c.kind == "t3") return eval_t3(c.a, c.tol);
  if (c.kind == "t4") return eval_t4(c.a, c.tol);
  if (c.kind == "general") return eval_general(c.a, c.d, c.tol);
  if (c.kind == "stops") return eval_stops(c.a, c.b, c.tol);
  throw std::invalid_argument("unknown identity kind: " + c.kind);
}

long total_terms(const IdentityReport& r) {
  return std::accumulate(r.terms_used.begin(), r.terms_used.end(), 0L);
}

void report_csv_header(std::ostream& out) {
  out << "kind,a,b,d,lhs,rhs,residual,tail_bound,terms,pass\n";
}

// b is populated for stops rows, d for general rows; the other stays blank.
void report_csv_row(std::ostream& out, const IdentityReport& r) {
  out << r.kind << ',' << fmt(r.a) << ',';
  if (r.kind == "stops") out << fmt(r.b);
  out << ',';
  if (r.kind == "general") out << r.d;
  out << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(r.residual)
      << ',' << fmt(r.tail_allowance) << ',' << total_terms(r) << ','
      << (r.pass ? "true" : "false") << '\n';
}

nlohmann::json report_json(const IdentityReport& r) {
  nlohmann::json j{{"kind", r.kind},
                   {"a", r.a},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"residual", r.residual},
                   {"tail_bound", r.tail_allowance},
                   {"series_tail_bounds", r.series_tail_bounds},
                   {"terms_used", r.terms_used},
                   {"tol", r.tol},
                   {"pass", r.pass}};
  if (r.kind == "stops") j["b"] = r.b;
  if (r.kind == "general") j["d"] = r.d;
  return j;
}

int emit_reports(const std::vector<IdentityReport>& reports,
                 const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    out << arr.dump(2) << '\n';
  } else {
    report_csv_header(out);
    for (const auto& r : reports) report_csv_row(out, r);
  }
  for (const auto& r : reports)
    if (!r.pass) return 1;
  return 0;
}

struct IdentityOpts {
  std::string kind;
  double a = 1.0;
  double b = 1.0;
  int d = 2;
  double tol = 0.0; // 0 = kind-dependent default
  std::string format = "csv";
};

int do_identity(const IdentityOpts& o, std::ostream& out) {
  IdentityCase c{o.kind, o.a, o.b, o.d,
                 o.tol > 0.0 ? o.tol : default_tol(o.kind, o.d)};
  return emit_reports({eval_case(c)}, o.format, out);
}

struct SweepOpts {
  std::string kind;
  std::string a_grid = "1";
  std::string d_grid = "2";
  std::string b_grid = "1";
  double tol = 0.0;
  std::string format = "csv";
};

int do_sweep(const SweepOpts& o, std::ostream& out, std::ostream& err) {
  std::vector<IdentityCase> cases;
  for (double a : parse_double_list(o.a_grid)) {
    if (o.kind == "general") {
      for (int d : parse_int_list(o.d_grid))
        cases.push_back({o.kind, a, 1.0, d,
                         o.tol > 0.0 ? o.tol : default_tol(o.kind, d)});
    } else if (o.kind == "stops") {
      for (double b : parse_double_list(o.b_grid))
        cases.push_back({o.kind, a, b, 0,
                         o.tol > 0.0 ? o.tol : default_tol(o.kind, 0)});
    } else {
      cases.push_back({o.kind, a, 1.0, 0,
                       o.tol > 0.0 ? o.tol : default_tol(o.kind, 0)});
    }
  }

  // Cases are independent; evaluate in parallel, emit in input order.
  std::vector<IdentityReport> reports(cases.size());
  std::vector<std::string> errors(cases.size());
#ifdef ERW_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < static_cast<long>(cases.size()); ++i) {
    try {
      reports[static_cast<std::size_t>(i)] =
          eval_case(cases[static_cast<std::size_t>(i)]);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!errors[i].empty()) {
      err << "error: case " << i << " (" << cases[i].kind
          << ", a=" << fmt(cases[i].a) << "): " << errors[i] << '\n';
      return 1;
    }
  }
  return emit_reports(reports, o.format, out);
}

struct MomentsOpts {
  std::string p, q;
  std::string r = "0";
  std::string s = "1/2";
  int d = 2;
  long n_max = 10;
  std::string mode = "exact";
  std::string format = "csv";
};

ErwParams build_params(const std::string& p, const std::string& q,
                       const std::string& r, const std::string& s) {
  Numeric rn = parse_numeric(r);
  if (rn == Numeric(0))
    return ErwParams::standard(parse_numeric(p), parse_numeric(q));
  return ErwParams::stops(parse_numeric(p), parse_numeric(q), rn,
                          parse_numeric(s));
}

int do_moments(const MomentsOpts& o, std::ostream& out, std::ostream& err) {
  ErwParams params = build_params(o.p, o.q, o.r, o.s);
  NumMode mode = (o.mode == "exact") ? NumMode::exact : NumMode::floating;
  MomentTable table = params.mode == WalkMode::stops
                          ? stops_moment_recursion(params, o.d, o.n_max, mode)
                          : moment_recursion(params, o.d, o.n_max, mode);
  if (!table.note.empty()) err << "warning: " << table.note << '\n';

  if (o.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (long n = 1; n <= table.n_max; ++n) {
      nlohmann::json vals = nlohmann::json::array();
      for (int k = 1; k <= table.d; ++k) {
        const Numeric& v = table.at(n, k);
        if (table.exact)
          vals.push_back(v.str());
        else
          vals.push_back(v.as_double());
      }
      rows.push_back({{"n", n}, {"values", vals}});
    }
    nlohmann::json j{{"p", o.p},       {"q", o.q},
                     {"r", o.r},       {"d", table.d},
                     {"n_max", table.n_max}, {"exact", table.exact},
                     {"rows", rows}};
    if (params.mode == WalkMode::stops) j["s"] = o.s;
    if (!table.note.empty()) j["note"] = table.note;
    out << j.dump(2) << '\n';
  } else {
    out << "n";
    for (int k = 1; k <= table.d; ++k) out << ",E[S^" << k << "]";
    out << '\n';
    for (long n = 1; n <= table.n_max; ++n) {
      out << n;
      for (int k = 1; k <= table.d; ++k) out << ',' << table.at(n, k).str();
      out << '\n';
    }
  }
  return 0;
}

struct LimitOpts {
  std::string p, q;
  int d = 2;
  std::string method = "closed";
  long n_max = 100000;
  std::string format = "csv";
};

int do_limit(const LimitOpts& o, std::ostream& out) {
  ErwParams params = ErwParams::standard(parse_numeric(o.p), parse_numeric(o.q));
  double value = (o.method == "numeric")
                     ? limit_moment_numeric(params, o.d, o.n_max)
                     : limit_moment(params, o.d);
  if (o.format == "json") {
    out << nlohmann::json{{"d", o.d}, {"method", o.method}, {"value", value}}
               .dump(2)
        << '\n';
  } else {
    out << "d,method,value\n" << o.d << ',' << o.method << ',' << fmt(value)
        << '\n';
  }
  return 0;
}

struct SimulateOpts {
  std::string p, q;
  std::string r = "0";
  std::string s = "1/2";
  long n_steps = 1000;
  long n_walks = 10000;
  std::uint64_t seed = 0;
  std::string orders = "1,2,3,4";
  bool serial = false;
  std::string format = "csv";
};

int do_simulate(const SimulateOpts& o, std::ostream& out) {
  SimConfig cfg;
  cfg.params = build_params(o.p, o.q, o.r, o.s);
  cfg.n_steps = o.n_steps;
  cfg.n_walks = o.n_walks;
  cfg.seed = o.seed;
  cfg.moment_orders = parse_int_list(o.orders);
  SimResult res = o.serial ? simulate_reference(cfg) : simulate(cfg);

  if (o.format == "json") {
    nlohmann::json moments = nlohmann::json::array();
    for (const auto& m : res.moments)
      moments.push_back({{"d", m.d},
                         {"mean_S", m.mean_S},
                         {"stderr_S", m.stderr_S},
                         {"mean_L", m.mean_L},
                         {"stderr_L", m.stderr_L}});
    nlohmann::json j{{"p", o.p},
                     {"q", o.q},
                     {"r", o.r},
                     {"n_steps", o.n_steps},
                     {"n_walks", o.n_walks},
                     {"seed", o.seed},
                     {"moments", moments}};
    if (cfg.params.mode == WalkMode::stops) j["s"] = o.s;
    out << j.dump(2) << '\n';
  } else {
    out << "d,mean_S,stderr_S,mean_L,stderr_L\n";
    for (const auto& m : res.moments)
      out << m.d << ',' << fmt(m.mean_S) << ',' << fmt(m.stderr_S) << ','
          << fmt(m.mean_L) << ',' << fmt(m.stderr_L) << '\n';
  }
  return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"elephant random walk: exact moments, hypergeometric "
               "identities, Monte Carlo"};
  app.require_subcommand(1);
  const std::vector<std::string> kinds{"t1", "t2", "t3", "t4", "general",
                                       "stops"};

  IdentityOpts id;
  auto* cid = app.add_subcommand("identity",
                                 "check one identity instance");
  cid->add_option("--kind", id.kind, "t1|t2|t3|t4|general|stops")
      ->required()
      ->check(CLI::IsMember(kinds));
  cid->add_option("--a", id.a, "drift coupling a (> 1/2)")->required();
  cid->add_option("--b", id.b, "stops parameter b (stops kind)");
  cid->add_option("--d", id.d, "moment order (general kind)");
  cid->add_option("--tol", id.tol, "residual tolerance (default 1e-7; 1e-6 "
                                   "for general with d >= 5)");
  cid->add_option("--format", id.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  SweepOpts sw;
  auto* csw = app.add_subcommand("sweep",
                                 "check one identity kind over a grid");
  csw->add_option("--kind", sw.kind, "t1|t2|t3|t4|general|stops")
      ->required()
      ->check(CLI::IsMember(kinds));
  csw->add_option("--a-grid", sw.a_grid, "comma list of a values");
  csw->add_option("--d-grid", sw.d_grid, "comma list of d values (general)");
  csw->add_option("--b-grid", sw.b_grid, "comma list of b values (stops)");
  csw->add_option("--tol", sw.tol, "residual tolerance");
  csw->add_option("--format", sw.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  MomentsOpts mo;
  auto* cmo = app.add_subcommand("moments",
                                 "moment table E[S_n^k] by exact recursion");
  cmo->add_option("--p", mo.p, "memory parameter (rational \"num/den\" for "
                               "exact mode, decimal for float)")
      ->required();
  cmo->add_option("--q", mo.q, "first-step +1 probability; with --r > 0, "
                               "the flip probability")
      ->required();
  cmo->add_option("--r", mo.r, "stop probability (0 = standard walk)");
  cmo->add_option("--s", mo.s, "first-step +1 probability when r > 0");
  cmo->add_option("--d", mo.d, "highest moment order")->check(CLI::PositiveNumber);
  cmo->add_option("--n-max", mo.n_max, "table length")->check(CLI::PositiveNumber);
  cmo->add_option("--mode", mo.mode, "exact|float")
      ->check(CLI::IsMember({"exact", "float"}));
  cmo->add_option("--format", mo.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  LimitOpts li;
  auto* cli = app.add_subcommand("limit", "limiting moment E[L^d]");
  cli->add_option("--p", li.p, "memory parameter")->required();
  cli->add_option("--q", li.q, "first-step +1 probability")->required();
  cli->add_option("--d", li.d, "moment order")->check(CLI::PositiveNumber);
  cli->add_option("--method", li.method, "closed|numeric")
      ->check(CLI::IsMember({"closed", "numeric"}));
  cli->add_option("--n-max", li.n_max, "recursion depth for numeric method")
      ->check(CLI::PositiveNumber);
  cli->add_option("--format", li.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  SimulateOpts si;
  auto* csi = app.add_subcommand("simulate", "seeded Monte Carlo runs");
  csi->add_option("--p", si.p, "memory parameter")->required();
  csi->add_option("--q", si.q, "first-step +1 probability; with --r > 0, "
                               "the flip probability")
      ->required();
  csi->add_option("--r", si.r, "stop probability (0 = standard walk)");
  csi->add_option("--s", si.s, "first-step +1 probability when r > 0");
  csi->add_option("--n-steps", si.n_steps, "walk length")
      ->check(CLI::PositiveNumber);
  csi->add_option("--n-walks", si.n_walks, "number of walks")
      ->check(CLI::PositiveNumber);
  csi->add_option("--seed", si.seed, "master seed");
  csi->add_option("--orders", si.orders, "comma list of moment orders");
  csi->add_flag("--serial", si.serial, "use the serial reference path");
  csi->add_option("--format", si.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (cid->parsed()) return do_identity(id, out);
    if (csw->parsed()) return do_sweep(sw, out, err);
    if (cmo->parsed()) return do_moments(mo, out, err);
    if (cli->parsed()) return do_limit(li, out);
    if (csi->parsed()) return do_simulate(si, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace erw
