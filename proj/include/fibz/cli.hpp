#pragma once

#include <algorithm>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibz/cache_io.hpp"
#include "fibz/dynamics.hpp"
#include "fibz/error.hpp"
#include "fibz/nat.hpp"
#include "fibz/rank.hpp"
#include "fibz/report_io.hpp"
#include "fibz/verify.hpp"

namespace fibz::cli {

enum class Format { Text, Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
      return kExitUsage;
    case ErrorKind::BackendMismatch:
    case ErrorKind::InternalBoundViolation:
      return kExitCounterexample;
    case ErrorKind::ResourceExceeded:
    case ErrorKind::CapExceeded:
    case ErrorKind::NotFound:
      return kExitResource;
  }
  return kExitUsage;
}

namespace detail {

inline std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

inline std::string chain_text(const std::vector<Nat>& v, char sep) {
  std::string out;
  for (const Nat& x : v) {
    if (!out.empty()) out += sep;
    out += x.str();
  }
  return out;
}

inline Json chain_json(const std::vector<Nat>& v) {
  Json a = Json::array();
  for (const Nat& x : v) a.push_back(x.str());
  return a;
}

struct Options {
  Format format = Format::Text;
  std::string cache_path;
  bool trust_cache = false;
  unsigned jobs = 1;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  ZCache& cache() { return cache_; }

  int z_query(const Nat& n, Backend backend) {
    const ZValue v = z(n, backend, cache_);
    switch (o_.format) {
      case Format::Text:
        out_ << "z(" << n << ") = " << v.z << '\n';
        break;
      case Format::Json:
        out_ << Json{{"kind", "z"}, {"n", n.str()}, {"z", v.z.str()},
                     {"backend", std::string(to_string(backend))}}.dump()
             << '\n';
        break;
      case Format::Csv:
        out_ << "n,z,backend\n" << n << ',' << v.z << ',' << to_string(backend) << '\n';
        break;
    }
    return kExitOk;
  }

  int traj(const Nat& n, std::size_t cap) {
    IterationOptions opts;
    opts.cap = cap;
    const Trajectory t = trajectory(n, cache_, opts);
    switch (o_.format) {
      case Format::Text:
        out_ << "traj(" << n << ") = " << chain_text(t.iterates, ' ') << '\n'
             << "order: def2 = " << t.order_def2 << ", table2 = " << t.order_table2
             << "; terminal " << t.terminal << '\n';
        break;
      case Format::Json:
        out_ << Json{{"kind", "trajectory"},
                     {"n", n.str()},
                     {"chain", chain_json(t.iterates)},
                     {"terminal", t.terminal.str()},
                     {"order_def2", t.order_def2},
                     {"order_table2", t.order_table2}}
                    .dump()
             << '\n';
        break;
      case Format::Csv:
        out_ << "n,chain,terminal,order_def2,order_table2\n"
             << n << ',' << chain_text(t.iterates, ' ') << ',' << t.terminal << ','
             << t.order_def2 << ',' << t.order_table2 << '\n';
        break;
    }
    return kExitOk;
  }

  int order(const Nat& n, OrderConvention conv) {
    const Trajectory t = trajectory(n, cache_);
    const unsigned k = conv == OrderConvention::Def2 ? t.order_def2 : t.order_table2;
    const char* name = conv == OrderConvention::Def2 ? "def2" : "table2";
    switch (o_.format) {
      case Format::Text:
        out_ << "order(" << n << ") = " << k << " (terminal " << t.terminal << ")\n";
        break;
      case Format::Json:
        out_ << Json{{"kind", "order"}, {"n", n.str()}, {"convention", name},
                     {"order", k}, {"terminal", t.terminal.str()}}.dump()
             << '\n';
        break;
      case Format::Csv:
        out_ << "n,convention,order,terminal\n"
             << n << ',' << name << ',' << k << ',' << t.terminal << '\n';
        break;
    }
    return kExitOk;
  }

  int sweep_range(std::uint64_t from, std::uint64_t to) {
    const auto records = sweep(from, to, cache_, {}, o_.jobs);
    if (o_.format == Format::Csv) out_ << "n,z,order_table2,terminal\n";
    for (const auto& r : records) {
      switch (o_.format) {
        case Format::Text:
          out_ << "n=" << r.n << " z=" << r.z << " order=" << r.order_table2
               << " terminal=" << r.terminal << '\n';
          break;
        case Format::Json:
          out_ << Json{{"kind", "sweep"}, {"n", r.n.str()}, {"z", r.z.str()},
                       {"order_table2", r.order_table2},
                       {"terminal", r.terminal.str()}}.dump()
               << '\n';
          break;
        case Format::Csv:
          out_ << r.n << ',' << r.z << ',' << r.order_table2 << ',' << r.terminal << '\n';
          break;
      }
    }
    return kExitOk;
  }

  int fixed_points(std::uint64_t limit) {
    std::vector<char> fixed(limit, 0);
    parallel_for(limit, o_.jobs, [&](std::size_t i) {
      const Nat n = i + 1;
      fixed[i] = z_fast(n, cache_).z == n;
    });
    if (o_.format == Format::Csv) out_ << "n,form\n";
    for (std::uint64_t i = 0; i < limit; ++i) {
      if (!fixed[i]) continue;
      const Nat n = i + 1;
      const std::string form = to_string(classify_fixed_point_form(n));
      switch (o_.format) {
        case Format::Text:
          out_ << n << ' ' << form << '\n';
          break;
        case Format::Json:
          out_ << Json{{"kind", "fixed_point"}, {"n", n.str()}, {"form", form}}.dump()
               << '\n';
          break;
        case Format::Csv:
          out_ << n << ',' << form << '\n';
          break;
      }
    }
    return kExitOk;
  }

  int search(unsigned k, std::uint64_t limit) {
    const auto found = first_n_by_order(k, limit, cache_, {}, o_.jobs);
    if (!found[k]) {
      fail(ErrorKind::NotFound, "no n <= " + std::to_string(limit) +
                                    " with fixed point order " + std::to_string(k));
    }
    const Nat& n = *found[k];
    const Nat fp = terminal_fixed_point(n, cache_);
    switch (o_.format) {
      case Format::Text:
        out_ << "search(k=" << k << ") = " << n << " (terminal " << fp << ")\n";
        break;
      case Format::Json:
        out_ << Json{{"kind", "search"}, {"k", k}, {"n", n.str()},
                     {"terminal", fp.str()}}.dump()
             << '\n';
        break;
      case Format::Csv:
        out_ << "k,n,terminal\n" << k << ',' << n << ',' << fp << '\n';
        break;
    }
    return kExitOk;
  }

  int table1() {
    const auto report = reproduce_table1(context());
    if (o_.format == Format::Text) {
      for (const auto& row : golden::orbit_table()) {
        const Trajectory t = trajectory(row.n, cache_);
        out_ << row.n << ':';
        for (const Nat& x : t.iterates) {
          out_ << ' ' << x << (x == t.terminal ? "*" : "");
        }
        out_ << '\n';
      }
    }
    return emit({report});
  }

  int table2(unsigned kmax, std::uint64_t limit) {
    const auto report = reproduce_table2(kmax, limit, context());
    if (o_.format == Format::Text) {
      const auto found = first_n_by_order(kmax, limit, cache_, {}, o_.jobs);
      for (unsigned k = 1; k <= kmax; ++k) {
        out_ << "k=" << k << " n=" << *found[k]
             << " fixed_point=" << terminal_fixed_point(*found[k], cache_) << '\n';
      }
    }
    return emit({report});
  }

  int verify(const std::string& suite, const std::vector<std::string>& raw_params) {
    std::map<std::string, SuiteParams> scoped;
    SuiteParams plain;
    for (const auto& p : raw_params) {
      const auto eq = p.find('=');
      require(eq != std::string::npos && eq > 0, "--param expects name=value, got '" + p + "'");
      const std::string name = p.substr(0, eq), value = p.substr(eq + 1);
      const auto dot = name.find('.');
      if (dot == std::string::npos) {
        require(suite != "all", "verify all: use --param suite.name=value");
        plain[name] = value;
      } else {
        scoped[name.substr(0, dot)][name.substr(dot + 1)] = value;
      }
    }

    std::vector<const SuiteInfo*> selected;
    if (suite == "all") {
      for (const auto& s : suites()) selected.push_back(&s);
    } else {
      const SuiteInfo* s = find_suite(suite);
      require(s != nullptr, "unknown suite '" + suite + "'");
      selected.push_back(s);
    }
    for (const auto& [name, _] : scoped) {
      const bool known = std::any_of(selected.begin(), selected.end(),
                                     [&](const SuiteInfo* s) { return s->name == name; });
      require(known, "--param names suite '" + name + "' which is not being run");
    }

    std::vector<VerificationReport> reports;
    for (const SuiteInfo* s : selected) {
      SuiteParams params = scoped[s->name];
      for (const auto& [k, v] : plain) params[k] = v;
      reports.push_back(s->run(params, context()));
    }
    if (suite == "all" && o_.format == Format::Text) write_coverage(out_, reports);
    return emit(reports);
  }

 private:
  VerifyContext context() { return VerifyContext{cache_, o_.jobs}; }

  int emit(const std::vector<VerificationReport>& reports) {
    bool ok = true;
    if (o_.format == Format::Csv) out_ << kReportCsvHeader << '\n';
    for (const auto& r : reports) {
      ok = ok && r.passed;
      switch (o_.format) {
        case Format::Text:
          write_text(out_, r);
          break;
        case Format::Json:
          out_ << to_json(r).dump() << '\n';
          break;
        case Format::Csv:
          write_csv_row(out_, r);
          break;
      }
    }
    return ok ? kExitOk : kExitCounterexample;
  }

  const Options& o_;
  std::ostream& out_;
  ZCache cache_;
};

inline void report_error(std::ostream& err, std::string_view kind, const std::string& what) {
  err << "error kind=" << kind << " reason=" << one_line(what) << '\n';
}

}  // namespace detail

/// Runs one command line (program name excluded) and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fibonacci order of appearance: queries, orbits and verification suites",
               "fibz"};
  app.require_subcommand(1);
  app.fallthrough();

  detail::Options o;
  const std::map<std::string, Format> formats = {
      {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};
  std::string format_name = "text";
  app.add_option("--format", format_name, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--cache", o.cache_path, "prime-power cache file to load and persist");
  app.add_flag("--trust-cache", o.trust_cache, "skip validation of loaded cache entries");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 1024u));

  std::string n_text;
  auto* z_cmd = app.add_subcommand("z", "print z(n)");
  z_cmd->add_option("n", n_text)->required();
  std::string backend_name = "crosscheck";
  const std::map<std::string, Backend> backends = {{"oracle", Backend::Oracle},
                                                   {"fast", Backend::Fast},
                                                   {"crosscheck", Backend::CrossCheck}};
  z_cmd->add_option("--backend", backend_name, "oracle, fast or crosscheck")
      ->check(CLI::IsMember({"oracle", "fast", "crosscheck"}));

  auto* traj_cmd = app.add_subcommand("traj", "print the orbit of n up to its fixed point");
  traj_cmd->add_option("n", n_text)->required();
  std::size_t cap = 200;
  traj_cmd->add_option("--cap", cap, "iteration cap")->check(CLI::PositiveNumber);

  auto* order_cmd = app.add_subcommand("order", "print the fixed point order of n");
  order_cmd->add_option("n", n_text)->required();
  std::string conv_name = "table2";
  order_cmd->add_option("--convention", conv_name, "def2 (fixed points have order 0) or table2")
      ->check(CLI::IsMember({"def2", "table2"}));

  std::uint64_t from = 0, to = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "one record per n in [from, to]");
  sweep_cmd->add_option("--from", from)->required();
  sweep_cmd->add_option("--to", to)->required();

  std::uint64_t limit = 0;
  auto* fp_cmd = app.add_subcommand("fixed-points", "list fixed points up to a limit");
  fp_cmd->add_option("--limit", limit)->required();

  unsigned k = 0;
  std::uint64_t search_limit = 100000;
  auto* search_cmd = app.add_subcommand("search", "smallest n with a given order");
  search_cmd->add_option("--k", k)->required()->check(CLI::Range(1u, 1000u));
  search_cmd->add_option("--limit", search_limit);

  app.add_subcommand("table1", "reproduce the orbit table for n <= 12");
  unsigned kmax = 10;
  std::uint64_t table2_limit = 100000;
  auto* t2_cmd = app.add_subcommand("table2", "reproduce the first-n-by-order table");
  t2_cmd->add_option("--kmax", kmax)->check(CLI::Range(1u, 10u));
  t2_cmd->add_option("--limit", table2_limit);

  std::string suite;
  std::vector<std::string> params;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite, or all");
  verify_cmd->add_option("suite", suite)->required();
  verify_cmd->add_option("--param", params, "name=value (suite.name=value with all)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    detail::report_error(err, "usage", e.what());
    return kExitUsage;
  }

  o.format = formats.at(format_name);
  const Backend backend = backends.at(backend_name);
  const OrderConvention conv =
      conv_name == "def2" ? OrderConvention::Def2 : OrderConvention::Table2;

  try {
    detail::Runner r(o, out);
    if (!o.cache_path.empty() && std::filesystem::exists(o.cache_path)) {
      cache_load(o.cache_path, r.cache(), o.trust_cache);
    }
    int code = kExitOk;
    if (z_cmd->parsed()) {
      code = r.z_query(Nat::parse(n_text), backend);
    } else if (traj_cmd->parsed()) {
      code = r.traj(Nat::parse(n_text), cap);
    } else if (order_cmd->parsed()) {
      code = r.order(Nat::parse(n_text), conv);
    } else if (sweep_cmd->parsed()) {
      code = r.sweep_range(from, to);
    } else if (fp_cmd->parsed()) {
      code = r.fixed_points(limit);
    } else if (search_cmd->parsed()) {
      code = r.search(k, search_limit);
    } else if (app.got_subcommand("table1")) {
      code = r.table1();
    } else if (t2_cmd->parsed()) {
      code = r.table2(kmax, table2_limit);
    } else if (verify_cmd->parsed()) {
      code = r.verify(suite, params);
    }
    if (!o.cache_path.empty()) cache_store(r.cache(), o.cache_path);
    if (code == kExitCounterexample) {
      detail::report_error(err, "counterexample", "one or more checks failed");
    }
    return code;
  } catch (const BackendMismatch& e) {
    detail::report_error(err, to_string(e.kind()),
                         "n=" + e.n().str() + " oracle=" + e.oracle().str() +
                             " fast=" + e.fast().str());
    return kExitCounterexample;
  } catch (const Error& e) {
    detail::report_error(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    detail::report_error(err, "internal", e.what());
    return kExitUsage;
  }
}

}  // namespace fibz::cli
