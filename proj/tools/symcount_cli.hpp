#pragma once

// Command-line front end. run() is separate from main() so the tests can
// drive it with captured streams.

#include "symcount/asymptotics.hpp"
#include "symcount/ehrhart.hpp"
#include "symcount/integral_check.hpp"
#include "symcount/results_store.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace symcount::cli {

enum ExitCode : int { ok = 0, domain_failure = 1, inconsistent = 2 };

namespace detail {

using nlohmann::json;

struct Common {
  std::string format = "text";
  std::string out_path;
  std::string store_path;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

inline std::string real_str(const Real& x, int digits = 30) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

inline std::string rational_str(const Rational& r) {
  return denominator(r) == 1 ? numerator(r).str() : numerator(r).str() + "/" + denominator(r).str();
}

inline json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(rational_str(r));
  return a;
}

inline json integers(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

class Session {
 public:
  Session(const Common& common, std::ostream& out) : common_(common), out_(out) {}

  ResultsStore& store() {
    if (!store_)
      store_ = std::make_unique<ResultsStore>(ResultsStore::resolve_path(
          common_.store_path.empty() ? std::nullopt : std::optional<std::string>(common_.store_path)));
    return *store_;
  }

  bool json_mode() const { return common_.format == "json"; }
  unsigned threads() const { return common_.threads; }

  /// Emits the text lines or the JSON document, and mirrors the JSON to --out.
  void emit(const json& doc, const std::vector<std::string>& text) {
    if (json_mode()) {
      out_ << doc.dump(2) << '\n';
    } else {
      for (const auto& line : text) out_ << line << '\n';
    }
    if (!common_.out_path.empty()) {
      std::ofstream os(common_.out_path);
      if (!os) throw Error(ErrorKind::invalid_argument, "cannot write " + common_.out_path);
      os << doc.dump(2) << '\n';
    }
  }

  std::ostream& out() { return out_; }

 private:
  const Common& common_;
  std::ostream& out_;
  std::unique_ptr<ResultsStore> store_;
};

inline json count_json(const CountValue& cv) {
  return {{"n", cv.instance.n},
          {"l", cv.instance.l},
          {"value", cv.value.str()},
          {"method", std::string(to_string(cv.method))}};
}

inline std::vector<CountValue> counts_up_to(Session& s, int n, int max_l) {
  std::vector<CountValue> values;
  for (int l = 0; l <= max_l; ++l) values.push_back(count_cached(Instance{n, l}, s.store(), s.threads()));
  return values;
}

inline int default_series_length(int n) { return 2 * (polytope_dimension(n) + 1) + 2; }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::json;
  detail::Common common;
  CLI::App app{"Count symmetric non-negative integer matrices with zero diagonal and constant row sums"};
  app.name("symcount");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", common.out_path, "Also write the JSON result to this file");
  app.add_option("--store", common.store_path, "Results store (default: $SYMCOUNT_STORE or ./symcount_results.jsonl)");

  int n = 0;
  int l = 0;
  auto add_nl = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--n", n, "Matrix size")->required()->check(CLI::Range(1, 64));
    sub->add_option("--l", l, "Row sum")->required()->check(CLI::NonNegativeNumber);
  };

  auto* exact = app.add_subcommand("exact", "Exact count by the cheapest method, cached in the store");
  add_nl(exact);
  exact->add_option("--threads", common.threads, "Worker threads");

  auto* modular = app.add_subcommand("modular", "Exact count by roots of unity and CRT");
  add_nl(modular);
  std::optional<std::uint64_t> force_q;
  bool emit_plans = false;
  modular->add_option("--threads", common.threads, "Worker threads");
  modular->add_option("--force-q", force_q, "Use this q instead of the smallest admissible one");
  modular->add_flag("--emit-plans", emit_plans, "Print each (p, q, alpha, beta)");

  auto* est = app.add_subcommand("estimate", "Asymptotic estimate of M(n,l)");
  add_nl(est);
  std::string form = "binomial";
  est->add_option("--form", form, "Estimate")->check(CLI::IsMember({"saddle", "binomial", "biglambda", "naive"}));

  int ehr_n = 0;
  std::optional<int> max_l;
  auto add_series_opts = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--n", ehr_n, "Matrix size")->required()->check(CLI::Range(3, 12));
    sub->add_option("--max-l", max_l, "Largest row sum to count (default 2(d+1)+2)");
    sub->add_option("--threads", common.threads, "Worker threads");
  };
  auto* ehrhart = app.add_subcommand("ehrhart", "Quasipolynomial branches, h-vectors and series numerator");
  add_series_opts(ehrhart);
  auto* series = app.add_subcommand("series", "Generating-series numerator over (1-z^2)^(d+1)");
  add_series_opts(series);

  auto* delta = app.add_subcommand("delta", "Normalized error of the naive model");
  add_nl(delta);
  delta->add_option("--threads", common.threads, "Worker threads");

  auto* minentry = app.add_subcommand("minentry", "Probability that every off-diagonal entry is at least k");
  add_nl(minentry);
  int k = 0;
  bool asymptotic = false;
  minentry->add_option("--k", k, "Entry threshold")->required()->check(CLI::NonNegativeNumber);
  minentry->add_flag("--asymptotic", asymptotic, "Use the exp(-k n^3/(2l)) law");
  minentry->add_option("--threads", common.threads, "Worker threads");

  auto* integral = app.add_subcommand("verify-integral", "Torus-integral quadrature against the exact count");
  add_nl(integral);
  std::optional<int> grid;
  integral->add_option("--grid", grid, "Grid points per dimension (default max(64, 8(l+1)))");
  integral->add_option("--threads", common.threads, "Worker threads");

  auto* audit = app.add_subcommand("audit", "Cross-method consistency and error-term audit");
  audit->fallthrough();
  int max_n = 7;
  int audit_max_l = 10;
  std::uint64_t budget = 20'000'000;
  audit->add_option("--max-n", max_n, "Largest n")->check(CLI::Range(3, 12));
  audit->add_option("--max-l", audit_max_l, "Largest l")->check(CLI::NonNegativeNumber);
  audit->add_option("--budget", budget, "Backtracking node budget per instance");
  audit->add_option("--threads", common.threads, "Worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : domain_failure;
  }
  common.threads = std::max(1u, common.threads);

  detail::Session s(common, out);
  try {
    if (exact->parsed()) {
      const CountValue cv = count_cached(Instance{n, l}, s.store(), s.threads());
      s.emit(detail::count_json(cv), {cv.value.str()});
    } else if (modular->parsed()) {
      const Instance inst{n, l};
      ModularOptions opts;
      opts.threads = s.threads();
      opts.force_q = force_q;
      json plans = json::array();
      std::vector<std::string> text;
      opts.on_plan = [&](const ModularPlan& p) {
        plans.push_back({{"p", p.p}, {"q", p.q}, {"alpha", p.alpha}, {"beta", p.beta}});
        if (emit_plans)
          text.push_back("plan p=" + std::to_string(p.p) + " q=" + std::to_string(p.q) +
                         " alpha=" + std::to_string(p.alpha) + " beta=" + std::to_string(p.beta));
      };
      inst.validate();
      const CountValue cv = inst.feasible() ? count_crt(inst, opts) : count_backtracking(inst);
      s.store().append(cv);
      json doc = detail::count_json(cv);
      if (emit_plans) doc["plans"] = plans;
      text.push_back(cv.value.str());
      s.emit(doc, text);
    } else if (est->parsed()) {
      const LogEstimate e = estimate(Instance{n, l}, formula_from_string(form));
      json doc = {{"n", n}, {"l", l}, {"form", form}, {"log_value", detail::real_str(e.log_value, 50)}};
      std::vector<std::string> text = {"log " + form + " estimate = " + detail::real_str(e.log_value, 50)};
      if (e.log_value < 1e6) {
        const std::string v = detail::real_str(exp(e.log_value), 25);
        doc["value"] = v;
        text.push_back("estimate = " + v);
      }
      s.emit(doc, text);
    } else if (ehrhart->parsed() || series->parsed()) {
      const int d = polytope_dimension(ehr_n);
      const int top = max_l.value_or(detail::default_series_length(ehr_n));
      const auto values = detail::counts_up_to(s, ehr_n, top);
      const EhrhartSeries ser = series_numerator(ehr_n, values);
      json ser_doc = {{"numerator", detail::integers(ser.numerator)},
                      {"denominator", "(1-z^2)^" + std::to_string(ser.denominator_exponent)},
                      {"palindromic", is_palindromic(ser.numerator)}};
      std::vector<std::string> text;
      std::string num_line = "numerator:";
      for (const auto& c : ser.numerator) num_line += " " + c.str();
      if (series->parsed()) {
        text = {"n=" + std::to_string(ehr_n) + " d=" + std::to_string(d) + " denominator (1-z^2)^" +
                    std::to_string(ser.denominator_exponent),
                num_line};
        json doc = {{"n", ehr_n}, {"d", d}, {"series", ser_doc}};
        s.emit(doc, text);
      } else {
        const Quasipolynomial2 qp = interpolate_quasipolynomial(ehr_n, values);
        json doc = {{"n", ehr_n},
                    {"d", d},
                    {"branches", {{"even", detail::rationals(qp.even_branch)},
                                  {"odd", detail::rationals(qp.odd_branch)}}},
                    {"series", ser_doc}};
        text.push_back("n=" + std::to_string(ehr_n) + " d=" + std::to_string(d));
        for (Parity par : {Parity::even, Parity::odd}) {
          const char* name = par == Parity::even ? "even" : "odd";
          std::string line = std::string(name) + " branch (ascending):";
          for (const auto& c : qp.branch(par)) line += " " + detail::rational_str(c);
          text.push_back(line);
          const HVector h = h_vector(ehr_n, par, values);
          doc["h_vectors"][name] = detail::integers(h.h);
          std::string hl = std::string(name) + " h-vector:";
          for (const auto& c : h.h) hl += " " + c.str();
          text.push_back(hl);
        }
        text.push_back(num_line);
        s.emit(doc, text);
      }
    } else if (delta->parsed()) {
      const Instance inst{n, l};
      const CountValue cv = count_cached(inst, s.store(), s.threads());
      const DeltaValue dv = conjecture_delta(inst, cv);
      const bool within = abs(dv.delta) < 1;
      s.emit({{"n", n}, {"l", l}, {"value", cv.value.str()}, {"delta", detail::real_str(dv.delta)}, {"abs_below_one", within}},
             {"Delta(" + std::to_string(n) + "," + std::to_string(l) + ") = " + detail::real_str(dv.delta),
              within ? "|Delta| < 1" : "|Delta| >= 1: VIOLATION of the conjectured bound"});
    } else if (minentry->parsed()) {
      const Instance inst{n, l};
      if (asymptotic) {
        const Real p = min_entry_prob_asymptotic(inst, k);
        s.emit({{"n", n}, {"l", l}, {"k", k}, {"asymptotic", detail::real_str(p)}}, {detail::real_str(p)});
      } else {
        ExactCounter counter = [&](const Instance& i) { return count_cached(i, s.store(), s.threads()).value; };
        const Rational p = min_entry_prob_exact(inst, k, counter);
        s.emit({{"n", n}, {"l", l}, {"k", k}, {"exact", detail::rational_str(p)}}, {detail::rational_str(p)});
      }
    } else if (integral->parsed()) {
      const IntegrandParams params = IntegrandParams::make(n, l);
      const QuadratureResult q = count_by_quadrature(params, grid.value_or(default_grid(l)), s.threads());
      const CountValue cv = count_cached(Instance{n, l}, s.store(), s.threads());
      const long long nearest = std::llround(q.value);
      const bool agrees = BigInt(nearest) == cv.value;
      std::ostringstream v;
      v << std::setprecision(15) << q.value;
      s.emit({{"n", n}, {"l", l}, {"grid", q.grid}, {"quadrature", q.value}, {"imag", q.imag},
              {"aliasing_bound", q.aliasing_bound}, {"nearest", nearest}, {"exact", cv.value.str()}},
             {"quadrature = " + v.str(), "nearest    = " + std::to_string(nearest), "exact      = " + cv.value.str()});
      if (!agrees) {
        err << "quadrature rounds to " << nearest << " but the exact count is " << cv.value.str() << '\n';
        return inconsistent;
      }
    } else if (audit->parsed()) {
      json rows = json::array();
      std::vector<std::string> text = {"   n    l  value                          backtracking  modular  store  delta"};
      bool conflict = false;
      bool violation = false;
      for (int an = 3; an <= max_n; ++an) {
        for (int al = 0; al <= audit_max_l; ++al) {
          const Instance inst{an, al};
          std::optional<BigInt> bt;
          try {
            bt = count_backtracking(inst, budget).value;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::budget_exceeded) throw;
          }
          ModularOptions opts;
          opts.threads = s.threads();
          const BigInt mod = inst.feasible() ? count_crt(inst, opts).value : BigInt(0);
          const auto stored = s.store().find(inst);
          const bool bt_ok = !bt || *bt == mod;
          const bool store_ok = !stored || stored->value == mod;
          if (!stored && bt_ok) s.store().append(CountValue{inst, mod, Method::modular_crt});
          std::string delta_text = "-";
          json row = {{"n", an}, {"l", al}, {"value", mod.str()},
                      {"backtracking", bt ? (bt_ok ? "pass" : "FAIL") : "skipped"},
                      {"store", stored ? (store_ok ? "pass" : "FAIL") : "new"}};
          if (an >= 5 && al >= 1 && mod >= 1) {
            const DeltaValue dv = conjecture_delta(inst, CountValue{inst, mod, Method::modular_crt});
            const bool within = abs(dv.delta) < 1;
            violation = violation || !within;
            delta_text = detail::real_str(dv.delta, 8) + (within ? "" : " VIOLATION");
            row["delta"] = detail::real_str(dv.delta);
          }
          conflict = conflict || !bt_ok || !store_ok;
          rows.push_back(row);
          std::ostringstream line;
          line << std::setw(4) << an << ' ' << std::setw(4) << al << "  " << std::left << std::setw(30)
               << mod.str() << ' ' << std::setw(13) << row["backtracking"].get<std::string>() << ' '
               << std::setw(8) << "pass" << ' ' << std::setw(6) << row["store"].get<std::string>() << ' '
               << delta_text << std::right;
          text.push_back(line.str());
        }
      }
      text.push_back(std::string("consistency: ") + (conflict ? "FAIL" : "pass"));
      text.push_back(std::string("error-term bound |Delta| < 1: ") + (violation ? "VIOLATED" : "pass"));
      s.emit({{"rows", rows}, {"consistent", !conflict}, {"delta_bound_holds", !violation}}, text);
      if (conflict || violation) return inconsistent;
    }
  } catch (const Error& e) {
    err << "symcount: " << e.what() << '\n';
    return e.kind() == ErrorKind::inconsistency ? inconsistent : domain_failure;
  }
  return ok;
}

}  // namespace symcount::cli
