// cohere: command-line front end for the coherence library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coh/chen_stein.hpp"
#include "coh/coherence.hpp"
#include "coh/error.hpp"
#include "coh/exact_dist.hpp"
#include "coh/harness.hpp"
#include "coh/inference.hpp"
#include "coh/limit_laws.hpp"
#include "coh/matrix_io.hpp"
#include "coh/parallel.hpp"
#include "coh/sampler.hpp"

using nlohmann::json;

namespace {

void print_number(double v) { std::printf("%.17g\n", v); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Column indices are printed 1-based.
json coherence_json(const coh::CoherenceResult& c) {
  return {{"value", c.value},   {"i", c.i + 1}, {"j", c.j + 1}, {"centered", c.centered},
          {"t_stat", finite_or_null(c.t_stat)}, {"n", c.n}, {"p", c.p}};
}

void write_matrix(const coh::SampleMatrix& m, const std::string& out, const std::string& format) {
  if (format == "csv")
    coh::io::write_csv(out, m);
  else if (format == "binary")
    coh::io::write_binary(out, m);
  else
    throw coh::ParameterError("format must be binary or csv");
}

// "sub", "super", "trans:ALPHA", "exp:BETA"; the parameter may be omitted
// when n and p are given, in which case the plug-in is used.
struct RegimeArg {
  coh::Regime regime;
  std::optional<double> parameter;
};

RegimeArg parse_regime_arg(const std::string& text) {
  const auto colon = text.find(':');
  RegimeArg r{coh::parse_regime(text.substr(0, colon)), std::nullopt};
  if (colon != std::string::npos) {
    try {
      r.parameter = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw coh::ParameterError("bad regime parameter in '" + text + "'");
    }
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence of random matrices: sampling, exact and limiting laws, tests"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw an n x p matrix with i.i.d. spherical columns");
  std::string dist_text = "gaussian:1.0", out_path, format = "binary";
  std::size_t n = 0, p = 0;
  std::uint64_t seed = 0;
  sample->add_option("--dist", dist_text, "gaussian:S | mixture:E1,..:S1,.. | t:M");
  sample->add_option("--n", n)->required();
  sample->add_option("--p", p)->required();
  sample->add_option("--seed", seed)->required();
  sample->add_option("--out", out_path)->required();
  sample->add_option("--format", format, "binary | csv");

  // coherence
  auto* coh_cmd = app.add_subcommand("coherence", "Largest absolute pairwise correlation of a matrix file");
  std::string in_path;
  bool uncentered = false, as_json = false;
  std::size_t block = 0;
  coh_cmd->add_option("--in", in_path)->required();
  coh_cmd->add_flag("--uncentered", uncentered, "Cosines of the raw columns (L~)");
  coh_cmd->add_flag("--json", as_json);
  coh_cmd->add_option("--block", block, "Columns per kernel block (0 = auto)");

  // dist
  auto* dist = app.add_subcommand("dist", "Exact law of one sample correlation");
  dist->require_subcommand(1);
  int dn = 0;
  double x = 0.0;
  bool dunc = false;
  std::vector<CLI::App*> dist_eval;
  for (const char* name : {"pdf", "cdf", "tail"}) {
    auto* sc = dist->add_subcommand(name);
    sc->add_option("--n", dn)->required();
    sc->add_flag("--uncentered", dunc);
    sc->add_option("--x", x)->required();
    dist_eval.push_back(sc);
  }
  auto* table = dist->add_subcommand("table", "CSV of (rho, pdf, cdf) on a uniform grid over [-1, 1]");
  std::size_t grid = 1001;
  table->add_option("--n", dn)->required();
  table->add_flag("--uncentered", dunc);
  table->add_option("--grid", grid);
  table->add_option("--out", out_path)->required();

  // law
  auto* law = app.add_subcommand("law", "Limiting laws of the pivotal statistics");
  law->require_subcommand(1);
  auto* law_cdf = law->add_subcommand("cdf");
  std::string regime_text;
  double y = 0.0;
  std::optional<int> ln;
  std::optional<double> lp;
  bool lunc = false;
  law_cdf->add_option("--regime", regime_text, "sub | trans:ALPHA | exp:BETA | super")->required();
  law_cdf->add_option("--y", y)->required();
  law_cdf->add_flag("--uncentered", lunc);
  law_cdf->add_option("--n", ln);
  law_cdf->add_option("--p", lp);
  auto* law_predict = law->add_subcommand("predict", "Regime, LLN prediction and centering constants");
  int pn = 0;
  double pp = 0.0;
  law_predict->add_option("--n", pn)->required();
  law_predict->add_option("--p", pp)->required();
  law_predict->add_flag("--uncentered", lunc);

  // approx
  auto* approx = app.add_subcommand("approx", "Chen-Stein Poisson approximation of P(L <= t)");
  double t = 0.0;
  approx->add_option("--n", pn)->required();
  approx->add_option("--p", pp)->required();
  approx->add_option("--t", t)->required();
  approx->add_flag("--uncentered", dunc);

  // test
  auto* test = app.add_subcommand("test", "Level-alpha test that all columns are uncorrelated");
  double alpha = 0.05;
  bool finite_n = false;
  std::string test_regime;
  test->add_option("--in", in_path)->required();
  test->add_option("--alpha", alpha);
  test->add_option("--regime", test_regime, "sub | trans | exp | super (default: classify)");
  test->add_flag("--finite-n", finite_n, "Chen-Stein finite-n p-value interval");
  test->add_flag("--uncentered", uncentered);
  test->add_flag("--json", as_json);

  // mip
  auto* mip = app.add_subcommand("mip", "Mutual incoherence bound (2k - 1) L~ < 1");
  std::vector<std::int64_t> ks;
  mip->add_option("--in", in_path)->required();
  mip->add_option("--k", ks)->delimiter(',');

  // sensing
  auto* sensing = app.add_subcommand("sensing", "Gaussian sensing matrix with N(0, 1/n) entries");
  sensing->add_option("--n", n)->required();
  sensing->add_option("--p", p)->required();
  sensing->add_option("--seed", seed)->required();
  sensing->add_option("--out", out_path)->required();
  sensing->add_option("--format", format, "binary | csv");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a named Monte Carlo verification suite");
  std::string suite;
  coh::SuiteOptions suite_opt;
  verify->add_option("--suite", suite, "Suite name or 'all'")->required();
  verify->add_option("--budget", suite_opt.budget, "Flop budget per experiment");
  verify->add_option("--seed", suite_opt.seed);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a key=value file");
  std::string config_path;
  experiment->add_option("--config", config_path)->required();

  CLI11_PARSE(app, argc, argv);
  if (threads) coh::set_default_threads(threads);

  try {
    if (*sample) {
      const auto m = coh::sample_matrix(coh::parse_distribution(dist_text), n, p, seed);
      write_matrix(m, out_path, format);
    } else if (*coh_cmd) {
      const auto m = coh::io::read_matrix(in_path);
      const auto c = coh::coherence(m, !uncentered, {0, block});
      if (as_json)
        std::cout << coherence_json(c).dump(2) << '\n';
      else
        std::printf("value %.17g\npair %zu %zu\nt_stat %.17g\n", c.value, c.i + 1, c.j + 1, c.t_stat);
    } else if (*dist) {
      const coh::CorrLaw claw(dn, !dunc);
      if (*table) {
        if (grid < 2) throw coh::ParameterError("grid needs at least 2 points");
        std::ofstream out(out_path);
        if (!out) throw coh::IoError("cannot open '" + out_path + "' for writing");
        out.precision(17);
        out << "rho,pdf,cdf\n";
        for (std::size_t k = 0; k < grid; ++k) {
          const double rho = k + 1 == grid ? 1.0 : -1.0 + 2.0 * k / (grid - 1);
          double density;
          if (std::fabs(rho) < 1.0) {
            density = coh::pdf(claw, rho);
          } else {
            if (claw.discrete()) throw coh::DiscreteLawError("the centered n = 2 law has no density");
            const int d = claw.dof();
            density = d > 3 ? 0.0 : d == 3 ? 0.5 : INFINITY;
          }
          out << rho << ',' << density << ',' << coh::cdf(claw, rho) << '\n';
        }
      } else if (dist_eval[0]->parsed()) {
        print_number(coh::pdf(claw, x));
      } else if (dist_eval[1]->parsed()) {
        print_number(coh::cdf(claw, x));
      } else {
        print_number(coh::tail_prob(claw, x));
      }
    } else if (*law_cdf) {
      const auto r = parse_regime_arg(regime_text);
      double param = 0.0;
      if (r.regime == coh::Regime::Transitional || r.regime == coh::Regime::Exponential) {
        if (r.parameter) {
          param = *r.parameter;
        } else if (ln && lp) {
          const auto spec = coh::make_law_spec(*ln, *lp, lunc, r.regime);
          param = r.regime == coh::Regime::Transitional ? spec.alpha : spec.beta;
        } else {
          throw coh::ParameterError("give trans:ALPHA / exp:BETA, or --n and --p for the plug-in");
        }
      }
      switch (r.regime) {
        case coh::Regime::SubExp: print_number(coh::subexp_cdf(y)); break;
        case coh::Regime::Transitional: print_number(coh::transitional_cdf(y, param)); break;
        case coh::Regime::Exponential: print_number(coh::exp_cdf(y, param)); break;
        case coh::Regime::SuperExp: print_number(coh::superexp_cdf(y)); break;
      }
    } else if (*law_predict) {
      const auto cls = coh::classify_regime(pn, pp);
      const auto spec = coh::make_law_spec(pn, pp, lunc);
      const auto lln = coh::lln_prediction(spec);
      json cand = json::array();
      for (auto c : cls.candidates) cand.push_back(std::string(coh::to_string(c)));
      json j = {{"regime", std::string(coh::to_string(spec.regime))},
                {"alpha_hat", spec.alpha},
                {"beta_hat", spec.beta},
                {"ambiguous", cls.ambiguous},
                {"candidates", cand},
                {"lln", {{"coherence", lln.coherence}, {"scaled_log_stat", lln.scaled_log_stat}}},
                {"centering",
                 {{"subexp", coh::subexp_stat(0.0, pn, pp).centering},
                  {"transitional", coh::transitional_stat(0.0, pn, pp).centering},
                  {"superexp", coh::superexp_stat(0.0, pn, pp, lunc).centering}}}};
      std::cout << j.dump(2) << '\n';
    } else if (*approx) {
      const auto a = coh::poisson_approx(pn, pp, t, !dunc);
      json j = {{"t", a.t},
                {"lambda", a.lambda},
                {"prob", a.prob},
                {"error_bound", a.error_bound},
                {"h_n", finite_or_null(a.h_n)},
                {"accuracy_flag", a.accuracy_flag}};
      std::cout << j.dump(2) << '\n';
    } else if (*test) {
      coh::TestOptions opt;
      opt.alpha = alpha;
      opt.method = finite_n ? coh::TestMethod::ChenSteinFiniteN : coh::TestMethod::AsymptoticLaw;
      opt.uncentered = uncentered;
      if (!test_regime.empty()) opt.regime = coh::parse_regime(test_regime);
      const auto r = coh::independence_test(coh::io::read_matrix(in_path), opt);
      json cand = json::array();
      for (auto c : r.candidates) cand.push_back(std::string(coh::to_string(c)));
      json j = {{"statistic", finite_or_null(r.statistic)},
                {"regime",
                 {{"name", std::string(coh::to_string(r.regime.regime))},
                  {"alpha_hat", r.regime.alpha},
                  {"beta_hat", r.regime.beta},
                  {"uncentered", r.regime.uncentered},
                  {"n", r.regime.n},
                  {"p", r.regime.p},
                  {"ambiguous", r.regime_ambiguous},
                  {"candidates", cand}}},
                {"threshold", r.threshold},
                {"coherence_threshold", finite_or_null(r.coherence_threshold)},
                {"reject", r.reject},
                {"p_value", r.p_value},
                {"p_value_interval", {r.p_value_low, r.p_value_high}},
                {"method", std::string(coh::to_string(r.method))},
                {"alpha", r.alpha},
                {"coherence", coherence_json(r.coherence)}};
      if (as_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::printf("%s: statistic %.6g, threshold %.6g, p-value %.6g (%s, %s)\n",
                    r.reject ? "reject" : "accept", r.statistic, r.threshold, r.p_value,
                    std::string(coh::to_string(r.regime.regime)).c_str(),
                    std::string(coh::to_string(r.method)).c_str());
      }
    } else if (*mip) {
      const auto r = coh::mip_report(coh::io::read_matrix(in_path), ks);
      json holds = json::array();
      for (const auto& [k, ok] : r.holds) holds.push_back({{"k", k}, {"holds", ok}});
      json j = {{"coherence", r.coherence},
                {"k_max", r.k_max ? json(*r.k_max) : json(nullptr)},
                {"unbounded", r.unbounded()},
                {"asymptotic_k", r.asymptotic_k},
                {"mip_holds_for_k", holds}};
      std::cout << j.dump(2) << '\n';
    } else if (*sensing) {
      write_matrix(coh::make_sensing_matrix(n, p, seed), out_path, format);
    } else if (*verify) {
      suite_opt.threads = threads;
      std::vector<std::string> names;
      if (suite == "all")
        names = coh::suite_names();
      else
        names.push_back(suite);
      bool ok = true;
      json all = json::array();
      for (const auto& name : names) {
        const auto rep = coh::verify_suite(name, suite_opt);
        ok = ok && rep.passed();
        all.push_back(json::parse(rep.to_json()));
      }
      std::cout << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
      return ok ? 0 : 3;
    } else if (*experiment) {
      auto cfg = coh::load_config(config_path);
      if (threads) cfg.threads = threads;
      const auto r = coh::run(cfg);
      const auto report = coh::to_json(r);
      if (!cfg.output.empty()) {
        if (cfg.format == "csv") {
          coh::write_samples_csv(cfg.output, r);
        } else {
          std::ofstream out(cfg.output);
          if (!out) throw coh::IoError("cannot open '" + cfg.output + "' for writing");
          out << report << '\n';
        }
      }
      std::cout << report << '\n';
    }
  } catch (const coh::Error& e) {
    std::fprintf(stderr, "cohere: %s\n", e.what());
    return 1;
  }
  return 0;
}
