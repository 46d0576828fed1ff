#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "pcyl/errors.hpp"
#include "pcyl/experiments.hpp"
#include "pcyl/line_io.hpp"
#include "pcyl/measure.hpp"
#include "pcyl/report.hpp"
#include "pcyl/sampler.hpp"
#include "pcyl/slice_io.hpp"
#include "pcyl/vacancy.hpp"

namespace pcyl::cli {
namespace {

struct Settings {
  int threads = 1;
  std::string config;

  // mu
  std::string mode = "exact";
  int d = 3;
  double r = 1.0;
  double alpha = 16.0;
  double envelope = -1.0;
  std::uint64_t n = 1000000;
  std::uint64_t seed = 0;
  std::string estimator;

  // sample / slice
  double R = 2.0;
  double u = 0.0;
  std::uint64_t replicate = 0;
  std::vector<double> center;
  std::string out;
  double half = 10.0;
  double eps = 0.1;

  // check / describe
  std::string in;
  std::string header;
  std::string csv;
  std::string lines;

  // experiments
  std::vector<double> alphas{16, 32, 64, 128};
  double s = 4.0;
  std::vector<double> rs{16, 32, 64, 128};
  double ratio_r = 0.0;
  std::vector<double> separations{8, 16, 32, 64};
  std::vector<double> us;
  std::vector<double> scales;
  std::string rule = "slow";
  double a0 = 10.0;
  int n_max = 2;
  double growth = 2.0;
  std::vector<double> epsilons{0.1};
  int reps = 200;
  std::string reach_mode = "full";
  std::vector<double> as{27, 81, 243};
  std::uint64_t m1_pairs = 400000;
  std::string sampling = "factorized";
  int groups = 32;
  bool summary = false;
};

// Output sink: --out path or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) : os_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!file_) fail(Errc::kIo, "cannot open '" + path + "' for writing");
    os_ = &file_;
  }
  std::ostream& operator*() { return *os_; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) fail(Errc::kIo, "write failed");
    }
  }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream f(path, binary ? std::ios::binary | std::ios::in : std::ios::in);
  if (!f) fail(Errc::kIo, "cannot open '" + path + "'");
  return f;
}

Vec center_or_origin(const std::vector<double>& c, int d) {
  if (c.empty()) return Vec(d);
  if (static_cast<int>(c.size()) != d)
    fail(Errc::kDimensionMismatch, "center must have d coordinates");
  return Vec::from_span(c);
}

void emit_report(const EstimateReport& rep, const Settings& st, std::ostream& out,
                 std::ostream& err) {
  Sink sink(st.out, out);
  write_csv(*sink, rep);
  sink.close();
  if (st.summary) write_summary(err, rep);
}

int cmd_mu(const Settings& st, std::ostream& out, std::ostream& err) {
  EstimateReport rep;
  rep.experiment = "mu";
  rep.master_seed = st.seed;
  rep.parameters = {{"mode", st.mode}, {"d", std::to_string(st.d)}, {"r", fmt::format("{:g}", st.r)}};
  const McOptions mc{st.threads, 0};
  if (st.mode == "exact") {
    const MeasureValue v = mu_hit_ball_exact(st.d, st.r);
    rep.rows.push_back({"estimate", "mu_exact", st.d, 0.0, st.r, 0.0, 0, v.value, 0.0, 0});
  } else if (st.mode == "mc") {
    const double env = st.envelope >= 0.0 ? st.envelope : st.r + 2.0;
    rep.parameters.emplace_back("envelope", fmt::format("{:g}", env));
    rep.parameters.emplace_back("n", std::to_string(st.n));
    const MeasureValue v = mu_hit_mc(st.d, Ball{Vec(st.d), st.r}, Ball{Vec(st.d), env}, st.n, st.seed, mc);
    rep.rows.push_back({"estimate", "mu_mc", st.d, 0.0, st.r, 0.0, st.n, v.value, v.std_error, st.seed});
  } else {
    if (!(st.alpha >= 2.0 * (st.r + 1.0)))
      fail(Errc::kHypothesisViolated, "joint mode needs alpha >= 2(r + 1)");
    Vec far(st.d);
    far[0] = st.alpha;
    const HitRegion a = Ball{Vec(st.d), st.r};
    const HitRegion b = Ball{far, st.r};
    const std::string est = st.estimator.empty() ? "envelope" : st.estimator;
    rep.parameters.emplace_back("alpha", fmt::format("{:g}", st.alpha));
    rep.parameters.emplace_back("n", std::to_string(st.n));
    rep.parameters.emplace_back("estimator", est);
    const MeasureValue v = est == "envelope"
                               ? mu_joint_hit_mc(st.d, a, b, std::get<Ball>(a), st.n, st.seed, mc)
                               : mu_joint_hit_crofton(st.d, a, b, st.n, st.seed, mc);
    rep.rows.push_back({"estimate", "mu_joint", st.d, 0.0, st.alpha, 0.0, st.n, v.value, v.std_error, st.seed});
  }
  emit_report(rep, st, out, err);
  return kExitOk;
}

int cmd_sample(const Settings& st, std::ostream& out) {
  const WindowSpec w{center_or_origin(st.center, st.d), st.R};
  const LineProcessSample sample = sample_process(w, st.u, st.seed, st.replicate);
  Sink sink(st.out, out);
  write_lines(*sink, sample);
  sink.close();
  return kExitOk;
}

int cmd_check(const Settings& st, std::ostream& out) {
  std::ifstream f = open_in(st.in);
  const LineProcessSample sample = read_lines(f);
  const LineCheck res = check_lines(sample);
  out << fmt::format("rows={} violations={}\n", res.rows, res.violations.size());
  for (const auto& v : res.violations) out << v << '\n';
  if (!res.ok()) fail(Errc::kOutOfRange, "line set violates the sample invariants");
  return kExitOk;
}

int cmd_slice(const Settings& st, std::ostream& out) {
  if (st.out.empty()) fail(Errc::kIo, "slice needs --out PREFIX");
  const WindowSpec w{Vec(st.d), st.half * std::sqrt(2.0)};
  const LineProcessSample sample = sample_process(w, st.u, st.seed, st.replicate);
  const PlaneSpec plane = PlaneSpec::through_origin(st.d);
  const auto slice = build_slice(sample, plane, PlanarSquare{plane, 0.0, 0.0, st.half}, st.eps, st.threads);
  Sink pgm(st.out + ".pgm", out, true);
  write_pgm(*pgm, *slice.grid);
  pgm.close();
  Sink hdr(st.out + ".hdr", out);
  write_slice_header(*hdr, slice, st.u);
  hdr.close();
  out << fmt::format("wrote {}.pgm ({}x{}, occupied={}) and {}.hdr\n", st.out, slice.grid->nx,
                     slice.grid->ny, slice.grid->occupied_count(), st.out);
  return kExitOk;
}

int cmd_describe(const Settings& st, std::ostream& out) {
  int given = !st.header.empty() + !st.csv.empty() + !st.lines.empty();
  if (given != 1) fail(Errc::kParse, "describe needs exactly one of --header, --csv, --lines");
  if (!st.header.empty()) {
    std::ifstream f = open_in(st.header);
    for (const auto& [k, v] : read_slice_header(f)) out << k << '=' << v << '\n';
  } else if (!st.csv.empty()) {
    std::ifstream f = open_in(st.csv);
    const auto rows = read_csv(f);
    std::map<std::string, int> kinds;
    for (const auto& r : rows) ++kinds[r.kind];
    out << "rows=" << rows.size() << '\n';
    for (const auto& [k, c] : kinds) out << "kind." << k << '=' << c << '\n';
  } else {
    std::ifstream f = open_in(st.lines);
    const LineProcessSample s = read_lines(f);
    out << "d=" << s.window.dim() << '\n'
        << fmt::format("u={:.17g}\nR={:.17g}\n", s.u, s.window.radius) << "master_seed=" << s.master_seed
        << '\n'
        << "replicate=" << s.replicate_index << '\n'
        << "count=" << s.lines.size() << '\n';
  }
  return kExitOk;
}

ExpOptions exp_options(const Settings& st) { return ExpOptions{st.threads, st.groups}; }

std::vector<double> crossing_scales(const Settings& st) {
  if (!st.scales.empty()) return st.scales;
  ScaleSchedule sched;
  sched.a0 = st.a0;
  sched.n_max = st.n_max;
  sched.growth = st.growth;
  if (st.rule == "slow") sched.rule = ScaleSchedule::Rule::kPowerSlow;
  else if (st.rule == "three-halves") sched.rule = ScaleSchedule::Rule::kPowerThreeHalves;
  else sched.rule = ScaleSchedule::Rule::kGeometric;
  return sched.scales();
}

int cmd_experiment(const std::string& name, const Settings& st, std::ostream& out,
                   std::ostream& err) {
  const ExpOptions opt = exp_options(st);
  EstimateReport rep;
  if (name == "mu-scaling") {
    const JointEstimator est =
        st.estimator == "envelope" ? JointEstimator::kEnvelope : JointEstimator::kCrofton;
    rep = exp_mu_scaling(st.d, st.r, st.alphas, st.n, st.seed, est, opt);
  } else if (name == "square-scaling") {
    rep = exp_square_scaling(st.d, st.s, st.rs, st.n, st.seed, st.ratio_r, opt);
  } else if (name == "covariance-decay") {
    rep = exp_covariance_decay(st.d, st.u, st.separations, st.n, st.seed, opt);
  } else if (name == "occupied-crossing") {
    rep = exp_occupied_crossing(st.d, st.us.empty() ? std::vector<double>{0.16} : st.us,
                                crossing_scales(st), st.epsilons, st.reps, st.seed, opt);
  } else if (name == "vacant-reach") {
    rep = exp_vacant_reach(st.d, st.us.empty() ? std::vector<double>{0, 0.1, 0.2, 0.4, 0.8} : st.us,
                           st.R, st.eps, st.reps, st.seed,
                           st.reach_mode == "plane" ? ReachMode::kPlane : ReachMode::kFull, opt);
  } else if (name == "triangle-contrast") {
    rep = exp_triangle_contrast(st.d, st.u, st.as, st.reps, st.seed, st.m1_pairs,
                                st.sampling == "factorized", opt);
  } else if (name == "d2-sanity") {
    rep = exp_d2_sanity(st.us.empty() ? std::vector<double>{0.05} : st.us,
                        st.scales.empty() ? std::vector<double>{10, 30, 90} : st.scales, st.eps,
                        st.reps, st.seed, opt);
  }
  emit_report(rep, st, out, err);
  return kExitOk;
}

struct AppBundle {
  std::unique_ptr<CLI::App> app;
  std::function<int(std::ostream&, std::ostream&)> action;
};

CLI::App* selected_leaf(CLI::App* app) {
  for (CLI::App* sub : app->get_subcommands()) return selected_leaf(sub);
  return app;
}

AppBundle build(Settings& st) {
  AppBundle b;
  b.app = std::make_unique<CLI::App>("Poisson cylinder model simulator", "pcyl");
  CLI::App& app = *b.app;
  app.require_subcommand(1);
  app.add_option("--threads", st.threads, "worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--config", st.config, "key=value file; command-line flags take precedence");

  auto dim = [&](CLI::App* sub) { sub->add_option("--d", st.d, "dimension")->check(CLI::Range(2, 8)); };
  auto seed = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--seed", st.seed, "master seed");
    if (required) o->required();
  };
  auto outopt = [&](CLI::App* sub) { sub->add_option("--out", st.out, "output path (default stdout)"); };
  auto summary = [&](CLI::App* sub) { sub->add_flag("--summary", st.summary, "summary block on stderr"); };

  CLI::App* mu = app.add_subcommand("mu", "hitting measures of balls");
  mu->add_option("--mode", st.mode)->check(CLI::IsMember({"exact", "mc", "joint"}));
  dim(mu);
  mu->add_option("--r", st.r, "ball radius")->check(CLI::NonNegativeNumber);
  mu->add_option("--alpha", st.alpha, "center distance (joint)");
  mu->add_option("--envelope", st.envelope, "envelope radius (mc)");
  mu->add_option("--n", st.n, "lines or pairs")->check(CLI::PositiveNumber);
  mu->add_option("--estimator", st.estimator)->check(CLI::IsMember({"envelope", "two-point"}));
  seed(mu, false);
  outopt(mu);
  summary(mu);

  CLI::App* sample = app.add_subcommand("sample", "sample the line process in a ball window");
  dim(sample);
  sample->add_option("--R", st.R, "window radius")->check(CLI::PositiveNumber);
  sample->add_option("--u", st.u, "intensity")->check(CLI::NonNegativeNumber);
  sample->add_option("--replicate", st.replicate);
  sample->add_option("--center", st.center)->delimiter(',');
  seed(sample, true);
  outopt(sample);

  CLI::App* check = app.add_subcommand("check", "validate a line-set file");
  check->add_option("--in", st.in, "line-set file")->required();

  CLI::App* slice = app.add_subcommand("slice", "export a planar slice bitmap");
  dim(slice);
  slice->add_option("--u", st.u)->check(CLI::NonNegativeNumber);
  slice->add_option("--half", st.half, "square half-width")->check(CLI::PositiveNumber);
  slice->add_option("--eps", st.eps, "cell size");
  slice->add_option("--replicate", st.replicate);
  seed(slice, true);
  outopt(slice);

  CLI::App* describe = app.add_subcommand("describe", "print the fields of an output file");
  describe->add_option("--header", st.header, "slice sidecar header");
  describe->add_option("--csv", st.csv, "report CSV");
  describe->add_option("--lines", st.lines, "line-set file");

  CLI::App* exp = app.add_subcommand("experiment", "run a Monte Carlo experiment");
  exp->require_subcommand(1);
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : experiment_names()) {
    CLI::App* e = exp->add_subcommand(name);
    e->fallthrough();
    seed(e, true);
    outopt(e);
    summary(e);
    e->add_option("--groups", st.groups, "independent groups for measure estimates")
        ->check(CLI::Range(2, 100000));
    subs[name] = e;
  }
  {
    CLI::App* e = subs["mu-scaling"];
    dim(e);
    e->add_option("--r", st.r)->check(CLI::NonNegativeNumber);
    e->add_option("--alphas", st.alphas)->delimiter(',');
    e->add_option("--n", st.n)->check(CLI::PositiveNumber);
    e->add_option("--estimator", st.estimator)->check(CLI::IsMember({"envelope", "two-point"}));
  }
  {
    CLI::App* e = subs["square-scaling"];
    dim(e);
    e->add_option("--s", st.s);
    e->add_option("--rs", st.rs)->delimiter(',');
    e->add_option("--ratio-r", st.ratio_r);
    e->add_option("--n", st.n)->check(CLI::PositiveNumber);
  }
  {
    CLI::App* e = subs["covariance-decay"];
    dim(e);
    e->add_option("--u", st.u)->check(CLI::NonNegativeNumber);
    e->add_option("--separations", st.separations)->delimiter(',');
    e->add_option("--n", st.n)->check(CLI::PositiveNumber);
  }
  {
    CLI::App* e = subs["occupied-crossing"];
    dim(e);
    e->add_option("--u", st.us)->delimiter(',');
    e->add_option("--scales", st.scales)->delimiter(',');
    e->add_option("--rule", st.rule)->check(CLI::IsMember({"slow", "three-halves", "geometric"}));
    e->add_option("--a0", st.a0);
    e->add_option("--n-max", st.n_max);
    e->add_option("--growth", st.growth);
    e->add_option("--eps", st.epsilons)->delimiter(',');
    e->add_option("--reps", st.reps);
  }
  {
    CLI::App* e = subs["vacant-reach"];
    dim(e);
    e->add_option("--u", st.us)->delimiter(',');
    e->add_option("--R", st.R);
    e->add_option("--eps", st.eps);
    e->add_option("--reps", st.reps);
    e->add_option("--mode", st.reach_mode)->check(CLI::IsMember({"full", "plane"}));
  }
  {
    CLI::App* e = subs["triangle-contrast"];
    dim(e);
    e->add_option("--u", st.u)->check(CLI::NonNegativeNumber);
    e->add_option("--a", st.as)->delimiter(',');
    e->add_option("--reps", st.reps);
    e->add_option("--m1-pairs", st.m1_pairs);
    e->add_option("--sampling", st.sampling)->check(CLI::IsMember({"factorized", "full"}));
  }
  {
    CLI::App* e = subs["d2-sanity"];
    e->add_option("--u", st.us)->delimiter(',');
    e->add_option("--scales", st.scales)->delimiter(',');
    e->add_option("--eps", st.eps);
    e->add_option("--reps", st.reps);
  }
  for (CLI::App* sub : {mu, sample, check, slice, describe, exp}) sub->fallthrough();

  b.action = [&st, mu, sample, check, slice, describe, exp](std::ostream& out,
                                                            std::ostream& err) -> int {
    if (mu->parsed()) {
      if (st.mode != "exact" && mu->count("--seed") == 0)
        fail(Errc::kParse, "--seed is required for stochastic modes");
      return cmd_mu(st, out, err);
    }
    if (sample->parsed()) return cmd_sample(st, out);
    if (check->parsed()) return cmd_check(st, out);
    if (slice->parsed()) return cmd_slice(st, out);
    if (describe->parsed()) return cmd_describe(st, out);
    if (exp->parsed()) {
      CLI::App* leaf = selected_leaf(exp);
      return cmd_experiment(leaf->get_name(), st, out, err);
    }
    return kExitConfig;
  };
  return b;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::kParse, "cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::kParse, fmt::format("{}:{}: expected key=value", path, lineno));
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto z = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, z - a + 1);
    };
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::kParse:
      return kExitConfig;
    case Errc::kInvariantViolated:
      return kExitInvariant;
    default:
      return kExitPrecondition;
  }
}

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 consumes from the back
  Settings first;
  AppBundle probe = build(first);
  try {
    std::vector<std::string> consumed = argv;
    probe.app->parse(consumed);
  } catch (const CLI::Success& e) {
    probe.app->exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    probe.app->exit(e, err, err);
    return kExitConfig;
  }
  if (!first.config.empty()) {
    CLI::App* leaf = selected_leaf(probe.app.get());
    std::vector<std::string> extra;
    for (const auto& [key, value] : read_config(first.config)) {
      const std::string flag = "--" + key;
      CLI::Option* opt = nullptr;
      for (CLI::App* scope = leaf; scope && !opt; scope = scope->get_parent())
        opt = scope->get_option_no_throw(flag);
      if (!opt || key == "config") fail(Errc::kParse, "unknown config key '" + key + "'");
      if (opt->count() == 0) extra.push_back(flag + "=" + value);
    }
    std::vector<std::string> merged = args;
    merged.insert(merged.end(), extra.begin(), extra.end());
    argv.assign(merged.rbegin(), merged.rend());
  }
  Settings st;
  AppBundle bundle = build(st);
  try {
    bundle.app->parse(argv);
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return bundle.action(out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return parse_and_run(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace pcyl::cli
