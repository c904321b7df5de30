#include "cli.hpp"

#include "oqrw/closed_forms.hpp"
#include "oqrw/evolution.hpp"
#include "oqrw/io.hpp"
#include "oqrw/kernels.hpp"
#include "oqrw/qmc.hpp"
#include "oqrw/recurrence.hpp"
#include "oqrw/walk_model.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oqrw::cli {

namespace {

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("oqrw", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* level = std::getenv("OQRW_LOG")) logger->set_level(spdlog::level::from_str(level));
  return logger;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Flat JSON object with fields in insertion order and numbers at 17 digits.
class Record {
 public:
  Record& num(const std::string& key, double v) { return raw(key, std::isfinite(v) ? io::format_number(v) : "null"); }
  Record& integer(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
  Record& str(const std::string& key, const std::string& v) { return raw(key, quote(v)); }
  Record& boolean(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  Record& null(const std::string& key) { return raw(key, "null"); }
  Record& raw(const std::string& key, std::string json) {
    fields_.emplace_back(key, std::move(json));
    return *this;
  }
  std::string dump() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (i) out += ", ";
      out += quote(fields_[i].first) + ": " + fields_[i].second;
    }
    return out + "}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string number_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + io::format_number(values[i]);
  return out + "]";
}

struct Globals {
  double tol = kDefaultKrausTol;
  std::string format;
  int threads = 0;
};

/// What a command produced; only committed when the command succeeds.
struct Output {
  std::ostringstream text;
  std::vector<std::pair<std::string, std::string>> files;
};

TransitionFamily load_walk(const std::string& path, const Globals& g,
                           std::optional<ValidationMode> mode = std::nullopt) {
  return io::parse_walk(io::read_file(path), io::WalkOptions{g.tol, mode});
}

BlockState load_state(const std::string& path, const TransitionFamily& family) {
  return io::parse_state(io::read_file(path), family.site_labels());
}

BlockProjection load_projection(const std::string& path, const TransitionFamily& family) {
  return io::parse_projection(io::read_file(path), family.site_labels());
}

ExpectationKind parse_kind(const std::string& name) {
  return name == "dual" ? ExpectationKind::dual : ExpectationKind::forward;
}

Evaluator parse_evaluator(const std::string& name) {
  return name == "product" ? Evaluator::product : Evaluator::nested;
}

const char* kind_name(ExpectationKind k) { return k == ExpectationKind::forward ? "forward" : "dual"; }

bool wants_csv(const Globals& g, bool csv_default) { return g.format.empty() ? csv_default : g.format == "csv"; }

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
  std::string walk;
};

int cmd_validate(const ValidateArgs& a, const Globals& g, Output& o, spdlog::logger& log) {
  const TransitionFamily family = load_walk(a.walk, g, ValidationMode::relaxed);
  const ValidationReport report = validate_kraus(family, g.tol);
  const auto& labels = family.site_labels();
  if (wants_csv(g, false)) {
    o.text << "site,residual\n";
    for (std::size_t j = 0; j < labels.size(); ++j)
      o.text << labels[j] << ',' << io::format_number(report.residuals[j]) << '\n';
  } else {
    Record residuals;
    for (std::size_t j = 0; j < labels.size(); ++j) residuals.num(labels[j], report.residuals[j]);
    Record rec;
    rec.boolean("pass", report.pass)
        .num("max_residual", report.max_residual)
        .str("worst_site", labels.empty() ? "" : family.label(report.worst_site))
        .num("tol", report.tol)
        .raw("residuals", residuals.dump());
    o.text << rec.dump() << '\n';
  }
  if (!report.pass) {
    log.warn("Kraus condition violated at site {} (residual {:.17g} > {:.3g})", family.label(report.worst_site),
             report.max_residual, report.tol);
    return kFailed;
  }
  return kOk;
}

// --- evolve / dist -----------------------------------------------------------

struct EvolveArgs {
  std::string walk, state;
  std::size_t n = 10;
};

int cmd_evolve(const EvolveArgs& a, const Globals& g, Output& o, spdlog::logger&) {
  const TransitionFamily family = load_walk(a.walk, g);
  BlockState state = load_state(a.state, family);
  std::vector<std::vector<double>> rows{position_distribution(state)};
  for (std::size_t n = 0; n < a.n; ++n) {
    state = step(family, state);
    rows.push_back(position_distribution(state));
  }
  if (wants_csv(g, true)) {
    o.text << io::evolution_csv(rows, family.site_labels());
  } else {
    std::string list = "[";
    for (std::size_t n = 0; n < rows.size(); ++n) list += (n ? ", " : "") + number_list(rows[n]);
    list += "]";
    std::string sites = "[";
    for (std::size_t i = 0; i < family.num_sites(); ++i) sites += (i ? ", " : "") + quote(family.site_labels()[i]);
    sites += "]";
    o.text << Record().raw("sites", sites).raw("distributions", list).dump() << '\n';
  }
  return kOk;
}

int cmd_dist(const EvolveArgs& a, const Globals& g, Output& o, spdlog::logger&) {
  const TransitionFamily family = load_walk(a.walk, g);
  const BlockState state = evolve(family, load_state(a.state, family), a.n);
  const auto dist = position_distribution(state);
  if (wants_csv(g, true)) {
    o.text << io::distribution_csv(dist, family.site_labels());
  } else {
    Record rec;
    for (std::size_t i = 0; i < dist.size(); ++i) rec.num(family.site_labels()[i], dist[i]);
    o.text << rec.dump() << '\n';
  }
  return kOk;
}

// --- invariant -----------------------------------------------------------------

struct InvariantArgs {
  std::string walk, out, method = "dense";
  InvariantOptions opts;
};

int cmd_invariant(const InvariantArgs& a, const Globals& g, Output& o, spdlog::logger& log) {
  const TransitionFamily family = load_walk(a.walk, g);
  InvariantOptions opts = a.opts;
  opts.method = a.method == "power" ? InvariantMethod::power_iteration : InvariantMethod::dense_eigen;
  const InvariantResult result = find_invariant_state(family, opts);
  if (opts.method == InvariantMethod::dense_eigen && !result.unique())
    log.warn("fixed points are not unique (eigenvalue-1 multiplicity {})", result.multiplicity);
  const std::string state_json = io::dump_state(result.state, family.site_labels());
  Record rec;
  rec.str("method", a.method).num("residual", result.residual).integer("iterations", (long long)result.iterations);
  if (opts.method == InvariantMethod::dense_eigen)
    rec.integer("multiplicity", (long long)result.multiplicity).boolean("unique", result.unique());
  if (a.out.empty()) {
    o.text << state_json;
  } else {
    o.files.emplace_back(a.out, state_json);
    o.text << rec.dump() << '\n';
  }
  return kOk;
}

// --- qmc-eval --------------------------------------------------------------------

struct QmcArgs {
  std::string walk, state, kind = "forward", evaluator = "nested";
  std::vector<std::string> word;
};

int cmd_qmc(const QmcArgs& a, const Globals& g, Output& o, spdlog::logger&) {
  const TransitionFamily family = load_walk(a.walk, g);
  const MarkovPair pair(family, load_state(a.state, family), parse_kind(a.kind));
  std::vector<BlockObservable> xs;
  for (const auto& path : a.word) xs.push_back(io::parse_observable(io::read_file(path), family.site_labels()));
  const double value = parse_evaluator(a.evaluator) == Evaluator::product ? qmc_evaluate_product(pair, xs)
                                                                          : qmc_evaluate_nested(pair, xs);
  if (wants_csv(g, false)) {
    o.text << "word_length,value,kind\n" << xs.size() << ',' << io::format_number(value) << ',' << a.kind << '\n';
  } else {
    o.text << Record().integer("word_length", (long long)xs.size()).num("value", value).str("kind", a.kind).dump()
           << '\n';
  }
  return kOk;
}

// --- recurrence --------------------------------------------------------------------

struct RecurrenceArgs {
  std::string walk, state, proj, criterion = "phi_recurrent", kind = "forward", evaluator = "nested", series_out;
  DiagnoseOptions opts;
};

int cmd_recurrence(const RecurrenceArgs& a, const Globals& g, Output& o, spdlog::logger& log) {
  const auto criterion = parse_criterion(a.criterion);
  if (!criterion) throw ParseError("unknown criterion " + a.criterion);
  const TransitionFamily family = load_walk(a.walk, g);
  const MarkovPair pair(family, load_state(a.state, family), parse_kind(a.kind));
  const BlockProjection e = load_projection(a.proj, family);
  DiagnoseOptions opts = a.opts;
  opts.how = parse_evaluator(a.evaluator);
  const RecurrenceVerdict v = diagnose(pair, e, *criterion, opts);

  if (!a.series_out.empty()) o.files.emplace_back(a.series_out, io::series_csv(v.series));
  if (wants_csv(g, false)) {
    o.text << io::series_csv(v.series);
  } else {
    Record rec;
    rec.str("criterion", to_string(v.criterion)).num("limit", v.limit);
    if (v.ratio)
      rec.num("ratio", *v.ratio);
    else
      rec.null("ratio");
    rec.str("verdict", to_string(v.verdict)).integer("n_max", (long long)v.n_max).str("kind", kind_name(pair.kind()));
    o.text << rec.dump() << '\n';
  }
  switch (v.verdict) {
    case Verdict::holds: return kOk;
    case Verdict::fails: return kFailed;
    case Verdict::inconclusive:
      log.info("no certified limit within n_max = {}", v.n_max);
      return kInconclusive;
  }
  return kFailed;
}

// --- accessible ------------------------------------------------------------------------

struct AccessArgs {
  std::string walk, state, from, to, kind = "forward", mode = "phi";
  std::size_t n_max = 200;
  double access_tol = kDefaultAccessTol;
  bool both = false;
};

int cmd_accessible(const AccessArgs& a, const Globals& g, Output& o, spdlog::logger&) {
  const TransitionFamily family = load_walk(a.walk, g);
  const MarkovPair pair(family, load_state(a.state, family), parse_kind(a.kind));
  const BlockProjection e = load_projection(a.from, family);
  const BlockProjection f = load_projection(a.to, family);
  const AccessMode mode = a.mode == "E" ? AccessMode::E : AccessMode::phi;
  auto witness = [](Record& rec, const std::string& key, const AccessResult& r) {
    if (r.witness)
      rec.integer(key, (long long)*r.witness);
    else
      rec.null(key);
  };
  const AccessResult there = is_accessible(pair, e, f, a.n_max, mode, a.access_tol);
  Record rec;
  rec.str("mode", a.mode).integer("n_max", (long long)a.n_max).boolean("accessible", there.accessible);
  witness(rec, "witness", there);
  if (a.both) {
    const AccessResult back = is_accessible(pair, f, e, a.n_max, mode, a.access_tol);
    rec.boolean("reverse_accessible", back.accessible);
    witness(rec, "reverse_witness", back);
    rec.boolean("communicate", there.accessible && back.accessible);
  }
  o.text << rec.dump() << '\n';
  return kOk;
}

// --- example -----------------------------------------------------------------------------

struct ExampleArgs {
  std::string name, dir = ".", variant = "ex5", q;
  std::size_t n = 11;
  std::optional<std::size_t> k;
  double pr = 0.3;
  double a = 0.6, b = 0.8, c = 0.8, d = 0.6, p = 0.5, t = 0.5;
  bool relaxed = false;
};

ComplexMatrix diag2(double x, double y) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

/// Rank-one projection onto (√t, √(1−t)), so that its (0,0) entry is t.
ComplexMatrix tilted_projection(double t) {
  ComplexVector u(2);
  u << std::sqrt(t), std::sqrt(1.0 - t);
  return u * u.adjoint();
}

ComplexMatrix named_projection(const std::string& name) {
  if (name == "e1") return diag2(1, 0);
  if (name == "e2") return diag2(0, 1);
  if (name == "plus") return tilted_projection(0.5);
  throw ParseError("unknown projection " + name + " (expected e1, e2 or plus)");
}

void require_param(bool ok, const std::string& what) {
  if (!ok) throw ParseError("invalid parameter: " + what);
}

int cmd_example(const ExampleArgs& a, const Globals& g, Output& o, spdlog::logger& log) {
  std::optional<TransitionFamily> family;
  std::optional<BlockState> state;
  std::vector<std::pair<std::string, BlockProjection>> projections;

  if (a.name == "ring") {
    require_param(a.n >= 3, "--n must be at least 3");
    const std::size_t k = a.k.value_or(a.n / 2);
    require_param(k < a.n, "--k must be a site of the ring");
    const SiteIndex next{(k + 1) % a.n};
    const std::size_t h = 2;
    Blocks blocks(a.n, ComplexMatrix::Identity(2, 2) / 2.0);
    ComplexMatrix B, C, q;
    if (a.variant == "ex5") {
      require_param(a.pr > 0.0 && a.pr < 1.0, "--pr must lie in (0, 1)");
      B = diag2(std::sqrt(a.pr), std::sqrt(1.0 - a.pr));
      C = diag2(std::sqrt(1.0 - a.pr), std::sqrt(a.pr));
      q = named_projection(a.q.empty() ? std::string("e1") : a.q);
    } else if (a.variant == "cond-a") {
      // B annihilates the support of ρ_{k+1}, so returns through k+1 never happen.
      B = diag2(0.0, std::sqrt(0.5));
      C = diag2(1.0, std::sqrt(0.5));
      blocks[next.id] = diag2(1.0, 0.0);
      q = named_projection(a.q.empty() ? std::string("plus") : a.q);
    } else {
      throw ParseError("unknown ring variant " + a.variant + " (expected ex5 or cond-a)");
    }
    double total = 0.0;
    for (const auto& blk : blocks) total += blk.trace().real();
    for (auto& blk : blocks) blk /= total;
    try {
      family.emplace(build_ring_walk(a.n, B, C, g.tol));
    } catch (const NormalizationError& e) {
      throw ParseError(e.what());
    }
    state.emplace(h, std::move(blocks));
    projections.emplace_back("proj.json", BlockProjection::at_site(h, a.n, SiteIndex{k}, q));
  } else if (a.name == "two-site") {
    require_param(a.p > 0.0 && a.p < 1.0, "--p must lie in (0, 1)");
    const ValidationMode mode = a.relaxed ? ValidationMode::relaxed : ValidationMode::strict;
    try {
      family.emplace(build_two_site_walk(a.a, a.b, a.c, a.d, a.p, mode, g.tol));
    } catch (const NormalizationError& e) {
      throw ParseError(std::string(e.what()) + "; pass --relaxed to write it anyway");
    }
    if (!family->kraus_report().pass)
      log.warn("two-site walk violates the Kraus condition at site {} (residual {:.17g}); written as relaxed",
               family->label(family->kraus_report().worst_site), family->kraus_report().max_residual);
    state.emplace(BlockState::localized(2, SiteIndex{1}, diag2(1.0, 0.0)));
    projections.emplace_back("proj.json", BlockProjection::at_site(2, 2, SiteIndex{1}, tilted_projection(0.5)));
  } else if (a.name == "two-site-part2") {
    require_param(a.p > 0.0 && a.p < 1.0, "--p must lie in (0, 1)");
    require_param(std::abs(a.a) <= 1.0, "--a must satisfy |a| <= 1");
    require_param(a.t >= 0.0 && a.t <= 1.0, "--t must lie in [0, 1]");
    const bool unit = std::abs(std::abs(a.a) - 1.0) <= 1e-15;
    const double b = std::sqrt(std::max(0.0, 1.0 - a.a * a.a));
    const ValidationMode mode = unit ? ValidationMode::strict : ValidationMode::relaxed;
    if (!unit) log.warn("c = 0 with |a| < 1 violates the Kraus condition at site 1; walk written as relaxed");
    family.emplace(build_two_site_walk(a.a, b, 0.0, 1.0, a.p, mode, g.tol));
    const ComplexMatrix rho0 = diag2(1.0, 0.0);
    state.emplace(2, Blocks{rho0 / 2.0, rho0 / 2.0});
    const auto e = BlockProjection::at_site(2, 2, SiteIndex{0}, tilted_projection(a.t));
    projections.emplace_back("proj.json", e);
    projections.emplace_back("proj_complement.json", e.complement());
  } else {
    throw ParseError("unknown example " + a.name + " (expected ring, two-site or two-site-part2)");
  }

  const std::filesystem::path dir(a.dir);
  std::vector<std::string> written;
  auto add = [&](const std::string& name, std::string content) {
    const std::string path = (dir / name).string();
    o.files.emplace_back(path, std::move(content));
    written.push_back(quote(path));
  };
  add("walk.json", io::dump_walk(*family));
  add("state.json", io::dump_state(*state, family->site_labels()));
  for (const auto& [name, proj] : projections) add(name, io::dump_projection(proj, family->site_labels()));

  std::string files = "[";
  for (std::size_t i = 0; i < written.size(); ++i) files += (i ? ", " : "") + written[i];
  files += "]";
  o.text << Record()
                .str("example", a.name)
                .str("validation", family->mode() == ValidationMode::strict ? "strict" : "relaxed")
                .raw("files", files)
                .dump()
         << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  CLI::App app{"Open quantum random walks and their quantum Markov chains"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Kraus residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads for the map kernels")->check(CLI::NonNegativeNumber);

  const auto kinds = CLI::IsMember({"forward", "dual"});
  const auto evaluators = CLI::IsMember({"nested", "product"});

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check the Kraus condition of a walk");
  validate->add_option("walk", va.walk, "Walk file")->required();

  EvolveArgs ea;
  auto* evolve_cmd = app.add_subcommand("evolve", "Position distribution after each of n steps");
  evolve_cmd->add_option("--walk", ea.walk)->required();
  evolve_cmd->add_option("--state", ea.state)->required();
  evolve_cmd->add_option("--n", ea.n, "Number of steps");

  EvolveArgs da;
  da.n = 0;
  auto* dist = app.add_subcommand("dist", "Position distribution of a state, optionally after n steps");
  dist->add_option("--walk", da.walk)->required();
  dist->add_option("--state", da.state)->required();
  dist->add_option("--n", da.n, "Number of steps");

  InvariantArgs ia;
  auto* invariant = app.add_subcommand("invariant", "Find an invariant state");
  invariant->add_option("--walk", ia.walk)->required();
  invariant->add_option("--method", ia.method)->check(CLI::IsMember({"dense", "power"}));
  invariant->add_option("--max-iters", ia.opts.max_iters);
  invariant->add_option("--inv-tol", ia.opts.tol)->check(CLI::PositiveNumber);
  invariant->add_option("--eig-tol", ia.opts.eig_tol)->check(CLI::PositiveNumber);
  invariant->add_option("--out", ia.out, "Write the state here and print a summary");

  QmcArgs qa;
  auto* qmc = app.add_subcommand("qmc-eval", "Evaluate the chain on a word of observables");
  qmc->add_option("--walk", qa.walk)->required();
  qmc->add_option("--state", qa.state)->required();
  qmc->add_option("--word", qa.word, "Observable files, first factor first")->required();
  qmc->add_option("--kind", qa.kind)->check(kinds);
  qmc->add_option("--evaluator", qa.evaluator)->check(evaluators);

  RecurrenceArgs ra;
  auto* recurrence = app.add_subcommand("recurrence", "Decide a recurrence or accessibility criterion");
  recurrence->add_option("--walk", ra.walk)->required();
  recurrence->add_option("--state", ra.state)->required();
  recurrence->add_option("--proj", ra.proj)->required();
  recurrence->add_option("--criterion", ra.criterion)
      ->check(CLI::IsMember({"phi_recurrent", "phi_completely_accessible", "E_recurrent", "E_completely_accessible"}));
  recurrence->add_option("--kind", ra.kind)->check(kinds);
  recurrence->add_option("--evaluator", ra.evaluator)->check(evaluators);
  recurrence->add_option("--n-max", ra.opts.n_max);
  recurrence->add_option("--decision-tol", ra.opts.decision_tol)->check(CLI::PositiveNumber);
  recurrence->add_option("--access-tol", ra.opts.access_tol)->check(CLI::PositiveNumber);
  recurrence->add_option("--window", ra.opts.window)->check(CLI::Range(3, 1000000));
  recurrence->add_option("--series-out", ra.series_out, "Write the n,value series here");

  AccessArgs aa;
  auto* accessible = app.add_subcommand("accessible", "Search for an accessibility witness from e to f");
  accessible->add_option("--walk", aa.walk)->required();
  accessible->add_option("--state", aa.state)->required();
  accessible->add_option("--from", aa.from)->required();
  accessible->add_option("--to", aa.to)->required();
  accessible->add_option("--kind", aa.kind)->check(kinds);
  accessible->add_option("--mode", aa.mode)->check(CLI::IsMember({"phi", "E"}));
  accessible->add_option("--n-max", aa.n_max);
  accessible->add_option("--access-tol", aa.access_tol)->check(CLI::PositiveNumber);
  accessible->add_flag("--both", aa.both, "Also test the reverse direction");

  ExampleArgs xa;
  std::size_t k_opt = 0;
  auto* example = app.add_subcommand("example", "Write the walk, state and projection files of a worked example");
  example->add_option("name", xa.name)->required()->check(CLI::IsMember({"ring", "two-site", "two-site-part2"}));
  example->add_option("--dir", xa.dir);
  example->add_option("--n", xa.n, "Ring size");
  auto* k_flag = example->add_option("--k", k_opt, "Ring site carrying e");
  example->add_option("--pr", xa.pr);
  example->add_option("--variant", xa.variant)->check(CLI::IsMember({"ex5", "cond-a"}));
  example->add_option("--q", xa.q)->check(CLI::IsMember({"e1", "e2", "plus"}));
  example->add_option("--a", xa.a);
  example->add_option("--b", xa.b);
  example->add_option("--c", xa.c);
  example->add_option("--d", xa.d);
  example->add_option("--p", xa.p);
  example->add_option("--t", xa.t, "Tr(rho0 p) for two-site-part2");
  example->add_flag("--relaxed", xa.relaxed, "Write a two-site walk even if it violates the Kraus condition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }
  if (k_flag->count()) xa.k = k_opt;
  if (g.threads > 0) kernels::set_num_threads(g.threads);

  Output o;
  int code = kFailed;
  try {
    if (*validate) code = cmd_validate(va, g, o, *log);
    else if (*evolve_cmd) code = cmd_evolve(ea, g, o, *log);
    else if (*dist) code = cmd_dist(da, g, o, *log);
    else if (*invariant) code = cmd_invariant(ia, g, o, *log);
    else if (*qmc) code = cmd_qmc(qa, g, o, *log);
    else if (*recurrence) code = cmd_recurrence(ra, g, o, *log);
    else if (*accessible) code = cmd_accessible(aa, g, o, *log);
    else if (*example) code = cmd_example(xa, g, o, *log);
  } catch (const ParseError& e) {
    log->error("{}", e.what());
    return kBadInput;
  } catch (const StructuralError& e) {
    log->error("{}", e.what());
    return kBadInput;
  } catch (const InvalidStateError& e) {
    log->error("{}", e.what());
    return kBadInput;
  } catch (const PreconditionError& e) {
    log->error("{}", e.what());
    return kPrecondition;
  } catch (const NormalizationError& e) {
    log->error("{} (residual {:.17g})", e.what(), e.residual());
    return kFailed;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kFailed;
  }

  // Verdict-style failures still report their record; hard errors returned above.
  try {
    for (const auto& [path, content] : o.files) io::write_file_atomic(path, content);
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kFailed;
  }
  out << o.text.str();
  return code;
}

}  // namespace oqrw::cli
