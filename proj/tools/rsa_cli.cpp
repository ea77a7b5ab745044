// rsa: exact values, Monte Carlo estimates, and oracle checks for 1-D random
// sequential adsorption with nearest-neighbor exclusion.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource guard.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rsa/analytic.hpp"
#include "rsa/montecarlo.hpp"
#include "rsa/oracle.hpp"
#include "rsa/records.hpp"
#include "rsa/verify.hpp"

namespace {

namespace an = rsa::analytic;
namespace mc = rsa::montecarlo;
namespace orc = rsa::oracle;
using rsa::io::OutputRecord;
using rsa::io::Quantity;
using rsa::io::Source;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

// Reads a JSON object whose top-level keys are option names shared by every
// subcommand that has them; a nested object under a subcommand's name holds
// options for that subcommand alone and takes precedence. Values reach only
// the invoked subcommand since all subcommands bind the same storage. Keys no
// subcommand knows are passed through unrouted so the parser rejects them.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const auto doc = nlohmann::json::parse(input);
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    const auto all = app_->get_subcommands([](const CLI::App*) { return true; });
    const auto invoked = app_->get_subcommands();
    auto is_invoked = [&](const CLI::App* sub) {
      return std::find(invoked.begin(), invoked.end(), sub) != invoked.end();
    };

    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (!value.is_object()) continue;
      const auto* sub = app_->get_subcommand_no_throw(key);
      for (const auto& [name, inner] : value.items()) {
        if (sub != nullptr && !is_invoked(sub) && sub->get_option_no_throw("--" + name) != nullptr) continue;
        items.push_back({{key}, name, inputs(inner)});
      }
    }
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) continue;
      bool known = false;
      for (const auto* sub : all) {
        if (sub->get_option_no_throw("--" + key) == nullptr) continue;
        known = true;
        if (is_invoked(sub)) items.push_back({{sub->get_name()}, key, inputs(value)});
      }
      if (!known) items.push_back({{}, key, inputs(value)});
    }
    return items;
  }

 private:
  static std::vector<std::string> inputs(const nlohmann::json& v) {
    std::vector<std::string> out;
    auto one = [](const nlohmann::json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    if (v.is_array()) {
      std::vector<std::string> parts;
      for (const auto& x : v) parts.push_back(one(x));
      // Grids and lists are comma-separated strings on the command line too.
      std::string joined;
      for (std::size_t i = 0; i < parts.size(); ++i) joined += (i ? "," : "") + parts[i];
      out.push_back(joined);
    } else {
      out.push_back(one(v));
    }
    return out;
  }

  const CLI::App* app_;
};

// "0.1,0.5,1" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    double lo = 0, hi = 0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || count < 1 || !in.eof())
      throw std::invalid_argument("bad time grid '" + text + "'");
    for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  } else {
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument("bad time value '" + cell + "'");
      grid.push_back(v);
    }
  }
  if (grid.empty()) throw std::invalid_argument("empty time grid");
  for (double t : grid) an::check_time(t);
  return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    std::size_t used = 0;
    out.push_back(std::stoi(cell, &used));
    if (used != cell.size()) throw std::invalid_argument("bad integer '" + cell + "'");
  }
  return out;
}

struct CommonFlags {
  std::string t = "1.0";
  std::string source = "exact";
  std::uint64_t sites = 1'000'000;
  std::uint32_t replicas = 32;
  std::uint64_t seed = 42;
  int radius = 4;
  std::string format = "csv";
  std::string out;
  std::string boundary = "ring";
  unsigned threads = 0;
  double memory_budget_gib = 4.0;
  int s_max = 2;
  double tol = 1e-13;
  std::string s_list = "2";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_source) {
  cmd->add_option("--t", f.t, "Times: comma list or start:stop:count")->capture_default_str();
  if (with_source)
    cmd->add_option("--source", f.source, "exact, mc, or oracle")
        ->check(CLI::IsMember({"exact", "mc", "oracle"}))
        ->capture_default_str();
  cmd->add_option("--sites", f.sites, "Monte Carlo lattice size")->capture_default_str();
  cmd->add_option("--replicas", f.replicas, "Monte Carlo replicas")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--radius", f.radius, "Oracle window radius")->capture_default_str();
  cmd->add_option("--boundary", f.boundary, "ring or free")
      ->check(CLI::IsMember({"ring", "free"}))
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0: RSA_THREADS or all cores)");
  cmd->add_option("--memory-budget-gib", f.memory_budget_gib, "Monte Carlo memory budget")
      ->capture_default_str();
  cmd->add_option("--format", f.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
}

mc::SimConfig sim_config(const CommonFlags& f, const std::vector<double>& grid, int s_max) {
  mc::SimConfig c;
  c.sites = f.sites;
  c.replicas = f.replicas;
  c.seed = f.seed;
  c.t_grid = grid;
  c.s_max = s_max;
  c.boundary = f.boundary == "free" ? rsa::Boundary::free : rsa::Boundary::ring;
  c.threads = f.threads;
  c.memory_budget_bytes = static_cast<std::uint64_t>(f.memory_budget_gib * (1ull << 30));
  return c;
}

OutputRecord exact_record(Quantity q, std::optional<int> s, double t, double v, Source src) {
  return {q, s, t, v == 0.0 ? 0.0 : v, std::nullopt, src};
}

OutputRecord mc_record(Quantity q, std::optional<int> s, double t, const mc::Estimate& e) {
  return {q, s, t, e.mean, e.std_error, Source::mc};
}

// Largest radius <= requested whose window of `span` inner sites fits.
int fit_radius(int requested, int inner_sites) {
  const int r = std::min(requested, (orc::kMaxWindow - inner_sites) / 2);
  if (r < 1)
    throw std::invalid_argument("distance too large for the oracle window (at most " +
                                std::to_string(orc::kMaxWindow) + " sites)");
  return r;
}

std::vector<OutputRecord> density_records(const CommonFlags& f, const std::string& source) {
  const auto grid = parse_grid(f.t);
  std::vector<OutputRecord> out;
  if (source == "exact") {
    for (double t : grid) out.push_back(exact_record(Quantity::density, std::nullopt, t, an::density_exact(t), Source::exact));
  } else if (source == "oracle") {
    const int r = fit_radius(f.radius, 1);
    for (double t : grid)
      out.push_back(exact_record(Quantity::density, std::nullopt, t, orc::exact_center_density(r, t), Source::oracle));
  } else {
    for (const auto& [t, e] : mc::run_density_mc(sim_config(f, grid, 0)))
      out.push_back(mc_record(Quantity::density, std::nullopt, t, e));
  }
  return out;
}

std::vector<OutputRecord> correlation_records(const CommonFlags& f, const std::string& source) {
  const auto grid = parse_grid(f.t);
  if (f.s_max < 0) throw std::invalid_argument("--s-max must be nonnegative");
  std::vector<OutputRecord> out;
  if (source == "exact") {
    for (double t : grid)
      for (int s = 0; s <= f.s_max; ++s)
        out.push_back(exact_record(Quantity::correlation, s, t, an::correlation_exact(s, t, f.tol).value,
                                   Source::exact));
  } else if (source == "oracle") {
    for (double t : grid) {
      const double rho = orc::exact_center_density(fit_radius(f.radius, 1), t);
      for (int s = 0; s <= f.s_max; ++s) {
        const double pair = orc::exact_pair_prob(fit_radius(f.radius, s + 1), s, t);
        out.push_back(exact_record(Quantity::correlation, s, t, pair - rho * rho, Source::oracle));
      }
    }
  } else {
    for (const auto& [key, e] : mc::run_correlation_mc(sim_config(f, grid, f.s_max)))
      out.push_back(mc_record(Quantity::correlation, key.first, key.second, e));
  }
  return out;
}

std::vector<OutputRecord> gamma_records(const CommonFlags& f, const std::string& source,
                                        const std::vector<int>& distances) {
  const auto grid = parse_grid(f.t);
  std::vector<OutputRecord> out;
  if (source == "exact") {
    for (double t : grid)
      for (int s : distances)
        out.push_back(exact_record(Quantity::gamma, s, t, an::gamma_even_exact(s, t), Source::exact));
  } else if (source == "oracle") {
    for (double t : grid)
      for (int s : distances) {
        if (s < 2 || s % 2) throw std::invalid_argument("gamma distance must be even and >= 2");
        out.push_back(exact_record(Quantity::gamma, s, t, orc::exact_gamma(fit_radius(f.radius, s + 2), s, t),
                                   Source::oracle));
      }
  } else {
    const auto tables = mc::run_observables(sim_config(f, grid, 0), distances);
    for (const auto& [key, g] : tables.gamma) {
      out.push_back(mc_record(Quantity::gamma, key.first, key.second, g.gamma));
      out.push_back(mc_record(Quantity::p_pair, key.first, key.second, g.p_s));
      out.push_back(mc_record(Quantity::p_pair, key.first + 1, key.second, g.p_next));
    }
  }
  return out;
}

std::vector<OutputRecord> oracle_records(const CommonFlags& f) {
  const auto grid = parse_grid(f.t);
  std::vector<OutputRecord> out;
  for (double t : grid) {
    out.push_back(exact_record(Quantity::density, std::nullopt, t,
                               orc::exact_center_density(fit_radius(f.radius, 1), t), Source::oracle));
    for (int s = 1; s <= f.s_max; ++s)
      out.push_back(exact_record(Quantity::p_pair, s, t,
                                 orc::exact_pair_prob(fit_radius(f.radius, s + 1), s, t), Source::oracle));
    for (int s = 2; s <= f.s_max; s += 2)
      out.push_back(exact_record(Quantity::gamma, s, t,
                                 orc::exact_gamma(fit_radius(f.radius, s + 2), s, t), Source::oracle));
  }
  return out;
}

void emit(const CommonFlags& f, const std::vector<OutputRecord>& records) {
  const std::string text = f.format == "json" ? rsa::io::to_json(records) : rsa::io::to_csv(records);
  if (f.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(f.out);
  if (!file) throw std::invalid_argument("cannot open output file '" + f.out + "'");
  file << text;
}

int run_verify(const std::string& level, std::uint64_t seed, const CommonFlags& f,
               const std::string& corrupt) {
  rsa::verify::Options opt;
  opt.level = level == "full" ? rsa::verify::Level::full : rsa::verify::Level::quick;
  opt.seed = seed;
  opt.threads = f.threads;
  opt.mc_sites = f.sites;
  opt.mc_replicas = f.replicas;
  if (!corrupt.empty()) opt.corrupt = corrupt;

  const auto results = rsa::verify::run(opt);
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::printf("%-4s  %-38s error %-12.4g tolerance %-10.4g %s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.error, r.tolerance, r.detail.c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%zu checks, %zu failed\n", results.size(), failed);
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random sequential adsorption on the line with nearest-neighbor exclusion"};
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file mirroring the command-line flags");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  CommonFlags flags;
  std::string level = "quick";
  std::string corrupt;
  std::string sweep_sources = "exact";

  auto* density = app.add_subcommand("density", "Occupied-site density");
  add_common(density, flags, true);

  auto* correlation = app.add_subcommand("correlation", "Pair correlation C_s(t), s = 0..s-max");
  add_common(correlation, flags, true);
  correlation->add_option("--s-max", flags.s_max, "Largest distance")->capture_default_str();
  correlation->add_option("--tol", flags.tol, "Series truncation tolerance")->capture_default_str();

  auto* gamma = app.add_subcommand("gamma", "P(omega_-1 = omega_0 = 0, omega_s = 1) for even s");
  add_common(gamma, flags, true);
  gamma->add_option("--s", flags.s_list, "Even distances, comma separated")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Exact small-window density, pair and gamma values");
  add_common(oracle, flags, false);
  oracle->add_option("--s-max", flags.s_max, "Largest distance")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the cross-check suite");
  verify->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify->add_option("--seed", flags.seed, "Monte Carlo seed")->capture_default_str();
  verify->add_option("--sites", flags.sites, "Monte Carlo lattice size")->capture_default_str();
  verify->add_option("--replicas", flags.replicas, "Monte Carlo replicas")->capture_default_str();
  verify->add_option("--threads", flags.threads, "Worker threads");
  verify->add_option("--corrupt", corrupt, "Test hook: perturb the named check's reference value")
      ->group("");

  auto* sweep = app.add_subcommand("sweep", "Density, correlation and gamma over a time grid");
  add_common(sweep, flags, false);
  sweep->get_option("--t")->description("Times (default 0:1:21)");
  sweep->add_option("--sources", sweep_sources, "Comma list of exact, mc, oracle")->capture_default_str();
  sweep->add_option("--s-max", flags.s_max, "Largest distance")->capture_default_str();
  sweep->add_option("--tol", flags.tol, "Series truncation tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (sweep->parsed() && sweep->count("--t") == 0) flags.t = "0:1:21";

  try {
    if (density->parsed()) emit(flags, density_records(flags, flags.source));
    else if (correlation->parsed()) emit(flags, correlation_records(flags, flags.source));
    else if (gamma->parsed()) emit(flags, gamma_records(flags, flags.source, parse_int_list(flags.s_list)));
    else if (oracle->parsed()) emit(flags, oracle_records(flags));
    else if (verify->parsed()) return run_verify(level, flags.seed, flags, corrupt);
    else if (sweep->parsed()) {
      std::vector<OutputRecord> all;
      std::istringstream in(sweep_sources);
      std::string src;
      std::vector<int> evens;
      for (int s = 2; s <= flags.s_max; s += 2) evens.push_back(s);
      while (std::getline(in, src, ',')) {
        if (src != "exact" && src != "mc" && src != "oracle")
          throw std::invalid_argument("unknown source '" + src + "'");
        auto append = [&](std::vector<OutputRecord> part) { all.insert(all.end(), part.begin(), part.end()); };
        append(density_records(flags, src));
        append(correlation_records(flags, src));
        if (!evens.empty()) append(gamma_records(flags, src, evens));
      }
      emit(flags, all);
    }
  } catch (const mc::ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
