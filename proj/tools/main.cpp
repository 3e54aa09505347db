#include "commands.hpp"
#include "gbcache.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace pfcalc;
using namespace pfcalc::cli;

int main(int argc, char** argv) {
  CLI::App app{"pfcalc: polynomial functors, coordinate rings and closed subsets at fixed rank"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, format = "text", cache_dir;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  GeometryOptions limits;
  app.add_option("--config", config_path, "JSON job file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "write report.<format> into this directory instead of stdout");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--cache-dir", cache_dir, "Groebner basis cache (default: $PFCALC_CACHE_DIR)");
  app.add_option("--threads", threads, "workers for per-prime computations")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_option("--max-vars", limits.max_vars, "size guard: variables in one Groebner computation");
  app.add_option("--max-basis", limits.max_basis, "size guard: working basis size");
  app.add_option("--max-degree", limits.max_degree, "size guard: transformation degree");
  app.fallthrough();
  for (const auto& name : command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json config;
    {
      std::ifstream in(config_path);
      try {
        config = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: " + config_path + " is not valid JSON: " + e.what());
      }
    }
    RunOptions opts;
    opts.seed = seed;
    opts.geometry = limits;
    opts.geometry.threads = threads;
    if (cache_dir.empty())
      if (const char* env = std::getenv("PFCALC_CACHE_DIR")) cache_dir = env;
    if (!cache_dir.empty()) opts.geometry.groebner = GbCache(cache_dir, GbCache::kVersion, &std::cerr).hook();

    Report report = run_command(command, config, opts);
    const std::string text = render(report, format);
    if (out_dir.empty()) {
      std::cout << text;
    } else {
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / ("report." + format)) << text;
    }
    return 0;
  } catch (const SizeGuardExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
