#include "kinetic/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kinetic/scenario.hpp"

namespace kinetic {

namespace {

const char kUsage[] =
    "usage: kinetic-run --config PATH [overrides]\n"
    "overrides: --kn X --tau X --t-end X --order-x N --order-v N\n"
    "           --elements N --scheme euler_frame|rk4 --smoothing-c X\n"
    "           --collision boltzmann|bgk|off --output-dir DIR\n";

/// Maps a --flag to the config key it overrides.
const std::map<std::string, std::string>& override_keys() {
  static const std::map<std::string, std::string> keys = {
      {"--kn", "kn"},
      {"--tau", "tau"},
      {"--t-end", "t_end"},
      {"--order-x", "order_x"},
      {"--order-v", "order_v"},
      {"--elements", "elements"},
      {"--scheme", "scheme"},
      {"--smoothing-c", "smoothing_c"},
      {"--collision", "collision"},
      {"--output-dir", "output_dir"},
  };
  return keys;
}

std::string format_value(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", d);
  return buf;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  std::string config_path;
  struct Override {
    std::string flag;
    std::string key;
    std::string value;
  };
  std::vector<Override> overrides;

  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string flag = args[i];
    std::string inline_value;
    bool has_inline = false;
    if (const auto eq = flag.find('='); eq != std::string::npos) {
      inline_value = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
      has_inline = true;
    }
    const auto value_of = [&]() -> std::string {
      if (has_inline) return inline_value;
      if (i + 1 >= args.size())
        throw std::invalid_argument("flag " + flag + " needs a value");
      return args[++i];
    };
    try {
      if (flag == "--help" || flag == "-h") {
        out << kUsage;
        return 0;
      } else if (flag == "--config") {
        config_path = value_of();
      } else if (const auto it = override_keys().find(flag);
                 it != override_keys().end()) {
        overrides.push_back({flag, it->second, value_of()});
      } else {
        err << "unknown flag: " << flag << "\n" << kUsage;
        return 1;
      }
    } catch (const std::invalid_argument& e) {
      err << e.what() << "\n" << kUsage;
      return 1;
    }
  }

  if (config_path.empty()) {
    err << "missing required flag --config\n" << kUsage;
    return 1;
  }
  std::ifstream file(config_path);
  if (!file) {
    err << "cannot read config file: " << config_path << "\n";
    return 1;
  }
  std::stringstream text;
  text << file.rdbuf();

  ScenarioConfig config;
  try {
    config = parse_config(text.str());
    for (const auto& o : overrides) {
      try {
        set_config_value(config, o.key, o.value);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("override " + o.flag + ": " + e.what());
      }
    }
    validate_config(config);
  } catch (const std::exception& e) {
    err << config_path << ": " << e.what() << "\n";
    return 1;
  }

  try {
    const RunSummary summary = run_scenario(config);
    out << "steps=" << summary.steps
        << " t=" << format_value(summary.t_final)
        << " tau=" << format_value(summary.tau_effective)
        << " mass=" << format_value(summary.totals_final[0])
        << " momentum=" << format_value(summary.totals_final[1])
        << " energy=" << format_value(summary.totals_final[4]) << "\n";
    out << "wrote " << summary.snapshot_files.size() << " snapshots and "
        << summary.manifest_file << "\n";
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace kinetic
