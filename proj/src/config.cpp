#include "masla/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace masla {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("parse error: line " + std::to_string(line) + ": " + msg);
}

double parse_num(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(line, "trailing characters in number '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) fail(line, "trailing characters in integer '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + s + "'");
  }
}

InitSpec parse_init(const std::vector<std::string>& toks, int line) {
  if (toks.empty()) fail(line, "init needs 'point <coords...>' or 'gaussian <mean...> <scale>'");
  std::vector<double> nums;
  for (std::size_t i = 1; i < toks.size(); ++i) nums.push_back(parse_num(toks[i], line));
  if (toks[0] == "point") {
    if (nums.empty()) fail(line, "init point needs coordinates");
    return InitSpec::point(nums);
  }
  if (toks[0] == "gaussian") {
    if (nums.size() < 2) fail(line, "init gaussian needs mean coordinates and a scale");
    const double scale = nums.back();
    nums.pop_back();
    return InitSpec::gaussian(nums, scale);
  }
  fail(line, "unknown init kind '" + toks[0] + "' (point | gaussian)");
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string init_to_string(const InitSpec& init) {
  std::string s = init.kind == InitKind::point ? "point" : "gaussian";
  for (double v : init.x0) s += " " + fmt_g(v);
  if (init.kind == InitKind::gaussian) s += " " + fmt_g(init.scale);
  return s;
}

}  // namespace

const char* to_string(ReferenceKind r) {
  return r == ReferenceKind::analytic_grid ? "analytic_grid" : "long_run_pool";
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  auto init_eq = [](const InitSpec& a, const InitSpec& b) {
    return a.kind == b.kind && a.x0 == b.x0 && (a.kind == InitKind::point || a.scale == b.scale);
  };
  if (!(experiment_id == o.experiment_id && target_id == o.target_id &&
        target_params.sigma == o.target_params.sigma &&
        target_params.lambda == o.target_params.lambda &&
        target_params.y_data == o.target_params.y_data && schedule == o.schedule &&
        grid == o.grid && metric_tv == o.metric_tv && metric_w2 == o.metric_w2 &&
        reference == o.reference && output_dir == o.output_dir &&
        write_trajectories == o.write_trajectories && run.n_chains == o.run.n_chains &&
        run.n_iters == o.run.n_iters && run.burn_in_fraction == o.run.burn_in_fraction &&
        run.master_seed == o.run.master_seed && init_eq(run.init, o.run.init) &&
        kernels.size() == o.kernels.size()))
    return false;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const auto& a = kernels[i];
    const auto& b = o.kernels[i];
    if (!(a.label == b.label && a.config.variant == b.config.variant &&
          a.config.step == b.config.step && a.config.theta == b.config.theta &&
          a.config.selection == b.config.selection && a.config.rwm_scale == b.config.rwm_scale &&
          a.init.has_value() == b.init.has_value()))
      return false;
    if (a.init && !init_eq(*a.init, *b.init)) return false;
  }
  return true;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.run.n_chains = 1;
  cfg.run.n_iters = 0;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::string section;
  bool saw_grid = false;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section == "kernel") {
        cfg.kernels.push_back(KernelEntry{});
      } else if (section != "target" && section != "run" && section != "schedule" &&
                 section != "grid" && section != "metrics") {
        fail(line, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto toks = split_ws(value);

    if (section.empty()) {
      if (key == "experiment") cfg.experiment_id = value;
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "trajectories") cfg.write_trajectories = (value == "true");
      else fail(line, "unknown top-level key '" + key + "'");
    } else if (section == "target") {
      if (key == "id") cfg.target_id = value;
      else if (key == "sigma") cfg.target_params.sigma = parse_num(value, line);
      else if (key == "lambda") cfg.target_params.lambda = parse_num(value, line);
      else if (key == "y") {
        cfg.target_params.y_data.clear();
        for (const auto& t : toks) cfg.target_params.y_data.push_back(parse_num(t, line));
      } else fail(line, "unknown [target] key '" + key + "'");
    } else if (section == "run") {
      if (key == "chains") cfg.run.n_chains = parse_int(value, line);
      else if (key == "iters") cfg.run.n_iters = parse_int(value, line);
      else if (key == "burn_in") cfg.run.burn_in_fraction = parse_num(value, line);
      else if (key == "seed") cfg.run.master_seed = static_cast<std::uint64_t>(parse_int(value, line));
      else if (key == "init") cfg.run.init = parse_init(toks, line);
      else fail(line, "unknown [run] key '" + key + "'");
    } else if (section == "schedule") {
      if (key == "at") {
        cfg.schedule.clear();
        for (const auto& t : toks) cfg.schedule.push_back(parse_int(t, line));
      } else fail(line, "unknown [schedule] key '" + key + "'");
    } else if (section == "grid") {
      if (key == "dim") {
        if (toks.size() != 3) fail(line, "grid dim needs 'lo hi bins'");
        if (!saw_grid) {
          cfg.grid.axes.clear();
          saw_grid = true;
        }
        cfg.grid.axes.push_back(GridAxis{parse_num(toks[0], line), parse_num(toks[1], line),
                                         static_cast<int>(parse_int(toks[2], line))});
      } else fail(line, "unknown [grid] key '" + key + "'");
    } else if (section == "metrics") {
      if (key == "use") {
        cfg.metric_tv = cfg.metric_w2 = false;
        for (const auto& t : toks) {
          if (t == "tv") cfg.metric_tv = true;
          else if (t == "w2") cfg.metric_w2 = true;
          else if (t != "none") fail(line, "unknown metric '" + t + "' (tv | w2 | none)");
        }
      } else if (key == "reference") {
        if (value == "analytic_grid") cfg.reference = ReferenceKind::analytic_grid;
        else if (value == "long_run_pool") cfg.reference = ReferenceKind::long_run_pool;
        else fail(line, "unknown reference '" + value + "' (analytic_grid | long_run_pool)");
      } else fail(line, "unknown [metrics] key '" + key + "'");
    } else {  // kernel
      if (cfg.kernels.empty()) fail(line, "kernel keys before any [kernel] section");
      KernelEntry& k = cfg.kernels.back();
      if (key == "variant") {
        try {
          k.config.variant = kernel_variant_from_string(value);
        } catch (const ConfigError& e) {
          fail(line, e.what());
        }
      } else if (key == "label") k.label = value;
      else if (key == "step") k.config.step = parse_num(value, line);
      else if (key == "theta") k.config.theta = parse_num(value, line);
      else if (key == "rwm_scale") k.config.rwm_scale = parse_num(value, line);
      else if (key == "selection") {
        try {
          k.config.selection = selection_rule_from_string(value);
        } catch (const std::invalid_argument& e) {
          fail(line, e.what());
        }
      } else if (key == "init") k.init = parse_init(toks, line);
      else fail(line, "unknown [kernel] key '" + key + "'");
    }
  }

  // ---- defaults and validation
  const TargetDistribution target = make_target(cfg.target_id, cfg.target_params);

  if (cfg.run.init.x0.empty()) cfg.run.init = InitSpec::point(Vec(target.dim, 0.0));
  if (static_cast<int>(cfg.run.init.x0.size()) != target.dim)
    throw ConfigError("init dimension does not match target '" + cfg.target_id + "'");
  for (auto& k : cfg.kernels)
    if (k.init && static_cast<int>(k.init->x0.size()) != target.dim)
      throw ConfigError("kernel init dimension does not match target '" + cfg.target_id + "'");

  if (cfg.kernels.empty()) throw ConfigError("config declares no [kernel]");
  for (auto& k : cfg.kernels) {
    if (k.label.empty()) k.label = to_string(k.config.variant);
    // normalize variant-specific fields so the canonical echo round-trips
    if (k.config.variant != KernelVariant::MYULA) k.config.theta = 0.0;
    if (k.config.variant != KernelVariant::RWM) k.config.rwm_scale = 1.0;
    validate_kernel(k.config, target);
  }
  for (std::size_t i = 0; i < cfg.kernels.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.kernels.size(); ++j)
      if (cfg.kernels[i].label == cfg.kernels[j].label)
        throw ConfigError("duplicate kernel label '" + cfg.kernels[i].label +
                          "'; set distinct 'label =' values");

  if (cfg.run.n_chains < 1) throw ConfigError("chains must be >= 1");
  if (cfg.run.n_iters < 0) throw ConfigError("iters must be >= 0");
  if (cfg.run.burn_in_fraction < 0.0 || cfg.run.burn_in_fraction >= 1.0)
    throw ConfigError("burn_in must lie in [0, 1)");

  if (cfg.grid.axes.empty()) cfg.grid = target.default_grid;
  cfg.grid.validate();
  if (cfg.grid.dim() != target.dim) throw ConfigError("grid dimension does not match target");

  if (cfg.run.n_chains > 1 && cfg.schedule.empty()) cfg.schedule = {cfg.run.n_iters};
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    if (cfg.schedule[i] < 0 || cfg.schedule[i] > cfg.run.n_iters)
      throw ConfigError("schedule entries must lie in [0, iters]");
    if (i > 0 && cfg.schedule[i] <= cfg.schedule[i - 1])
      throw ConfigError("schedule must be strictly increasing");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "experiment = " << c.experiment_id << "\n";
  o << "output_dir = " << c.output_dir << "\n";
  o << "trajectories = " << (c.write_trajectories ? "true" : "false") << "\n";
  o << "\n[target]\n";
  o << "id = " << c.target_id << "\n";
  o << "sigma = " << fmt_g(c.target_params.sigma) << "\n";
  o << "lambda = " << fmt_g(c.target_params.lambda) << "\n";
  o << "y =";
  for (double v : c.target_params.y_data) o << " " << fmt_g(v);
  o << "\n";
  o << "\n[run]\n";
  o << "chains = " << c.run.n_chains << "\n";
  o << "iters = " << c.run.n_iters << "\n";
  o << "burn_in = " << fmt_g(c.run.burn_in_fraction) << "\n";
  o << "seed = " << c.run.master_seed << "\n";
  o << "init = " << init_to_string(c.run.init) << "\n";
  if (!c.schedule.empty()) {
    o << "\n[schedule]\nat =";
    for (auto k : c.schedule) o << " " << k;
    o << "\n";
  }
  o << "\n[grid]\n";
  for (const auto& a : c.grid.axes)
    o << "dim = " << fmt_g(a.lo) << " " << fmt_g(a.hi) << " " << a.bins << "\n";
  o << "\n[metrics]\n";
  o << "use =";
  if (c.metric_tv) o << " tv";
  if (c.metric_w2) o << " w2";
  if (!c.metric_tv && !c.metric_w2) o << " none";
  o << "\n";
  o << "reference = " << to_string(c.reference) << "\n";
  for (const auto& k : c.kernels) {
    o << "\n[kernel]\n";
    o << "variant = " << to_string(k.config.variant) << "\n";
    o << "label = " << k.label << "\n";
    o << "step = " << fmt_g(k.config.step) << "\n";
    o << "selection = " << to_string(k.config.selection) << "\n";
    if (k.config.variant == KernelVariant::MYULA) o << "theta = " << fmt_g(k.config.theta) << "\n";
    if (k.config.variant == KernelVariant::RWM)
      o << "rwm_scale = " << fmt_g(k.config.rwm_scale) << "\n";
    if (k.init) o << "init = " << init_to_string(*k.init) << "\n";
  }
  return o.str();
}

}  // namespace masla
