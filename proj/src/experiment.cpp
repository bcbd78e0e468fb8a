#include "dirsup/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace dirsup {

using nlohmann::json;

namespace {

TauRule parse_tau_rule(const json& j) {
  TauRule rule;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "pi(N)") {
      rule.kind = TauRuleKind::pi_n;
    } else if (s == "sqrt(N)") {
      rule.kind = TauRuleKind::sqrt_n;
    } else if (s == "rs-optimal") {
      rule.kind = TauRuleKind::rs_optimal;
    } else {
      throw ConfigError("unknown tau rule '" + s + "'");
    }
    return rule;
  }
  rule.kind = TauRuleKind::explicit_list;
  if (j.is_number_unsigned()) {
    rule.values.push_back(j.get<std::size_t>());
  } else if (j.is_array()) {
    for (const auto& v : j) rule.values.push_back(v.get<std::size_t>());
  } else {
    throw ConfigError("tau must be a rule name, an integer, or a list of integers");
  }
  return rule;
}

bool close(double a, double b, double scale) { return a <= b + 1e-9 * scale + 1e-12; }

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view json_text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(json_text);
    for (const auto& n : j.at("n")) c.n_grid.push_back(n.get<Int>());
    c.tau_rule = parse_tau_rule(j.at("tau"));
    const json& sig = j.at("sigma");
    if (sig.is_array()) {
      for (const auto& s : sig) c.sigmas.push_back(s.get<double>());
    } else {
      c.sigmas.push_back(sig.get<double>());
    }
    c.method = parse_method(j.value("method", std::string("z-exact")));
    c.replicates = j.value("reps", std::size_t{100});
    c.seed = j.value("seed", std::uint64_t{0});
    c.output = j.value("output", std::string());
    const auto fmt = j.value("format", std::string("json"));
    if (fmt == "json") {
      c.format = OutputFormat::json;
    } else if (fmt == "csv") {
      c.format = OutputFormat::csv;
    } else {
      throw ConfigError("format must be json or csv");
    }
    c.plot_output = j.value("plot_output", std::string());
    c.options.grid_budget = j.value("grid_budget", c.options.grid_budget);
    c.options.refine_steps = j.value("refine_steps", c.options.refine_steps);
    c.options.line_t_max = j.value("line_t_max", c.options.line_t_max);
    c.options.line_steps = j.value("line_steps", c.options.line_steps);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw ConfigError("n grid is empty");
  for (Int n : n_grid) {
    if (n < 2 || n > kMaxN) throw ConfigError("every N must lie in [2, 2^62]");
  }
  if (sigmas.empty()) throw ConfigError("sigma list is empty");
  for (double s : sigmas) {
    if (!(s >= 0.0 && s < 0.5)) throw ConfigError("sigma values must lie in [0, 1/2)");
  }
  if (replicates < 1) throw ConfigError("reps must be >= 1");
  if (tau_rule.kind == TauRuleKind::explicit_list) {
    if (tau_rule.values.empty()) throw ConfigError("explicit tau list is empty");
    if (tau_rule.values.size() != 1 && tau_rule.values.size() != n_grid.size()) {
      throw ConfigError("explicit tau list must have one entry or one per N");
    }
  }
  if (options.grid_budget < 1) throw ConfigError("grid_budget must be >= 1");
}

ResultRow make_row(const RatioRow& r) {
  ResultRow row;
  row.N = r.N;
  row.tau = r.tau;
  row.sigma = r.sigma;
  row.method = r.record.method;
  row.R = r.record.replicates;
  row.seed = r.record.seed;
  row.estimate = r.record.estimate;
  row.std_error = r.record.std_error;
  row.gap = r.record.mean_gap;
  row.lower_z = r.record.mean_lower_z;
  row.l1 = r.l1;
  row.thm11_upper = r.thm11_upper;
  row.thm11_lower = r.thm11_lower;
  row.ratio_to_rate = r.ratio;
  row.violations = r.record.violations;
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  EstimateOptions options = config.options;
  options.threads = threads;
  std::vector<ResultRow> rows;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    TauRule rule = config.tau_rule;
    if (rule.kind == TauRuleKind::explicit_list && rule.values.size() > 1) {
      rule.values = {rule.values[g]};
    }
    for (double sigma : config.sigmas) {
      const auto table = ratio_table({config.n_grid[g]}, rule, sigma, config.method,
                                     config.replicates, config.seed, options);
      rows.push_back(make_row(table.front()));
    }
  }
  return rows;
}

bool sandwich_holds(const ResultRow& row) {
  const double upper = row.estimate + row.gap;
  return row.violations == 0 && close(row.lower_z, upper, row.l1) && close(upper, row.l1, row.l1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string to_json_line(const ResultRow& r) {
  std::ostringstream o;
  o << "{\"N\":" << r.N << ",\"tau\":" << r.tau << ",\"sigma\":" << format_double(r.sigma)
    << ",\"method\":\"" << to_string(r.method) << "\",\"R\":" << r.R << ",\"seed\":" << r.seed
    << ",\"estimate\":" << format_double(r.estimate) << ",\"stderr\":" << format_double(r.std_error)
    << ",\"gap\":" << format_double(r.gap) << ",\"lower_z\":" << format_double(r.lower_z)
    << ",\"l1\":" << format_double(r.l1) << ",\"thm11_upper\":" << format_double(r.thm11_upper)
    << ",\"thm11_lower\":" << format_double(r.thm11_lower)
    << ",\"ratio_to_rate\":" << format_double(r.ratio_to_rate) << ",\"violations\":" << r.violations
    << "}";
  return o.str();
}

ResultRow row_from_json(std::string_view line) {
  const json j = json::parse(line);
  ResultRow r;
  r.N = j.at("N").get<Int>();
  r.tau = j.at("tau").get<std::size_t>();
  r.sigma = j.at("sigma").get<double>();
  r.method = parse_method(j.at("method").get<std::string>());
  r.R = j.at("R").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.estimate = j.at("estimate").get<double>();
  r.std_error = j.at("stderr").get<double>();
  r.gap = j.at("gap").get<double>();
  r.lower_z = j.at("lower_z").get<double>();
  r.l1 = j.at("l1").get<double>();
  r.thm11_upper = j.at("thm11_upper").get<double>();
  r.thm11_lower = j.at("thm11_lower").get<double>();
  r.ratio_to_rate = j.at("ratio_to_rate").get<double>();
  r.violations = j.value("violations", std::size_t{0});
  return r;
}

std::string csv_header() {
  return "N,tau,sigma,method,R,seed,estimate,stderr,gap,lower_z,l1,thm11_upper,thm11_lower,ratio_to_rate";
}

std::string to_csv_line(const ResultRow& r) {
  std::ostringstream o;
  o << r.N << ',' << r.tau << ',' << format_double(r.sigma) << ',' << to_string(r.method) << ','
    << r.R << ',' << r.seed << ',' << format_double(r.estimate) << ',' << format_double(r.std_error)
    << ',' << format_double(r.gap) << ',' << format_double(r.lower_z) << ',' << format_double(r.l1)
    << ',' << format_double(r.thm11_upper) << ',' << format_double(r.thm11_lower) << ','
    << format_double(r.ratio_to_rate);
  return o.str();
}

std::string to_json_line(const EstimateRecord& rec) {
  std::ostringstream o;
  o << "{\"method\":\"" << to_string(rec.method) << "\",\"N\":" << rec.N << ",\"tau\":" << rec.tau
    << ",\"sigma\":" << format_double(rec.sigma) << ",\"R\":" << rec.replicates
    << ",\"seed\":" << rec.seed << ",\"estimate\":" << format_double(rec.estimate)
    << ",\"stderr\":" << format_double(rec.std_error) << ",\"gap\":" << format_double(rec.mean_gap)
    << ",\"lower_z\":" << format_double(rec.mean_lower_z) << ",\"l1\":" << format_double(rec.l1)
    << ",\"violations\":" << rec.violations << "}";
  return o.str();
}

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) out << csv_header() << '\n';
  for (const ResultRow& r : rows) {
    if (!sandwich_holds(r)) throw SandwichViolation("sandwich violated", r);
    out << (format == OutputFormat::json ? to_json_line(r) : to_csv_line(r)) << '\n';
  }
}

void write_plot_data(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "N,tau,sigma,series,value\n";
  for (const ResultRow& r : rows) {
    const std::pair<const char*, double> series[] = {
        {"estimate", r.estimate},       {"upper_bracket", r.estimate + r.gap},
        {"lower_z", r.lower_z},         {"l1", r.l1},
        {"thm11_upper", r.thm11_upper}, {"thm11_lower", r.thm11_lower},
        {"ratio_to_rate", r.ratio_to_rate},
    };
    for (const auto& [name, value] : series) {
      out << r.N << ',' << r.tau << ',' << format_double(r.sigma) << ',' << name << ','
          << format_double(value) << '\n';
    }
  }
}

}  // namespace dirsup
