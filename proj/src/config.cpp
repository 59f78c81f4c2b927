// config.cpp -- key = value experiment configuration parsing.
#include "qprep/config.hpp"

#include "qprep/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace qprep {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    size_t used = 0;
    double x;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in " + key);
    }
    if (used != item.size())
      throw ConfigError("bad number '" + item + "' in " + key);
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

// rows separated by ';', entries by ','
std::vector<std::vector<double>> parse_matrix(const std::string& v,
                                              const std::string& key) {
  std::vector<std::vector<double>> rows;
  std::string row;
  std::stringstream ss(v);
  while (std::getline(ss, row, ';')) rows.push_back(parse_list(row, key));
  return rows;
}

double parse_num(const std::string& v, const std::string& key) {
  auto lst = parse_list(v, key);
  if (lst.size() != 1) throw ConfigError("expected a single number for " + key);
  return lst[0];
}

const std::set<std::string> kKinds = {"validate", "lindblad", "dyson-compare",
                                      "prepare",  "thermal",  "kp-check",
                                      "cluster-demo", "grid"};

}  // namespace

FormFactor load_tabulated_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open profile table: " + path);
  std::vector<double> r, phi;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    double a, b;
    if (!(ss >> a >> b))
      throw ConfigError("profile table " + path + ": bad line " +
                        std::to_string(lineno));
    r.push_back(a);
    phi.push_back(b);
  }
  if (r.size() < 2) throw ConfigError("profile table needs >= 2 rows");
  return FormFactor::tabulated(std::move(r), std::move(phi));
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.source_text = text;
  cfg.form_factor = FormFactor::exponential();

  std::vector<double> energies;
  std::vector<std::vector<double>> gre, gim;
  std::string ff_kind = "exponential", ff_table;
  double ff_c = 1.0, ff_a = 1.0, ff_mu = 0.0, ff_K = 1.0;
  std::string sched_kind = "decaying";
  double lambda0 = 0.1, gamma = -0.25;

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::string t = trim(line);
    size_t hash = t.find('#');
    if (hash != std::string::npos) t = trim(t.substr(0, hash));
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");

    if (key == "schema.version") {
      cfg.schema_version = static_cast<int>(parse_num(val, key));
      if (cfg.schema_version != 1)
        throw ConfigError("unsupported schema.version " + val);
    } else if (key == "experiment.kind") {
      if (!kKinds.count(val))
        throw ConfigError("unknown experiment.kind '" + val + "'");
      cfg.kind = val;
    } else if (key == "atom.energies") {
      energies = parse_list(val, key);
    } else if (key == "atom.coupling_re") {
      gre = parse_matrix(val, key);
    } else if (key == "atom.coupling_im") {
      gim = parse_matrix(val, key);
    } else if (key == "formfactor.kind") {
      if (val != "exponential" && val != "power-cutoff" && val != "tabulated")
        throw ConfigError("unknown formfactor.kind '" + val + "'");
      ff_kind = val;
    } else if (key == "formfactor.c") {
      ff_c = parse_num(val, key);
    } else if (key == "formfactor.a") {
      ff_a = parse_num(val, key);
    } else if (key == "formfactor.mu") {
      ff_mu = parse_num(val, key);
    } else if (key == "formfactor.K") {
      ff_K = parse_num(val, key);
    } else if (key == "formfactor.table") {
      ff_table = val;
    } else if (key == "schedule.kind") {
      if (val != "constant" && val != "decaying")
        throw ConfigError("unknown schedule.kind '" + val + "'");
      sched_kind = val;
    } else if (key == "schedule.lambda0") {
      lambda0 = parse_num(val, key);
    } else if (key == "schedule.gamma") {
      gamma = parse_num(val, key);
    } else if (key == "experiment.tau") {
      cfg.tau = parse_num(val, key);
    } else if (key == "experiment.eps0") {
      cfg.eps0 = parse_num(val, key);
    } else if (key == "experiment.beta") {
      cfg.beta = parse_num(val, key);
    } else if (key == "experiment.lambda") {
      cfg.lambda = parse_num(val, key);
    } else if (key == "experiment.horizon") {
      cfg.horizon = parse_num(val, key);
    } else if (key == "experiment.t_end") {
      cfg.t_end = parse_num(val, key);
    } else if (key == "experiment.sample_dt") {
      cfg.sample_dt = parse_num(val, key);
    } else if (key == "experiment.r_max") {
      cfg.r_max = parse_num(val, key);
    } else if (key == "experiment.k_max") {
      cfg.k_max = static_cast<int>(parse_num(val, key));
    } else if (key == "experiment.modes") {
      cfg.modes = static_cast<int>(parse_num(val, key));
    } else if (key == "experiment.n_max") {
      cfg.n_max = static_cast<int>(parse_num(val, key));
    } else if (key == "experiment.grid_steps") {
      cfg.grid_steps = static_cast<int>(parse_num(val, key));
    } else if (key == "experiment.seed") {
      cfg.seed = static_cast<unsigned>(parse_num(val, key));
    } else if (key == "experiment.initial_level") {
      cfg.initial_level = static_cast<int>(parse_num(val, key));
    } else if (key == "experiment.initial_kind") {
      if (val != "vacuum" && val != "one-photon")
        throw ConfigError("unknown experiment.initial_kind '" + val + "'");
      cfg.initial_kind = val;
    } else if (key == "experiment.observable") {
      cfg.observable = val;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }

  if (cfg.kind.empty()) throw ConfigError("missing experiment.kind");

  // atom
  if (energies.empty()) {
    // default two-level probe
    cfg.atom.energies = Eigen::VectorXd(2);
    cfg.atom.energies << 0.0, 1.0;
    cfg.atom.coupling = Eigen::MatrixXcd(2, 2);
    cfg.atom.coupling << 0.0, 1.0, 1.0, 0.0;
  } else {
    const int n = static_cast<int>(energies.size());
    cfg.atom.energies = Eigen::Map<Eigen::VectorXd>(energies.data(), n);
    if (gre.empty()) throw ConfigError("atom.energies set without atom.coupling_re");
    if (static_cast<int>(gre.size()) != n)
      throw ConfigError("atom.coupling_re must be an n x n matrix");
    cfg.atom.coupling = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(gre[i].size()) != n)
        throw ConfigError("atom.coupling_re must be an n x n matrix");
      for (int j = 0; j < n; ++j) cfg.atom.coupling(i, j) = gre[i][j];
    }
    if (!gim.empty()) {
      if (static_cast<int>(gim.size()) != n ||
          static_cast<int>(gim[0].size()) != n)
        throw ConfigError("atom.coupling_im must be an n x n matrix");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          cfg.atom.coupling(i, j) += cd(0.0, gim[i][j]);
    }
  }
  auto atom_errs = validate_atom(cfg.atom);
  if (!atom_errs.empty()) throw ConfigError("atom: " + atom_errs.front());

  // form factor
  if (ff_kind == "exponential") {
    cfg.form_factor = FormFactor::exponential(ff_c, ff_a);
  } else if (ff_kind == "power-cutoff") {
    cfg.form_factor = FormFactor::power_cutoff(ff_c, ff_mu, ff_K);
  } else {
    if (ff_table.empty())
      throw ConfigError("formfactor.kind = tabulated needs formfactor.table");
    cfg.form_factor = load_tabulated_profile(ff_table);
  }
  auto ff_errs = validate_form_factor(cfg.form_factor);
  if (!ff_errs.empty()) throw ConfigError("formfactor: " + ff_errs.front());

  // schedule
  cfg.schedule = sched_kind == "constant"
                     ? CouplingSchedule::constant(lambda0)
                     : CouplingSchedule::decaying(lambda0, gamma);
  auto s_errs = validate_schedule(cfg.schedule);
  if (!s_errs.empty()) throw ConfigError("schedule: " + s_errs.front());

  if (cfg.initial_level < 0) cfg.initial_level = cfg.atom.levels() - 1;
  if (cfg.initial_level >= cfg.atom.levels())
    throw ConfigError("experiment.initial_level out of range");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace qprep
