#include "netform/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "netform/io.hpp"

namespace netform {

DgpSpec ExperimentConfig::dgp() const {
  DgpSpec d;
  switch (mode) {
    case RunMode::BaselineClosedForm:
      d.model = Model::Baseline;
      d.z_dim = 2;
      break;
    case RunMode::FeOnlyMc:
      d.model = Model::FeOnly;
      d.z_dim = 2;
      break;
    default:
      d.model = Model::Full;
      d.z_dim = 1;
  }
  d.n = n;
  d.gamma0 = gamma0;
  d.beta0 = beta0;
  d.z_support = z_support;
  d.fe = {sigma_a, rho};
  d.covariate = covariate == CovariateKind::Jaccard
                    ? CovariateSpec::jaccard()
                    : CovariateSpec::common_friends(n);
  d.dyad_kind = dyad_const ? DyadKind::ConstAbsDiff : DyadKind::AbsDiff;
  d.seed = seed;
  d.sweep_cap = sweep_cap;
  return d;
}

std::vector<double> ExperimentConfig::gamma_grid() const {
  if (gamma_step <= 0) throw std::invalid_argument("config: gamma_step <= 0");
  std::vector<double> g;
  for (double v = gamma_min; v <= gamma_max + 1e-9; v += gamma_step)
    g.push_back(v);
  return g;
}

namespace {

const std::map<std::string, RunMode> kModes{
    {"baseline_closed_form", RunMode::BaselineClosedForm},
    {"fe_only_mc", RunMode::FeOnlyMc},
    {"full_simulated", RunMode::FullSimulated},
    {"point_id", RunMode::PointId}};

const std::map<std::string, CriterionChoice> kCrits{
    {"nonparametric", CriterionChoice::Nonparametric},
    {"parametric", CriterionChoice::Parametric},
    {"both", CriterionChoice::Both}};

const std::map<std::string, ConfigClass> kClasses{
    {"tetrad", ConfigClass::Tetrad},
    {"three_link_triad", ConfigClass::ThreeLinkTriad},
    {"two_link_triad", ConfigClass::TwoLinkTriad},
    {"weighted_star", ConfigClass::WeightedStar},
    {"hexad", ConfigClass::Hexad}};

template <typename T>
std::string rev_lookup(const std::map<std::string, T>& m, T v) {
  for (auto& [k, val] : m)
    if (val == v) return k;
  throw std::logic_error("rev_lookup");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_version = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    auto as_d = [&] { return std::stod(val); };
    auto as_i = [&] { return std::stoi(val); };
    auto as_u = [&] { return static_cast<std::uint64_t>(std::stoull(val)); };

    if (key == "config_version") {
      if (as_i() != 1)
        throw std::invalid_argument("config: unsupported version " + val);
      saw_version = true;
    } else if (key == "mode") {
      if (!kModes.count(val)) throw std::invalid_argument("config: bad mode " + val);
      cfg.mode = kModes.at(val);
    } else if (key == "n") cfg.n = as_i();
    else if (key == "gamma0") cfg.gamma0 = as_d();
    else if (key == "beta0") {
      cfg.beta0.clear();
      for (auto& tok : split_list(val)) cfg.beta0.push_back(std::stod(tok));
    } else if (key == "z_support") cfg.z_support = as_i();
    else if (key == "sigma_a") cfg.sigma_a = as_d();
    else if (key == "rho") cfg.rho = as_d();
    else if (key == "covariate") {
      if (val == "jaccard") cfg.covariate = CovariateKind::Jaccard;
      else if (val == "common_friends") cfg.covariate = CovariateKind::CommonFriends;
      else throw std::invalid_argument("config: bad covariate " + val);
    } else if (key == "dyad_const") cfg.dyad_const = val == "true" || val == "1";
    else if (key == "sweep_cap") cfg.sweep_cap = as_i();
    else if (key == "gamma_min") cfg.gamma_min = as_d();
    else if (key == "gamma_max") cfg.gamma_max = as_d();
    else if (key == "gamma_step") cfg.gamma_step = as_d();
    else if (key == "criterion") {
      if (!kCrits.count(val)) throw std::invalid_argument("config: bad criterion " + val);
      cfg.criterion = kCrits.at(val);
    } else if (key == "cell_min") cfg.cell_min = as_u();
    else if (key == "restrictions") {
      cfg.restrictions.clear();
      for (auto& tok : split_list(val)) {
        if (!kClasses.count(tok))
          throw std::invalid_argument("config: bad restriction " + tok);
        cfg.restrictions.push_back(kClasses.at(tok));
      }
    } else if (key == "mc_draws_fe") cfg.mc_draws_fe = as_u();
    else if (key == "hexad_samples") cfg.hexad_samples = as_u();
    else if (key == "require_isolation")
      cfg.require_isolation = val == "true" || val == "1";
    else if (key == "replications") {
      cfg.replications.clear();
      for (auto& tok : split_list(val))
        cfg.replications.push_back(std::stoull(tok));
    } else if (key == "seed") cfg.seed = as_u();
    else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "jobs") cfg.jobs = as_i();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  if (!saw_version)
    throw std::invalid_argument("config: missing config_version");
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config_text(os.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "config_version = 1\n";
  os << "mode = " << rev_lookup(kModes, cfg.mode) << "\n";
  os << "n = " << cfg.n << "\n";
  os << "gamma0 = " << format_double(cfg.gamma0) << "\n";
  os << "beta0 = ";
  for (std::size_t i = 0; i < cfg.beta0.size(); ++i)
    os << (i ? "," : "") << format_double(cfg.beta0[i]);
  os << "\n";
  os << "z_support = " << cfg.z_support << "\n";
  os << "sigma_a = " << format_double(cfg.sigma_a) << "\n";
  os << "rho = " << format_double(cfg.rho) << "\n";
  os << "covariate = "
     << (cfg.covariate == CovariateKind::Jaccard ? "jaccard" : "common_friends")
     << "\n";
  os << "dyad_const = " << (cfg.dyad_const ? "true" : "false") << "\n";
  os << "sweep_cap = " << cfg.sweep_cap << "\n";
  os << "gamma_min = " << format_double(cfg.gamma_min) << "\n";
  os << "gamma_max = " << format_double(cfg.gamma_max) << "\n";
  os << "gamma_step = " << format_double(cfg.gamma_step) << "\n";
  os << "criterion = " << rev_lookup(kCrits, cfg.criterion) << "\n";
  os << "cell_min = " << cfg.cell_min << "\n";
  os << "restrictions = ";
  for (std::size_t i = 0; i < cfg.restrictions.size(); ++i)
    os << (i ? "," : "") << config_name(cfg.restrictions[i]);
  os << "\n";
  os << "mc_draws_fe = " << cfg.mc_draws_fe << "\n";
  os << "hexad_samples = " << cfg.hexad_samples << "\n";
  os << "require_isolation = " << (cfg.require_isolation ? "true" : "false")
     << "\n";
  os << "replications = ";
  for (std::size_t i = 0; i < cfg.replications.size(); ++i)
    os << (i ? "," : "") << cfg.replications[i];
  os << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "output_dir = " << cfg.output_dir.string() << "\n";
  os << "jobs = " << cfg.jobs << "\n";
  return os.str();
}

}  // namespace netform
