#include "spindirac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace spindirac {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kKnownKeys{
    "lattice.gamma1",     "lattice.gamma2",      "spin.eps1",          "spin.eps2",
    "grid.n",             "solver.schedule",     "solver.tol_solve",   "solver.tol_norm",
    "solver.max_newton",  "variational.q_values", "variational.tol_grad",
    "variational.max_iter", "variational.grid",  "variational.perturbation",
    "surface.tol_closed", "surface.tol_conformal", "surface.tol_cmc", "surface.zero_tol",
    "output.dir",         "output.copies",       "run.seed"};

std::vector<double> parse_numbers(const std::string& text, const std::string& field) {
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',' || c == '[' || c == ']') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(field, "not a number: '" + tok + "'");
    }
  }
  return out;
}

double parse_double(const std::string& text, const std::string& field) {
  const auto v = parse_numbers(text, field);
  if (v.size() != 1) throw ValidationError(field, "expected one number");
  return v[0];
}

int parse_int(const std::string& text, const std::string& field) {
  const double v = parse_double(text, field);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw ValidationError(field, "expected an integer");
  }
  return static_cast<int>(v);
}

Vec2 parse_vec(const std::string& text, const std::string& field) {
  const auto v = parse_numbers(text, field);
  if (v.size() != 2) throw ValidationError(field, "expected two numbers");
  return {v[0], v[1]};
}

// Applies one "section.key = value" assignment.
void assign(RunConfig& c, const std::string& key, const std::string& value) {
  if (!kKnownKeys.contains(key)) throw ValidationError(key, "unknown key");
  if (key == "lattice.gamma1") c.gamma1 = parse_vec(value, key);
  else if (key == "lattice.gamma2") c.gamma2 = parse_vec(value, key);
  else if (key == "spin.eps1") c.eps1 = parse_int(value, key);
  else if (key == "spin.eps2") c.eps2 = parse_int(value, key);
  else if (key == "grid.n") c.n = parse_int(value, key);
  else if (key == "solver.schedule") c.schedule = parse_numbers(value, key);
  else if (key == "solver.tol_solve") c.tol_solve = parse_double(value, key);
  else if (key == "solver.tol_norm") c.tol_norm = parse_double(value, key);
  else if (key == "solver.max_newton") c.max_newton = parse_int(value, key);
  else if (key == "variational.q_values") c.q_values = parse_numbers(value, key);
  else if (key == "variational.tol_grad") c.tol_grad = parse_double(value, key);
  else if (key == "variational.max_iter") c.max_iter = parse_int(value, key);
  else if (key == "variational.grid") c.mu_grid = parse_int(value, key);
  else if (key == "variational.perturbation") c.perturbation = parse_double(value, key);
  else if (key == "surface.tol_closed") c.tol_closed = parse_double(value, key);
  else if (key == "surface.tol_conformal") c.tol_conformal = parse_double(value, key);
  else if (key == "surface.tol_cmc") c.tol_cmc = parse_double(value, key);
  else if (key == "surface.zero_tol") c.zero_tol = parse_double(value, key);
  else if (key == "output.dir") c.out_dir = value;
  else if (key == "output.copies") std::tie(c.copies1, c.copies2) = parse_copies(value);
  else if (key == "run.seed") {
    const double v = parse_double(value, key);
    if (v < 0 || v != static_cast<double>(static_cast<unsigned long long>(v))) {
      throw ValidationError(key, "expected a non-negative integer");
    }
    c.seed = static_cast<unsigned long long>(v);
  }
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0)) throw ValidationError(field, "must be > 0");
}

Json numbers(const std::vector<double>& v) { return Json(v); }

}  // namespace

Lattice RunConfig::lattice() const {
  try {
    return make_lattice(gamma1, gamma2);
  } catch (const InvalidLatticeError& e) {
    throw ValidationError("lattice", e.what());
  }
}

ContinuationSchedule RunConfig::continuation() const {
  ContinuationSchedule s;
  s.p_values = schedule;
  s.newton.tol_solve = tol_solve_value();
  s.newton.tol_norm = tol_norm;
  s.newton.max_newton = max_newton;
  return s;
}

void RunConfig::validate() const {
  (void)lattice();
  if (eps1 != 1 && eps1 != -1) throw ValidationError("spin.eps1", "must be +1 or -1");
  if (eps2 != 1 && eps2 != -1) throw ValidationError("spin.eps2", "must be +1 or -1");
  if (n % 2 != 0 || n < 4 || n > 512) throw ValidationError("grid.n", "must be even with 4 <= n <= 512");
  if (mu_grid % 2 != 0 || mu_grid < 4 || mu_grid > 512) {
    throw ValidationError("variational.grid", "must be even with 4 <= n <= 512");
  }
  continuation().validate();
  if (tol_solve) require_positive(*tol_solve, "solver.tol_solve");
  require_positive(tol_norm, "solver.tol_norm");
  if (max_newton < 1) throw ValidationError("solver.max_newton", "must be >= 1");
  for (double q : q_values) {
    if (!(q > kCriticalQ && q <= 2.0)) throw ValidationError("variational.q_values", "each q must lie in (4/3, 2]");
  }
  if (tol_grad) require_positive(*tol_grad, "variational.tol_grad");
  if (max_iter < 1) throw ValidationError("variational.max_iter", "must be >= 1");
  if (!(perturbation >= 0.0)) throw ValidationError("variational.perturbation", "must be >= 0");
  require_positive(tol_closed, "surface.tol_closed");
  require_positive(tol_conformal, "surface.tol_conformal");
  require_positive(tol_cmc, "surface.tol_cmc");
  require_positive(zero_tol, "surface.zero_tol");
  if (copies1 < 1 || copies2 < 1) throw ValidationError("output.copies", "counts must be >= 1");
  if (out_dir.empty()) throw ValidationError("output.dir", "must not be empty");
}

Json RunConfig::to_json() const {
  Json j;
  j["lattice"] = {{"gamma1", {gamma1.x, gamma1.y}}, {"gamma2", {gamma2.x, gamma2.y}}};
  j["spin"] = {{"eps1", eps1}, {"eps2", eps2}};
  j["grid"] = {{"n", n}};
  j["solver"] = {{"schedule", numbers(schedule)},
                 {"tol_solve", tol_solve_value()},
                 {"tol_norm", tol_norm},
                 {"max_newton", max_newton}};
  j["variational"] = {{"q_values", numbers(q_values)},
                      {"tol_grad", tol_grad_value()},
                      {"max_iter", max_iter},
                      {"grid", mu_grid},
                      {"perturbation", perturbation}};
  j["surface"] = {{"tol_closed", tol_closed},
                  {"tol_conformal", tol_conformal},
                  {"tol_cmc", tol_cmc},
                  {"zero_tol", zero_tol}};
  j["output"] = {{"dir", out_dir}, {"copies", std::to_string(copies1) + "x" + std::to_string(copies2)}};
  j["run"] = {{"seed", seed}};
  return j;
}

std::pair<int, int> parse_copies(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ValidationError("copies", "expected K1xK2, got '" + text + "'");
  const int k1 = parse_int(text.substr(0, x), "copies");
  const int k2 = parse_int(text.substr(x + 1), "copies");
  if (k1 < 1 || k2 < 1) throw ValidationError("copies", "counts must be >= 1");
  return {k1, k2};
}

RunConfig parse_config_text(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("", source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError(section, "key outside of a section");
    for (const auto& [key, value] : body) {
      assign(c, section + "." + key, value.get_value<std::string>());
    }
  }
  return c;
}

RunConfig parse_config_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("", "config must be a JSON object");
  RunConfig c;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ValidationError(section, "expected an object");
    for (const auto& [key, value] : body.items()) {
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_array()) {
        for (const auto& v : value) text += v.dump() + " ";
      } else {
        text = value.dump();
      }
      assign(c, section + "." + key, text);
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig c;
  if (path.extension() == ".json") {
    c = parse_config_json(read_json(path));
  } else {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    c = parse_config_text(in, path.string());
  }
  c.validate();
  return c;
}

}  // namespace spindirac
