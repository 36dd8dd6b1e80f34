#include "spindirac/field_io.hpp"

#include <fstream>

namespace spindirac {

namespace {

Json pack(std::span<const cplx> v) {
  Json out = Json::array();
  for (const cplx& z : v) {
    out.push_back(z.real());
    out.push_back(z.imag());
  }
  return out;
}

std::vector<cplx> unpack(const Json& arr, std::size_t count, const char* field) {
  if (!arr.is_array() || arr.size() != 2 * count) {
    throw ValidationError(field, "expected " + std::to_string(2 * count) + " numbers");
  }
  std::vector<cplx> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = cplx(arr[2 * i].get<double>(), arr[2 * i + 1].get<double>());
  }
  return out;
}

Vec2 vec_from(const Json& j, const char* field) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(field, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json field_to_json(const SpinorField& phi) {
  Json j;
  j["lattice"] = {{"gamma1", {phi.lattice().gamma1().x, phi.lattice().gamma1().y}},
                  {"gamma2", {phi.lattice().gamma2().x, phi.lattice().gamma2().y}}};
  j["spin"] = {phi.spin().eps1, phi.spin().eps2};
  j["n_grid"] = phi.n();
  j["layout"] = "row-major (j, l), sample at (j/n)*gamma1 + (l/n)*gamma2, interleaved re, im";
  j["plus"] = pack(phi.plus());
  j["minus"] = pack(phi.minus());
  return j;
}

SpinorField field_from_json(const Json& j) {
  try {
    const Lattice lat(vec_from(j.at("lattice").at("gamma1"), "lattice.gamma1"),
                      vec_from(j.at("lattice").at("gamma2"), "lattice.gamma2"));
    const Json& s = j.at("spin");
    if (!s.is_array() || s.size() != 2) throw ValidationError("spin", "expected [eps1, eps2]");
    const SpinStructure spin(s[0].get<int>(), s[1].get<int>());
    const int n = j.at("n_grid").get<int>();
    if (n < 4 || n % 2 != 0) throw ValidationError("n_grid", "must be even and >= 4");
    const std::size_t count = static_cast<std::size_t>(n) * n;
    return SpinorField(lat, spin, n, unpack(j.at("plus"), count, "plus"),
                       unpack(j.at("minus"), count, "minus"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("", std::string("malformed spinor field: ") + e.what());
  } catch (const InvalidLatticeError& e) {
    throw ValidationError("lattice", e.what());
  }
}

Json solution_to_json(const Solution& sol, const std::vector<TraceEntry>& trace) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "solution";
  const Json field = field_to_json(sol.phi);
  for (const auto& [k, v] : field.items()) j[k] = v;
  j["lambda"] = sol.lambda;
  j["p"] = sol.p;
  j["residual"] = sol.residual;
  j["norm_p"] = sol.norm_p;
  Json tr = Json::array();
  for (const auto& t : trace) {
    tr.push_back({{"p", t.p},
                  {"lambda", t.lambda},
                  {"sup_norm", t.sup_norm},
                  {"residual", t.residual},
                  {"newton_iterations", t.newton_iterations}});
  }
  j["trace"] = tr;
  return j;
}

Solution solution_from_json(const Json& j) {
  try {
    if (j.value("kind", std::string()) != "solution") {
      throw ValidationError("kind", "not a solution file");
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw ValidationError("schema_version", "unsupported version");
    }
    Solution sol{field_from_json(j), j.at("lambda").get<double>(), j.at("p").get<double>(),
                 j.value("residual", 0.0), j.value("norm_p", 0.0), 0.0};
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("", std::string("malformed solution: ") + e.what());
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing: " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("", path.string() + ": " + e.what());
  }
}

void save_solution(const Solution& sol, const std::filesystem::path& path,
                   const std::vector<TraceEntry>& trace) {
  write_json(solution_to_json(sol, trace), path);
}

Solution load_solution(const std::filesystem::path& path) {
  try {
    return solution_from_json(read_json(path));
  } catch (const ValidationError& e) {
    throw ValidationError(e.field(), path.string() + ": " + e.what());
  }
}

}  // namespace spindirac
