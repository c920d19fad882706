#include <cerrno>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "repsale/errors.hpp"

namespace repsale::cli {

namespace {

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(x)) throw ParseError("not a number: '" + text + "'");
  return x;
}

std::vector<double> number_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("model is missing '") + key + "'");
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : arr) {
    if (!x.is_number()) throw ParseError(std::string("'") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ParseError(std::string("model needs a numeric '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

std::vector<double> parse_mu_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  std::vector<double> grid;
  if (parts.size() == 1) {
    grid.push_back(parse_number(parts[0]));
  } else if (parts.size() == 3) {
    const double start = parse_number(parts[0]);
    const double end = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0)) throw ParseError("grid step must be positive");
    if (start > end) throw ParseError("empty mu grid: start exceeds end");
    const auto steps = static_cast<long>(std::floor((end - start) / step + 1e-9));
    for (long i = 0; i <= steps; ++i) grid.push_back(start + static_cast<double>(i) * step);
    if (std::abs(grid.back() - end) <= 1e-9 * std::max(1.0, step)) grid.back() = end;
  } else {
    throw ParseError("mu grid must be a value or start:end:step");
  }
  for (double mu : grid)
    if (!(mu >= 0.0 && mu <= 1.0)) throw ParseError("mu values must lie in [0,1]");
  return grid;
}

infinite::DiscreteModel parse_model(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("model must be a JSON object");
  static const std::set<std::string> known{"values", "probs_naive", "probs_soph", "mu", "delta"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ParseError("unknown model key '" + key + "'");
  infinite::DiscreteModel m{number_list(j, "values"), number_list(j, "probs_naive"), number_list(j, "probs_soph"),
                            number(j, "mu"), number(j, "delta")};
  try {
    m.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
  return m;
}

infinite::DiscreteModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed model file '" + path + "': " + e.what());
  }
  return parse_model(j);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into '" + path + "'");
  }
}

}  // namespace repsale::cli
