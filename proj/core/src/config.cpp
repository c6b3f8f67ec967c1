#include "triconv/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "triconv/errors.hpp"

namespace triconv {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(std::string_view value, int line) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    throw ConfigError("line " + std::to_string(line) + ": phi must be a bracketed list like [c5, c6]");
  }
  std::vector<double> out;
  std::string_view body = trim(value.substr(1, value.size() - 2));
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = trim(body.substr(0, comma));
    out.push_back(parse_real(item, "phi[" + std::to_string(out.size()) + "]"));
    if (comma == std::string_view::npos) break;
    body = trim(body.substr(comma + 1));
    if (body.empty()) throw ConfigError("line " + std::to_string(line) + ": trailing comma in phi");
  }
  return out;
}

}  // namespace

double parse_real(std::string_view token, std::string_view what) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(token) + "'");
  }
  return value;
}

CurveParams parse_curve_params(std::string_view text) {
  CurveParams p;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (key == "r") {
      p.r = parse_real(value, "r");
    } else if (key == "lambda") {
      p.lambda = parse_real(value, "lambda");
    } else if (key == "a") {
      p.a = parse_real(value, "a");
    } else if (key == "phi") {
      p.phi = parse_list(value, line_no);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  for (const char* required : {"r", "lambda", "a"}) {
    if (!seen.contains(required)) throw ConfigError(std::string("missing required key '") + required + "'");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

CurveParams load_curve_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curve_params(ss.str());
}

}  // namespace triconv
