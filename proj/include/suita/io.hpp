#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "suita/errors.hpp"
#include "suita/geometry.hpp"
#include "suita/periods.hpp"

namespace suita {

// Shortest round-trip decimal representation; used everywhere output must be
// byte-deterministic.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError(what + ": malformed JSON");
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Domain spec:
// { "curves": [ {"kind":"circle","center":[x,y],"radius":r,"role":"outer"|"hole"
//               [,"anchor":[x,y]]}
//             | {"kind":"fourier","coeffs":[[re,im],...],"role":...} ] }
// Fourier coefficient i belongs to mode i - (len-1)/2 (odd length required).
inline PlanarDomain parse_domain(const std::string& text) {
  nlohmann::json j = parse_json_text(text, "domain spec");
  if (!j.is_object() || !j.contains("curves") || !j["curves"].is_array())
    throw ValidationError("domain spec: expected an object with a \"curves\" array");

  std::optional<BoundaryCurve> outer;
  std::vector<BoundaryCurve> holes;
  std::vector<std::optional<Complex>> anchors;
  for (const auto& c : j["curves"]) {
    if (!c.is_object() || !c.contains("kind") || !c.contains("role"))
      throw ValidationError("domain spec: each curve needs \"kind\" and \"role\"");
    std::string kind = c["kind"], role = c["role"];
    BoundaryCurve curve = [&] {
      if (kind == "circle") {
        if (!c.contains("center") || !c.contains("radius") || !c["center"].is_array() ||
            c["center"].size() != 2)
          throw ValidationError("domain spec: circle needs \"center\":[x,y] and \"radius\"");
        return BoundaryCurve::circle({c["center"][0].get<double>(), c["center"][1].get<double>()},
                                     c["radius"].get<double>());
      }
      if (kind == "fourier") {
        if (!c.contains("coeffs") || !c["coeffs"].is_array())
          throw ValidationError("domain spec: fourier curve needs \"coeffs\":[[re,im],...]");
        std::vector<Complex> coeffs;
        for (const auto& p : c["coeffs"]) {
          if (!p.is_array() || p.size() != 2)
            throw ValidationError("domain spec: fourier coefficients must be [re,im] pairs");
          coeffs.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        return BoundaryCurve::fourier(std::move(coeffs));
      }
      throw ValidationError("domain spec: unknown curve kind \"" + kind + "\"");
    }();
    if (role == "outer") {
      if (outer) throw ValidationError("domain spec: more than one outer curve");
      outer = std::move(curve);
    } else if (role == "hole") {
      holes.push_back(std::move(curve));
      if (c.contains("anchor")) {
        if (!c["anchor"].is_array() || c["anchor"].size() != 2)
          throw ValidationError("domain spec: anchor must be [x,y]");
        anchors.push_back(Complex(c["anchor"][0].get<double>(), c["anchor"][1].get<double>()));
      } else {
        anchors.push_back(std::nullopt);
      }
    } else {
      throw ValidationError("domain spec: role must be \"outer\" or \"hole\"");
    }
  }
  if (!outer) throw ValidationError("domain spec: exactly one curve must have role \"outer\"");
  return PlanarDomain(std::move(*outer), std::move(holes), std::move(anchors));
}

inline PlanarDomain load_domain(const std::string& path) { return parse_domain(read_file(path)); }

// Weight spec:
// {"k":int, "a":real, "c":{"kind":"one"|"exp","beta":real},
//  "v":{"logs":[{"q":[x,y],"s":real}], "poly":[[re,im],...]}}
// Defaults: a = k+1, c = one, v = 0. A --k override replaces k (and the
// default a tracks it unless a is given explicitly).
inline WeightSpec parse_weight(const std::string& text, std::optional<int> k_override = {}) {
  nlohmann::json j = parse_json_text(text, "weight spec");
  if (!j.is_object()) throw ValidationError("weight spec: expected a JSON object");
  WeightSpec w;
  w.k = j.value("k", 0);
  if (k_override) w.k = *k_override;
  if (j.contains("a"))
    w.a = j["a"].get<double>();
  else
    w.a = w.k + 1.0;
  if (j.contains("c")) {
    const auto& c = j["c"];
    std::string kind = c.value("kind", "one");
    if (kind == "one") {
      w.c_family = CFamily::One;
    } else if (kind == "exp") {
      w.c_family = CFamily::ExpDecay;
      w.beta = c.value("beta", 0.0);
    } else {
      throw ValidationError("weight spec: c kind must be \"one\" or \"exp\"");
    }
  }
  if (j.contains("v")) {
    const auto& v = j["v"];
    if (v.contains("logs"))
      for (const auto& l : v["logs"]) {
        if (!l.contains("q") || !l["q"].is_array() || l["q"].size() != 2 || !l.contains("s"))
          throw ValidationError("weight spec: each log term needs \"q\":[x,y] and \"s\"");
        w.charges.push_back(
            {{l["q"][0].get<double>(), l["q"][1].get<double>()}, l["s"].get<double>()});
      }
    if (v.contains("poly"))
      for (const auto& p : v["poly"]) {
        if (!p.is_array() || p.size() != 2)
          throw ValidationError("weight spec: poly coefficients must be [re,im] pairs");
        w.poly.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
  }
  return w;
}

inline WeightSpec load_weight(const std::string& path, std::optional<int> k_override = {}) {
  return parse_weight(read_file(path), k_override);
}

// Points CSV: one "x,y" pair per line; lines that do not start with a number
// (headers, comments) are skipped.
inline std::vector<Complex> parse_points_csv(const std::string& text) {
  std::vector<Complex> pts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x, y;
    char comma;
    if ((ls >> x >> comma >> y) && comma == ',') pts.emplace_back(x, y);
  }
  return pts;
}

}  // namespace suita
