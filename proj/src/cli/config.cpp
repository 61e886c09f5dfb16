#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "meissner/cli.hpp"
#include "meissner/constants.hpp"
#include "meissner/error.hpp"

namespace meissner::cli {
namespace {

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || end != last || !std::isfinite(value))
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  unsigned long long value = 0;
  const char* last = text.data() + text.size();
  const auto [end, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || end != last) throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  return static_cast<std::size_t>(value);
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

Setter real(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_real(k, v); };
}

template <typename Fn>
Setter real_with(Fn fn) {
  return [fn](RunConfig& c, const std::string& k, const std::string& v) { fn(c, parse_real(k, v)); };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"geometry", {{"r0", real(&RunConfig::r0)}, {"lambda", real(&RunConfig::lambda)}}},
      {"field",
       {{"b0x", real_with([](RunConfig& c, double v) { c.b0.b0x = v; })},
        {"b0y", real_with([](RunConfig& c, double v) { c.b0.b0y = v; })}}},
      {"atom",
       {{"mass", real_with([](RunConfig& c, double v) { c.atom.mass = v; })},
        {"moment", real_with([](RunConfig& c, double v) { c.atom.moment = v; })},
        {"moment_sign", [](RunConfig& c, const std::string& k, const std::string& v) {
           if (v == "+1" || v == "1" || v == "positive")
             c.atom.sign = MomentSign::positive;
           else if (v == "-1" || v == "negative")
             c.atom.sign = MomentSign::negative;
           else
             throw ConfigError(k, "expected +1, -1, positive or negative, got '" + v + "'");
         }}}},
      {"interferometer",
       {{"kx", real_with([](RunConfig& c, double v) { c.pulses.kx = v; })},
        {"ky", real_with([](RunConfig& c, double v) { c.pulses.ky = v; })},
        {"t_sep", real_with([](RunConfig& c, double v) { c.pulses.t_sep = v; })},
        {"kick_order",
         [](RunConfig& c, const std::string& k, const std::string& v) {
           c.pulses.kick_order = static_cast<int>(parse_count(k, v));
         }},
        {"x0", real_with([](RunConfig& c, double v) { c.anchor.x0 = v; })},
        {"y0", real_with([](RunConfig& c, double v) { c.anchor.y0 = v; })},
        {"gz", real(&RunConfig::gz)},
        {"dgx", real_with([](RunConfig& c, double v) { c.dg.dgx = v; })},
        {"dgy", real_with([](RunConfig& c, double v) { c.dg.dgy = v; })},
        {"min_gradient", real_with([](RunConfig& c, double v) { c.limits.min_gradient = v; })},
        {"warn_condition", real_with([](RunConfig& c, double v) { c.limits.warn_condition = v; })},
        {"max_condition", real_with([](RunConfig& c, double v) { c.limits.max_condition = v; })},
        {"gamma_convention", [](RunConfig& c, const std::string& k, const std::string& v) {
           if (v == "closed_form")
             c.convention = GammaConvention::closed_form;
           else if (v == "exact_gradient")
             c.convention = GammaConvention::exact_gradient;
           else
             throw ConfigError(k, "expected closed_form or exact_gradient, got '" + v + "'");
         }}}},
      {"grid",
       {{"x_min", real_with([](RunConfig& c, double v) { c.grid.x_min = v; })},
        {"x_max", real_with([](RunConfig& c, double v) { c.grid.x_max = v; })},
        {"y_min", real_with([](RunConfig& c, double v) { c.grid.y_min = v; })},
        {"y_max", real_with([](RunConfig& c, double v) { c.grid.y_max = v; })},
        {"nx", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.nx = parse_count(k, v); }},
        {"ny", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.ny = parse_count(k, v); }}}},
  };
  return table;
}

template <typename Fn>
void check(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

PulseSequence RunConfig::default_pulses() {
  PulseSequence p;
  p.kx = 2.0 * constants::pi / constants::rb87_d2_wavelength;
  p.ky = 0.0;
  p.t_sep = 0.16;
  return p;
}

RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.message() + " at line " + std::to_string(e.line()));
  }

  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "key outside any section");
    const auto found = schema().find(section);
    if (found == schema().end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto setter = found->second.find(key);
      if (setter == found->second.end()) throw ConfigError(full, "unknown key");
      setter->second(cfg, full, value.data());
    }
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  return parse_config(in);
}

void validate_config(const RunConfig& cfg) {
  check("geometry", [&] { (void)cfg.geometry(); });
  if (!std::isfinite(cfg.b0.b0x) || !std::isfinite(cfg.b0.b0y)) throw ConfigError("field", "must be finite");
  check("atom", [&] { cfg.atom.validate(); });
  check("interferometer", [&] { cfg.pulses.validate(); });
  if (!(cfg.anchor.radius() > cfg.r0))
    throw ConfigError("interferometer.x0", "anchor (x0, y0) must lie outside the cylinder");
  if (!(cfg.dg.dgx >= 0.0)) throw ConfigError("interferometer.dgx", "must be >= 0");
  if (!(cfg.dg.dgy >= 0.0)) throw ConfigError("interferometer.dgy", "must be >= 0");
  if (!(cfg.limits.min_gradient >= 0.0)) throw ConfigError("interferometer.min_gradient", "must be >= 0");
  if (!(cfg.limits.warn_condition >= 1.0)) throw ConfigError("interferometer.warn_condition", "must be >= 1");
  if (!(cfg.limits.max_condition >= cfg.limits.warn_condition))
    throw ConfigError("interferometer.max_condition", "must be >= warn_condition");
  check("grid", [&] { cfg.grid.validate(); });
}

}  // namespace meissner::cli
