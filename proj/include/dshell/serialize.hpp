#pragma once

// Text output: JSON documents with numbers at 17 significant digits (so every
// double round-trips exactly) and '.'-separated CSV, independent of locale.
// Parsing back uses nlohmann::json.

#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dshell/errors.hpp"
#include "dshell/numerics.hpp"
#include "dshell/spectrum.hpp"

namespace dshell {

inline constexpr std::string_view kSchema = "dirac-shell/1";

/// %.17g without locale; integral values get a trailing ".0". Non-finite
/// values become null (JSON has no representation for them).
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

/// Streaming JSON writer with fixed key order. Handles commas; the caller
/// handles nesting.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(std::string_view k) {
    separator();
    out_ += quote(k);
    out_ += ':';
    after_key_ = true;
    return *this;
  }
  JsonWriter& value(double v) { return raw(format_number(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::size_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(std::string_view v) { return raw(quote(v)); }
  JsonWriter& value(const char* v) { return raw(quote(v)); }
  JsonWriter& value(cplx v) {
    begin_array();
    value(v.real());
    value(v.imag());
    return end_array();
  }
  JsonWriter& value(const Mat2C& a) {
    begin_array();
    begin_array().value(a.a11).value(a.a12).end_array();
    begin_array().value(a.a21).value(a.a22).end_array();
    return end_array();
  }
  JsonWriter& null() { return raw("null"); }

  template <class T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  const std::string& str() const { return out_; }

 private:
  JsonWriter& raw(std::string_view s) {
    separator();
    out_ += s;
    return *this;
  }
  JsonWriter& open(char ch) {
    separator();
    out_ += ch;
    first_ = true;
    return *this;
  }
  JsonWriter& close(char ch) {
    out_ += ch;
    first_ = false;
    return *this;
  }
  void separator() {
    if (after_key_) {
      after_key_ = false;
      first_ = false;
      return;
    }
    if (!first_ && !out_.empty()) out_ += ',';
    first_ = false;
  }

  std::string out_;
  bool first_ = true;
  bool after_key_ = false;
};

inline void write_component(JsonWriter& w, const SpectralComponent& c) {
  w.begin_object();
  w.field("kind", to_string(c.kind));
  switch (c.kind) {
    case ComponentKind::RayLeft: w.field("endpoint", c.hi); break;
    case ComponentKind::RayRight: w.field("endpoint", c.lo); break;
    case ComponentKind::Point: w.field("value", c.lo); break;
    case ComponentKind::FullLine: break;
  }
  if (c.kind != ComponentKind::Point) w.field("closed", c.closed);
  w.field("type", to_string(c.type));
  if (c.multiplicity) {
    w.key("multiplicity");
    if (c.multiplicity->infinite) w.value("infinite"); else w.value(c.multiplicity->count);
  }
  w.end_object();
}

/// The "components" array alone; equal strings mean equal spectral sets.
inline std::string spectrum_components_json(const SpectrumDescription& s) {
  JsonWriter w;
  w.begin_array();
  for (const auto& c : s.components) write_component(w, c);
  w.end_array();
  return w.str();
}

inline std::string spectrum_json(const SpectrumDescription& s) {
  JsonWriter w;
  w.begin_object();
  w.field("schema", kSchema);
  w.field("eta", s.params.eta());
  w.field("m", s.params.m());
  w.field("critical", s.params.critical());
  w.key("components").begin_array();
  for (const auto& c : s.components) write_component(w, c);
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

namespace detail {

inline double json_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("spectrum json: '") + what + "' must be a number");
  return j.get<double>();
}

}  // namespace detail

/// Inverse of spectrum_json.
inline SpectrumDescription parse_spectrum_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("spectrum json: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != kSchema) {
    throw ParseError("spectrum json: missing or unknown schema");
  }
  SpectrumDescription out;
  out.params = ShellParams::make(detail::json_number(doc.at("eta"), "eta"),
                                 detail::json_number(doc.at("m"), "m"));
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const auto& c : doc.at("components")) {
    const std::string kind = c.at("kind").get<std::string>();
    const std::string type = c.at("type").get<std::string>();
    SpectralComponent comp;
    if (kind == "ray-left") {
      comp = SpectralComponent::ray_left(detail::json_number(c.at("endpoint"), "endpoint"));
    } else if (kind == "ray-right") {
      comp = SpectralComponent::ray_right(detail::json_number(c.at("endpoint"), "endpoint"));
    } else if (kind == "full-line") {
      comp = SpectralComponent::full_line();
      comp.lo = -inf;
      comp.hi = inf;
    } else if (kind == "point") {
      const double v = detail::json_number(c.at("value"), "value");
      comp = {ComponentKind::Point, v, v, true, SpectralType::Eigenvalue, std::nullopt};
    } else {
      throw ParseError("spectrum json: unknown component kind '" + kind + "'");
    }
    if (type == "continuous") {
      comp.type = SpectralType::Continuous;
    } else if (type == "eigenvalue") {
      comp.type = SpectralType::Eigenvalue;
    } else {
      throw ParseError("spectrum json: unknown spectral type '" + type + "'");
    }
    if (c.contains("closed")) comp.closed = c.at("closed").get<bool>();
    comp.multiplicity.reset();
    if (c.contains("multiplicity")) {
      const auto& mult = c.at("multiplicity");
      if (mult.is_string() && mult.get<std::string>() == "infinite") {
        comp.multiplicity = Multiplicity{true, 0};
      } else if (mult.is_number_unsigned()) {
        comp.multiplicity = Multiplicity{false, mult.get<std::size_t>()};
      } else {
        throw ParseError("spectrum json: bad multiplicity");
      }
    }
    out.components.push_back(comp);
  }
  return out;
}

/// Minimal CSV builder: header once, then rows of numbers.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ += ',';
      out_ += header[i];
    }
    out_ += '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ += ',';
      out_ += format_number(values[i]);
    }
    out_ += '\n';
  }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

}  // namespace dshell
