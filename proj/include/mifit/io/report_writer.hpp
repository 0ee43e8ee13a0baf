#pragma once

// Deterministic JSON emitter: keys keep insertion order, floating point values
// are printed with 17 significant digits, arrays of scalars stay on one line.

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace mifit::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline void write_scalar(const Json& j, std::string& out) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    out += buf;
  } else {
    out += j.dump();
  }
}

inline bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

inline void write(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(it.key()).dump() + ": ";
      write(it.value(), out, indent + 1);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (is_flat(j)) {
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ", ";
        first = false;
        write_scalar(e, out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += inner;
      write(e, out, indent + 1);
    }
    out += "\n" + pad + "]";
  } else {
    write_scalar(j, out);
  }
}

}  // namespace detail

inline std::string to_report_string(const Json& j) {
  std::string out;
  detail::write(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace mifit::io
