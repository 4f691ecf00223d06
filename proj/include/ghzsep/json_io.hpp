#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

// Minimal streaming JSON emitter. Field order is exactly insertion order and
// numbers carry 17 significant digits, so doubles round-trip bit-exactly and
// byte-level golden files are reproducible.

namespace ghzsep {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

class JsonWriter {
 public:
  void begin_object() {
    prefix_value();
    out_ += '{';
    stack_.push_back({false, 0});
  }
  void end_object() {
    out_ += '}';
    stack_.pop_back();
  }
  void begin_array() {
    prefix_value();
    out_ += '[';
    stack_.push_back({true, 0});
  }
  void end_array() {
    out_ += ']';
    stack_.pop_back();
  }
  void key(std::string_view k) {
    if (stack_.back().count++ > 0) out_ += ',';
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\":";
    have_key_ = true;
  }
  void value(double v) {
    prefix_value();
    out_ += format_number(v);
  }
  void value(bool v) {
    prefix_value();
    out_ += v ? "true" : "false";
  }
  void value(std::uint64_t v) {
    prefix_value();
    out_ += std::to_string(v);
  }
  void value(int v) { value(static_cast<std::uint64_t>(v)); }
  void value(std::string_view v) {
    prefix_value();
    out_ += '"';
    out_ += json_escape(v);
    out_ += '"';
  }
  void value(const char* v) { value(std::string_view(v)); }
  void value_null() {
    prefix_value();
    out_ += "null";
  }
  // Complex numbers serialize as [re, im]; never as strings.
  void value(std::complex<double> v) {
    begin_array();
    value(v.real());
    value(v.imag());
    end_array();
  }

  const std::string& str() const { return out_; }

 private:
  struct Scope {
    bool is_array;
    int count;
  };

  void prefix_value() {
    if (stack_.empty()) return;
    if (have_key_) {
      have_key_ = false;
      return;
    }
    if (stack_.back().is_array && stack_.back().count++ > 0) out_ += ',';
  }

  std::string out_;
  std::vector<Scope> stack_;
  bool have_key_ = false;
};

}  // namespace ghzsep
