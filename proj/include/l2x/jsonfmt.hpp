#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace l2x {

// Streaming JSON writer with a fixed float format ("%.12g") so that output
// is byte-identical across runs and thread counts. Non-finite values are
// emitted as the strings "inf", "-inf" and "nan".
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    comma();
    out_ += '{';
    stack_.push_back(false);
    return *this;
  }

  JsonWriter& end_object() {
    out_ += '}';
    stack_.pop_back();
    mark();
    return *this;
  }

  JsonWriter& begin_array() {
    comma();
    out_ += '[';
    stack_.push_back(false);
    return *this;
  }

  JsonWriter& end_array() {
    out_ += ']';
    stack_.pop_back();
    mark();
    return *this;
  }

  JsonWriter& key(std::string_view k) {
    comma();
    quote(k);
    out_ += ':';
    if (!stack_.empty()) stack_.back() = false;
    return *this;
  }

  JsonWriter& value(double v) {
    comma();
    if (std::isnan(v)) {
      out_ += "\"nan\"";
    } else if (std::isinf(v)) {
      out_ += v > 0 ? "\"inf\"" : "\"-inf\"";
    } else {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      out_ += buf;
    }
    mark();
    return *this;
  }

  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }

  JsonWriter& value(long long v) {
    comma();
    out_ += std::to_string(v);
    mark();
    return *this;
  }

  JsonWriter& value(std::size_t v) {
    comma();
    out_ += std::to_string(v);
    mark();
    return *this;
  }

  JsonWriter& value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    mark();
    return *this;
  }

  JsonWriter& value(std::string_view v) {
    comma();
    quote(v);
    mark();
    return *this;
  }

  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  const std::string& str() const { return out_; }

 private:
  void comma() {
    if (!stack_.empty() && stack_.back()) out_ += ',';
  }

  // After a complete value, the next sibling needs a separating comma.
  // A key resets the flag so its value attaches without one.
  void mark() {
    if (!stack_.empty()) stack_.back() = true;
  }

  void quote(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;
};

// Formats one double the same way JsonWriter does; shared with CSV output.
inline std::string num12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace l2x
