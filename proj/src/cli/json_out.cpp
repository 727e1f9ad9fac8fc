#include "json_out.hpp"

#include <cmath>
#include <cstdio>

namespace ew::cli {

Json Json::object() {
  Json j;
  j.kind_ = Kind::Object;
  return j;
}

Json Json::array() {
  Json j;
  j.kind_ = Kind::Array;
  return j;
}

Json Json::str(std::string s) {
  Json j;
  j.kind_ = Kind::Str;
  j.str_ = std::move(s);
  return j;
}

Json Json::num(double v) {
  Json j;
  j.kind_ = Kind::Num;
  j.num_ = v;
  return j;
}

Json Json::integer(long long v) {
  Json j;
  j.kind_ = Kind::Int;
  j.int_ = v;
  return j;
}

Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::Bool;
  j.bool_ = v;
  return j;
}

Json& Json::set(const std::string& key, Json v) {
  members_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  elements_.push_back(std::move(v));
  return *this;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void Json::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (kind_) {
    case Kind::Object: {
      if (members_.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad;
        out += '"' + json_escape(members_[i].first) + "\":";
        if (indent > 0) out += ' ';
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += nl;
      }
      out += close_pad + "}";
      return;
    }
    case Kind::Array: {
      if (elements_.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        out += pad;
        elements_[i].write(out, indent, depth + 1);
        if (i + 1 < elements_.size()) out += ',';
        out += nl;
      }
      out += close_pad + "]";
      return;
    }
    case Kind::Str:
      out += '"' + json_escape(str_) + '"';
      return;
    case Kind::Num:
      out += format_double(num_);
      return;
    case Kind::Int:
      out += std::to_string(int_);
      return;
    case Kind::Bool:
      out += bool_ ? "true" : "false";
      return;
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

bool Json::scalar() const {
  return kind_ == Kind::Str || kind_ == Kind::Num || kind_ == Kind::Int ||
         kind_ == Kind::Bool;
}

std::string Json::scalar_text() const {
  switch (kind_) {
    case Kind::Str: return str_;
    case Kind::Num: return format_double(num_);
    case Kind::Int: return std::to_string(int_);
    case Kind::Bool: return bool_ ? "true" : "false";
    default: return "";
  }
}

void Json::write_text(std::string& out, int depth) const {
  const std::string pad(static_cast<std::size_t>(2) * depth, ' ');
  if (kind_ == Kind::Object) {
    for (const auto& [key, value] : members_) {
      if (value.scalar()) {
        out += pad + key + ": " + value.scalar_text() + "\n";
        continue;
      }
      if (value.is_array()) {
        bool all_scalar = true;
        for (const auto& e : value.elements_)
          if (!e.scalar()) all_scalar = false;
        if (all_scalar) {
          out += pad + key + ": [";
          for (std::size_t i = 0; i < value.elements_.size(); ++i) {
            if (i) out += ", ";
            out += value.elements_[i].scalar_text();
          }
          out += "]\n";
          continue;
        }
      }
      out += pad + key + ":\n";
      value.write_text(out, depth + 1);
    }
    return;
  }
  if (kind_ == Kind::Array) {
    for (const auto& e : elements_) {
      if (e.scalar()) {
        out += pad + "- " + e.scalar_text() + "\n";
      } else {
        out += pad + "-\n";
        e.write_text(out, depth + 1);
      }
    }
    return;
  }
  out += pad + scalar_text() + "\n";
}

std::string Json::render_text() const {
  std::string out;
  write_text(out, 0);
  return out;
}

}  // namespace ew::cli
