#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ew::cli {

// Order-preserving JSON tree with pinned float formatting: identical
// content dumps to byte-identical text, independent of build or platform
// hash seeds.
class Json {
 public:
  static Json object();
  static Json array();
  static Json str(std::string s);
  static Json num(double v);
  static Json integer(long long v);
  static Json boolean(bool v);

  // Appends a key (objects) or element (arrays); keys keep insertion order.
  Json& set(const std::string& key, Json v);
  Json& push(Json v);

  bool is_object() const { return kind_ == Kind::Object; }
  bool is_array() const { return kind_ == Kind::Array; }

  std::string dump(int indent = 2) const;

  // Human-readable indented key/value rendering of the same tree.
  std::string render_text() const;

 private:
  enum class Kind { Object, Array, Str, Num, Int, Bool };
  Kind kind_ = Kind::Object;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> elements_;

  void write(std::string& out, int indent, int depth) const;
  void write_text(std::string& out, int depth) const;
  bool scalar() const;
  std::string scalar_text() const;
};

// 17 significant digits; non-finite values render as null.
std::string format_double(double v);

std::string json_escape(const std::string& s);

// FNV-1a 64-bit, usable incrementally.
std::uint64_t fnv1a(const std::string& bytes,
                    std::uint64_t h = 14695981039346656037ull);

}  // namespace ew::cli
