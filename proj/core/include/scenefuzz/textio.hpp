#pragma once

// Line-oriented "key: value" documents with two-space indentation. Every
// persisted format (scenarios, detector profiles, campaign configs) goes
// through this reader/writer so diagnostics and number formatting stay
// uniform and saves are byte-reproducible.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scenefuzz::textio {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

struct Node {
  std::string key;
  std::string value;  // empty for block headers
  int line = 0;
  std::vector<Node> children;

  const Node* find(std::string_view child_key) const;
  const Node& require(std::string_view child_key) const;
  bool has(std::string_view child_key) const { return find(child_key) != nullptr; }
};

// Parses a whole document into a root node (empty key). Blank lines and
// lines starting with '#' are skipped; indentation is two spaces per level.
Node parse_document(std::string_view text);

class Writer {
 public:
  void field(std::string_view key, std::string_view value);
  void field(std::string_view key, double v);
  void field(std::string_view key, std::int64_t v);
  void field(std::string_view key, std::uint64_t v);
  void field(std::string_view key, int v) { field(key, static_cast<std::int64_t>(v)); }
  void open(std::string_view key);  // emits "key:" and indents
  void close();
  void raw_line(std::string_view line);
  const std::string& str() const { return out_; }

 private:
  void indent();
  std::string out_;
  int depth_ = 0;
};

// Shortest decimal form that parses back to the identical value.
std::string fmt_double(double v);
std::string fmt_u64(std::uint64_t v);
std::string fmt_i64(std::int64_t v);

double parse_double(std::string_view token, int line);
std::int64_t parse_i64(std::string_view token, int line);
std::uint64_t parse_u64(std::string_view token, int line);

std::vector<std::string_view> split_tokens(std::string_view s);

double as_double(const Node& n);
std::int64_t as_i64(const Node& n);
std::uint64_t as_u64(const Node& n);
// For "x y" values.
std::pair<double, double> as_pair(const Node& n);

// Rejects children outside `allowed` and duplicates outside `repeatable`.
void check_fields(const Node& block,
                  std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> repeatable = {});

std::string read_file(const std::string& path);  // IoError on failure
void write_file(const std::string& path, std::string_view contents);

}  // namespace scenefuzz::textio
