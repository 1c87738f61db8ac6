#include "scenefuzz/textio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "scenefuzz/errors.hpp"

namespace scenefuzz::textio {

const Node* Node::find(std::string_view child_key) const {
  for (const Node& c : children)
    if (c.key == child_key) return &c;
  return nullptr;
}

const Node& Node::require(std::string_view child_key) const {
  const Node* c = find(child_key);
  if (!c)
    throw ParseError(line, "missing required field '" + std::string(child_key) +
                               "' in '" + (key.empty() ? "document" : key) + "'");
  return *c;
}

void check_fields(const Node& block,
                  std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> repeatable) {
  for (const Node& c : block.children) {
    bool ok = false;
    for (std::string_view k : allowed)
      if (c.key == k) ok = true;
    if (!ok) throw ParseError(c.line, "unknown field '" + c.key + "'");
    bool repeat_ok = false;
    for (std::string_view k : repeatable)
      if (c.key == k) repeat_ok = true;
    if (repeat_ok) continue;
    int count = 0;
    for (const Node& d : block.children)
      if (d.key == c.key) ++count;
    if (count > 1) throw ParseError(c.line, "duplicate field '" + c.key + "'");
  }
}

Node parse_document(std::string_view text) {
  Node root;
  std::vector<Node*> stack{&root};
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? text.size() - pos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::size_t spaces = 0;
    while (spaces < line.size() && line[spaces] == ' ') ++spaces;
    std::string_view body = line.substr(spaces);
    if (body.empty() || body[0] == '#') continue;
    if (body[0] == '\t')
      throw ParseError(line_no, "tab indentation is not supported");
    if (spaces % 2 != 0)
      throw ParseError(line_no, "indentation must be a multiple of two spaces");
    std::size_t depth = spaces / 2;
    if (depth + 1 > stack.size())
      throw ParseError(line_no, "indentation jumps more than one level");
    stack.resize(depth + 1);

    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line_no, "expected 'key: value' or 'key:'");
    std::string_view key = body.substr(0, colon);
    if (key.empty()) throw ParseError(line_no, "empty key");
    std::string_view value = body.substr(colon + 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\r'))
      value.remove_suffix(1);

    Node n;
    n.key = std::string(key);
    n.value = std::string(value);
    n.line = line_no;
    stack[depth]->children.push_back(std::move(n));
    stack.push_back(&stack[depth]->children.back());
  }
  return root;
}

void Writer::indent() {
  for (int i = 0; i < depth_; ++i) out_ += "  ";
}

void Writer::field(std::string_view key, std::string_view value) {
  indent();
  out_ += key;
  out_ += ": ";
  out_ += value;
  out_ += '\n';
}

void Writer::field(std::string_view key, double v) { field(key, fmt_double(v)); }
void Writer::field(std::string_view key, std::int64_t v) { field(key, fmt_i64(v)); }
void Writer::field(std::string_view key, std::uint64_t v) { field(key, fmt_u64(v)); }

void Writer::open(std::string_view key) {
  indent();
  out_ += key;
  out_ += ":\n";
  ++depth_;
}

void Writer::close() { --depth_; }

void Writer::raw_line(std::string_view line) {
  out_ += line;
  out_ += '\n';
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_u64(std::uint64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_i64(std::int64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T parse_number(std::string_view token, int line, const char* what) {
  T value{};
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
    throw ParseError(line, std::string("expected ") + what + ", got '" +
                               std::string(token) + "'");
  return value;
}

}  // namespace

double parse_double(std::string_view token, int line) {
  return parse_number<double>(token, line, "a number");
}

std::int64_t parse_i64(std::string_view token, int line) {
  return parse_number<std::int64_t>(token, line, "an integer");
}

std::uint64_t parse_u64(std::string_view token, int line) {
  return parse_number<std::uint64_t>(token, line, "an unsigned integer");
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double as_double(const Node& n) { return parse_double(n.value, n.line); }
std::int64_t as_i64(const Node& n) { return parse_i64(n.value, n.line); }
std::uint64_t as_u64(const Node& n) { return parse_u64(n.value, n.line); }

std::pair<double, double> as_pair(const Node& n) {
  auto toks = split_tokens(n.value);
  if (toks.size() != 2)
    throw ParseError(n.line, "expected two numbers in '" + n.key + "'");
  return {parse_double(toks[0], n.line), parse_double(toks[1], n.line)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace scenefuzz::textio
