#include "bilin/instance_io.hpp"

#include "bilin/error.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace bilin {

namespace {

void put_number(std::ostringstream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

void put_matrix(std::ostringstream& os, const char* name, const Matrix& m) {
  os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ' ';
      put_number(os, m(i, j));
    }
    os << '\n';
  }
}

void put_vector(std::ostringstream& os, const char* name, const Vector& v) {
  os << "vector " << name << ' ' << v.size() << '\n';
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) os << ' ';
    put_number(os, v[i]);
  }
  os << '\n';
}

struct Parsed {
  std::map<std::string, std::string> keys;
  std::map<std::string, Matrix> matrices;
  std::map<std::string, Vector> vectors;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : input_(std::string(text)) {}

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kParseError, "line " + std::to_string(line_no_) + ": " + what);
  }

  // Next non-empty, non-comment line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(input_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      line.erase(0, first);
      line.erase(line.find_last_not_of(" \t\r") + 1);
      return true;
    }
    return false;
  }

  std::vector<double> numbers(std::size_t expected) {
    std::string line;
    if (!next(line)) error("unexpected end of input, expected " + std::to_string(expected) + " numbers");
    std::vector<double> out;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || errno == ERANGE) error("bad number '" + tok + "'");
      out.push_back(v);
    }
    if (out.size() != expected)
      error("expected " + std::to_string(expected) + " numbers, found " + std::to_string(out.size()));
    return out;
  }

  Index dimension(const std::string& tok) const {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || v < 0 || v > 1'000'000) error("bad dimension '" + tok + "'");
    return static_cast<Index>(v);
  }

 private:
  std::istringstream input_;
  int line_no_ = 0;
};

Parsed parse_blocks(Reader& rd) {
  Parsed p;
  std::string line;
  while (rd.next(line)) {
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "matrix" || head == "vector") {
      std::string name, a, b, extra;
      ls >> name >> a;
      if (head == "matrix") ls >> b;
      if (name.empty() || a.empty() || (head == "matrix" && b.empty()) || (ls >> extra))
        rd.error("malformed " + head + " header");
      if (p.matrices.count(name) || p.vectors.count(name)) rd.error("duplicate block '" + name + "'");
      if (head == "matrix") {
        const Index rows = rd.dimension(a), cols = rd.dimension(b);
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i) {
          const auto row = rd.numbers(static_cast<std::size_t>(cols));
          for (Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
        }
        p.matrices.emplace(name, std::move(m));
      } else {
        const Index len = rd.dimension(a);
        Vector v(len);
        if (len > 0) {
          const auto vals = rd.numbers(static_cast<std::size_t>(len));
          for (Index i = 0; i < len; ++i) v[i] = vals[static_cast<std::size_t>(i)];
        }
        p.vectors.emplace(name, std::move(v));
      }
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) rd.error("expected 'key: value', 'matrix' or 'vector'");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    if (p.keys.count(key)) rd.error("duplicate key '" + key + "'");
    p.keys.emplace(key, value);
  }
  return p;
}

template <class Map>
const typename Map::mapped_type& need(const Map& m, const std::string& name) {
  const auto it = m.find(name);
  require(it != m.end(), ErrorCode::kParseError, "missing block '" + name + "'");
  return it->second;
}

}  // namespace

std::string write_instance(const PdbInstance& inst) {
  std::ostringstream os;
  os << "format_version: 1\nkind: pdb\n";
  put_matrix(os, "P", inst.x_set().matrix());
  put_vector(os, "p", inst.x_set().rhs());
  put_matrix(os, "Q", inst.y_set().matrix());
  put_vector(os, "q", inst.y_set().rhs());
  return os.str();
}

std::string write_instance(const ArInstance& inst) {
  std::ostringstream os;
  os << "format_version: 1\nkind: ar\nfirst_stage: nonnegative_orthant\n";
  put_matrix(os, "A", inst.a());
  put_matrix(os, "B", inst.b());
  put_vector(os, "c", inst.c());
  put_vector(os, "d", inst.d());
  put_matrix(os, "R", inst.u().matrix());
  put_vector(os, "r", inst.u().rhs());
  return os.str();
}

AnyInstance parse_instance(std::string_view text) {
  Reader rd(text);
  const Parsed p = parse_blocks(rd);
  const auto version = p.keys.find("format_version");
  require(version != p.keys.end(), ErrorCode::kParseError, "missing format_version");
  require(version->second == "1", ErrorCode::kParseError, "unsupported format_version " + version->second);
  const auto kind = p.keys.find("kind");
  require(kind != p.keys.end(), ErrorCode::kParseError, "missing kind");
  try {
    if (kind->second == "pdb") {
      return PdbInstance(PackingPolytope(need(p.matrices, "P"), need(p.vectors, "p")),
                         PackingPolytope(need(p.matrices, "Q"), need(p.vectors, "q")));
    }
    if (kind->second == "ar") {
      const auto fs = p.keys.find("first_stage");
      require(fs == p.keys.end() || fs->second == "nonnegative_orthant", ErrorCode::kParseError,
              "only first_stage: nonnegative_orthant is supported");
      return ArInstance(need(p.matrices, "A"), need(p.matrices, "B"), need(p.vectors, "c"), need(p.vectors, "d"),
                        PackingPolytope(need(p.matrices, "R"), need(p.vectors, "r")));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    fail(ErrorCode::kParseError, std::string("invalid instance data: ") + e.what());
  }
  fail(ErrorCode::kParseError, "unknown kind '" + kind->second + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::kInvalidArgument, "write to " + path + " failed");
}

AnyInstance read_instance_file(const std::string& path) { return parse_instance(read_text_file(path)); }

}  // namespace bilin
