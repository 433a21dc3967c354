#include "lwipm/io.hpp"

#include "lwipm/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace lwipm {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

json parseText(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, origin + ": " + e.what());
  }
}

const json& field(const json& j, const char* name, const std::string& origin) {
  if (!j.is_object()) throw Error(Errc::ParseError, origin + ": top level must be an object");
  auto it = j.find(name);
  if (it == j.end()) throw Error(Errc::ParseError, origin + ": missing field '" + name + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(Errc::ParseError, where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(Errc::ParseError, where + ": not finite");
  return d;
}

Vec vector(const json& j, const char* name, const std::string& origin, double nullValue = NAN) {
  const json& v = field(j, name, origin);
  if (!v.is_array()) throw Error(Errc::ParseError, origin + ": field '" + name + "' must be an array");
  Vec out(Index(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string where = origin + ": field '" + name + "' entry " + std::to_string(i);
    if (v[i].is_null()) {
      if (std::isnan(nullValue)) throw Error(Errc::ParseError, where + ": null not allowed");
      out(Index(i)) = nullValue;
    } else {
      out(Index(i)) = number(v[i], where);
    }
  }
  return out;
}

Mat matrix(const json& j, const char* name, const std::string& origin) {
  const json& v = field(j, name, origin);
  if (!v.is_array() || v.empty())
    throw Error(Errc::ParseError, origin + ": field '" + name + "' must be a non-empty array of rows");
  const size_t cols = v[0].is_array() ? v[0].size() : 0;
  Mat out(Index(v.size()), Index(cols));
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string where = origin + ": field '" + name + "' row " + std::to_string(i);
    if (!v[i].is_array()) throw Error(Errc::ParseError, where + ": expected an array");
    if (v[i].size() != cols) throw Error(Errc::ParseError, where + ": ragged row");
    for (size_t k = 0; k < cols; ++k)
      out(Index(i), Index(k)) = number(v[i][k], where + " column " + std::to_string(k));
  }
  return out;
}

void expectSize(const Vec& v, Index n, const char* name, const std::string& origin) {
  if (v.size() != n)
    throw Error(Errc::ValidationError, origin + ": '" + name + "' has length " +
                                           std::to_string(v.size()) + ", expected " + std::to_string(n));
}

void writeNumber(std::ostringstream& os, double v) {
  if (!std::isfinite(v)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

void dumpRec(std::ostringstream& os, const ojson& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(size_t(indent * (depth + 1)), ' ') : "";
  const std::string padEnd = indent > 0 ? std::string(size_t(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << ojson(it.key()).dump() << (indent > 0 ? ": " : ":");
        dumpRec(os, it.value(), indent, depth + 1);
      }
      os << nl << padEnd << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // numeric arrays stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && e.is_primitive();
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        first = false;
        dumpRec(os, e, indent, depth + 1);
      }
      if (!flat) os << nl << padEnd;
      os << "]";
      return;
    }
    case ojson::value_t::number_float:
      writeNumber(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LpInput parseLpJsonText(const std::string& text, const std::string& origin) {
  const json j = parseText(text, origin);
  const Mat A = matrix(j, "A", origin);
  const Index m = A.rows(), n = A.cols();
  if (j.contains("m") && (!j["m"].is_number_integer() || j["m"].get<Index>() != m))
    throw Error(Errc::ValidationError, origin + ": 'm' does not match the rows of A");
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<Index>() != n))
    throw Error(Errc::ValidationError, origin + ": 'n' does not match the columns of A");
  const double inf = std::numeric_limits<double>::infinity();
  Vec b = vector(j, "b", origin), c = vector(j, "c", origin);
  Vec lo = vector(j, "lower", origin, -inf), hi = vector(j, "upper", origin, inf);
  Vec x0 = vector(j, "x0", origin);
  expectSize(b, n, "b", origin);
  expectSize(c, m, "c", origin);
  expectSize(lo, m, "lower", origin);
  expectSize(hi, m, "upper", origin);
  expectSize(x0, m, "x0", origin);
  LpInput in;
  try {
    in.lp = LpProblem::make(A, b, c, lo, hi);
  } catch (const Error& e) {
    throw Error(Errc::ValidationError, origin + ": " + e.what());
  }
  if (!isInterior(in.lp, x0))
    throw Error(Errc::ValidationError, origin + ": x0 is not strictly inside the bounds");
  const double res = equalityResidual(in.lp, x0);
  if (res > 1e-8 * (1.0 + b.cwiseAbs().maxCoeff()))
    throw Error(Errc::ValidationError, origin + ": x0 violates A^T x = b");
  in.x0 = x0;
  return in;
}

LpInput parseLpJson(const std::string& path) { return parseLpJsonText(readFile(path), path); }

FlowInstance parseDimacsText(const std::string& text, bool maxflow, const std::string& origin) {
  FlowInstance inst;
  std::istringstream in(text);
  std::string line;
  size_t lineNo = 0;
  bool haveP = false;
  long long declaredArcs = 0;
  std::vector<std::pair<Index, std::string>> nodes;
  auto fail = [&](Errc code, const std::string& msg) {
    throw Error(code, origin + ":" + std::to_string(lineNo) + ": " + msg);
  };
  auto vertex = [&](long long v) {
    if (v < 1 || v > inst.vertices) fail(Errc::ValidationError, "vertex " + std::to_string(v) + " out of range");
    return Index(v - 1);
  };
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      long long N = 0;
      if (haveP) fail(Errc::ParseError, "second 'p' line");
      if (!(ls >> kind >> N >> declaredArcs)) fail(Errc::ParseError, "malformed 'p' line");
      if (kind != "min" && !(maxflow && kind == "max"))
        fail(Errc::ParseError, "problem type '" + kind + "' not supported");
      if (N < 2 || declaredArcs < 0) fail(Errc::ValidationError, "bad problem size");
      inst.vertices = Index(N);
      haveP = true;
    } else if (!haveP) {
      fail(Errc::ParseError, "'" + tag + "' line before the 'p' line");
    } else if (tag == "n") {
      long long v = 0;
      std::string val;
      if (!(ls >> v >> val)) fail(Errc::ParseError, "malformed 'n' line");
      nodes.emplace_back(vertex(v), val);
    } else if (tag == "a") {
      std::vector<long long> f;
      long long x;
      while (ls >> x) f.push_back(x);
      if (!ls.eof()) fail(Errc::ParseError, "non-integer field in 'a' line");
      FlowEdge e;
      if (f.size() == 5) {
        if (f[2] != 0) fail(Errc::ValidationError, "lower bound must be 0");
        e = {vertex(f[0]), vertex(f[1]), f[3], maxflow ? 0 : f[4]};
      } else if (maxflow && f.size() == 3) {
        e = {vertex(f[0]), vertex(f[1]), f[2], 0};
      } else {
        fail(Errc::ParseError, "malformed 'a' line");
      }
      if (e.cap < 0) fail(Errc::ValidationError, "negative capacity");
      inst.edges.push_back(e);
    } else {
      fail(Errc::ParseError, "unknown line type '" + tag + "'");
    }
  }
  if (!haveP) throw Error(Errc::ParseError, origin + ": missing 'p' line");
  if (nodes.size() != 2)
    throw Error(Errc::ValidationError, origin + ": expected exactly two 'n' lines, found " +
                                           std::to_string(nodes.size()));
  if (declaredArcs != static_cast<long long>(inst.edges.size()))
    throw Error(Errc::ValidationError, origin + ": 'p' line declares " + std::to_string(declaredArcs) +
                                           " arcs, found " + std::to_string(inst.edges.size()));
  int src = -1, snk = -1;
  for (int k = 0; k < 2; ++k) {
    const std::string& val = nodes[size_t(k)].second;
    bool isSource;
    if (val == "s") {
      isSource = true;
    } else if (val == "t") {
      isSource = false;
    } else {
      long long b = 0;
      try {
        size_t used = 0;
        b = std::stoll(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, origin + ": bad node supply '" + val + "'");
      }
      if (b == 0) throw Error(Errc::ValidationError, origin + ": node supply must be nonzero");
      isSource = b > 0;
    }
    (isSource ? src : snk) = k;
  }
  if (src < 0 || snk < 0)
    throw Error(Errc::ValidationError, origin + ": need one source and one sink node line");
  inst.source = nodes[size_t(src)].first;
  inst.sink = nodes[size_t(snk)].first;
  try {
    inst.validate();
  } catch (const Error& e) {
    if (e.code() != Errc::InvalidArgument) throw;
    throw Error(Errc::ValidationError, origin + ": " + e.what());
  }
  return inst;
}

FlowInstance parseDimacs(const std::string& path, bool maxflow) {
  return parseDimacsText(readFile(path), maxflow, path);
}

namespace {

// whitespace-separated numbers with their line numbers
struct TokenStream {
  std::vector<std::pair<double, size_t>> tok;
  size_t pos = 0;
  std::string origin;

  TokenStream(const std::string& text, const std::string& o) : origin(o) {
    std::istringstream in(text);
    std::string line, word;
    size_t lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      while (ls >> word) {
        size_t used = 0;
        double v = 0;
        try {
          v = std::stod(word, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != word.size() || !std::isfinite(v))
          throw Error(Errc::ParseError, origin + ":" + std::to_string(lineNo) + ": bad number '" + word + "'");
        tok.emplace_back(v, lineNo);
      }
    }
  }
  bool done() const { return pos >= tok.size(); }
  size_t left() const { return tok.size() - pos; }
  double next(const char* what) {
    if (done()) throw Error(Errc::ParseError, origin + ": unexpected end of input reading " + what);
    return tok[pos++].first;
  }
  Index count(const char* what) {
    const size_t line = done() ? 0 : tok[pos].second;
    const double v = next(what);
    if (v != std::floor(v) || v < 1 || v > 1e8)
      throw Error(Errc::ParseError, origin + ":" + std::to_string(line) + ": bad " + what);
    return Index(v);
  }
  Vec vec(Index n, const char* what) {
    Vec out(n);
    for (Index i = 0; i < n; ++i) out(i) = next(what);
    return out;
  }
};

Mat readMatrix(TokenStream& ts) {
  const Index m = ts.count("row count");
  const Index n = ts.count("column count");
  Mat A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < n; ++k) A(i, k) = ts.next("matrix entry");
  if (m < n) throw Error(Errc::ValidationError, ts.origin + ": need m >= n");
  return A;
}

}  // namespace

Mat parseMatrixText(const std::string& text, const std::string& origin) {
  TokenStream ts(text, origin);
  Mat A = readMatrix(ts);
  if (!ts.done()) throw Error(Errc::ParseError, origin + ": trailing data after the matrix");
  return A;
}

Mat parseMatrix(const std::string& path) { return parseMatrixText(readFile(path), path); }

PolytopeInput parsePolytopeText(const std::string& text, const std::string& origin) {
  TokenStream ts(text, origin);
  PolytopeInput p;
  p.A = readMatrix(ts);
  const Index m = p.A.rows(), n = p.A.cols();
  p.b = ts.vec(m, "b");
  p.x = ts.vec(n, "x");
  if (ts.left() == size_t(n)) {
    p.h = ts.vec(n, "h");
  } else if (!ts.done()) {
    throw Error(Errc::ParseError, origin + ": expected either nothing or n entries of h after x");
  }
  const Vec s = p.A * p.x - p.b;
  for (Index i = 0; i < m; ++i)
    if (!(s(i) > 0.0))
      throw Error(Errc::ValidationError, origin + ": x is not strictly inside A x > b (row " +
                                             std::to_string(i) + ")");
  return p;
}

PolytopeInput parsePolytope(const std::string& path) { return parsePolytopeText(readFile(path), path); }

std::string dumpJson(const ojson& j, int indent) {
  std::ostringstream os;
  dumpRec(os, j, indent, 0);
  return os.str();
}

ojson toJson(const Vec& v) {
  ojson a = ojson::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace lwipm
