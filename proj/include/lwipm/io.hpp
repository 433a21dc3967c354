#pragma once

#include "lwipm/flow.hpp"
#include "lwipm/pathfollow.hpp"

#include <json.hpp>

#include <string>

namespace lwipm {

struct LpInput {
  LpProblem lp;
  Vec x0;
};

// { "m", "n", "A": [[..] x m], "b", "c", "lower" (null = -inf), "upper" (null = +inf), "x0" }
LpInput parseLpJson(const std::string& path);
LpInput parseLpJsonText(const std::string& text, const std::string& origin = "<string>");

// "p min N M", two "n v b" lines (b > 0 source, b < 0 sink), "a u v low cap cost" with low = 0.
// With maxflow, "p max", "n v s|t" and "a u v cap" are accepted and costs are zero.
FlowInstance parseDimacs(const std::string& path, bool maxflow = false);
FlowInstance parseDimacsText(const std::string& text, bool maxflow = false,
                             const std::string& origin = "<string>");

// "m n" then m rows of n numbers.
Mat parseMatrixText(const std::string& text, const std::string& origin = "<string>");
Mat parseMatrix(const std::string& path);

// Matrix text format for A, followed by b (m numbers), x (n numbers) and an
// optional direction h (n numbers); x must satisfy A x > b.
struct PolytopeInput {
  Mat A;
  Vec b;
  Vec x;
  Vec h;
};
PolytopeInput parsePolytopeText(const std::string& text, const std::string& origin = "<string>");
PolytopeInput parsePolytope(const std::string& path);

std::string readFile(const std::string& path);

// Floats with 17 significant digits; object keys keep insertion order.
std::string dumpJson(const nlohmann::ordered_json& j, int indent = 2);

nlohmann::ordered_json toJson(const Vec& v);

}  // namespace lwipm
