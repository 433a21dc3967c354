#pragma once

#include <stdexcept>
#include <string>

namespace lwipm {

enum class Errc {
  InvalidArgument,
  InvalidTolerance,
  InvalidP,
  RankDeficient,
  NotConverged,
  OutOfDomain,
  CenteringDiverged,
  IterationCap,
  Infeasible,
  DisconnectedGraph,
  RepairFailed,
  ParseError,
  ValidationError,
};

const char* errcName(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errcName(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace lwipm
