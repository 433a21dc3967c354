#include "lwipm/error.hpp"

namespace lwipm {

const char* errcName(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidTolerance: return "InvalidTolerance";
    case Errc::InvalidP: return "InvalidP";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NotConverged: return "NotConverged";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::CenteringDiverged: return "CenteringDiverged";
    case Errc::IterationCap: return "IterationCap";
    case Errc::Infeasible: return "Infeasible";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::RepairFailed: return "RepairFailed";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace lwipm
