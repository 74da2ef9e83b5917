#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dagclust {

enum class Errc {
    CycleDetected,
    InvalidArc,
    PathExplosion,
    NodeSetMismatch,
    NotAMatching,
    ClusterTooLarge,
    NonAdjacentPair,
    PreconditionViolated,
    EmptyPath,
    TooLarge,
    NoFeasibleClustering,
    MatchingExplosion,
    NotATree,
    OddTotal,
    EmptySet,
    NotThreeCnf,
    ConstructionCycle,
    ParseError,
    SchemaVersionUnsupported,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::InvalidArc: return "InvalidArc";
    case Errc::PathExplosion: return "PathExplosion";
    case Errc::NodeSetMismatch: return "NodeSetMismatch";
    case Errc::NotAMatching: return "NotAMatching";
    case Errc::ClusterTooLarge: return "ClusterTooLarge";
    case Errc::NonAdjacentPair: return "NonAdjacentPair";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::EmptyPath: return "EmptyPath";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NoFeasibleClustering: return "NoFeasibleClustering";
    case Errc::MatchingExplosion: return "MatchingExplosion";
    case Errc::NotATree: return "NotATree";
    case Errc::OddTotal: return "OddTotal";
    case Errc::EmptySet: return "EmptySet";
    case Errc::NotThreeCnf: return "NotThreeCnf";
    case Errc::ConstructionCycle: return "ConstructionCycle";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; `what()` carries the human-readable context.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace dagclust
