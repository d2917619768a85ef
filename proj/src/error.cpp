#include "microsing/error.hpp"

namespace microsing {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::LatticeMismatch: return "lattice-mismatch";
        case ErrorKind::InvalidConfig: return "invalid-config";
        case ErrorKind::Unsupported: return "unsupported-operation";
        case ErrorKind::Ellipticity: return "ellipticity";
        case ErrorKind::StepSize: return "step-size";
        case ErrorKind::ThetaMismatch: return "theta-mismatch";
        case ErrorKind::Io: return "io";
        case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

}  // namespace microsing
