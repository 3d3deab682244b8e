#pragma once

#include <stdexcept>

namespace hjw {

struct RankOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct DomainMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GroundMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SpaceMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BadParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MissingWValue : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace hjw
