#pragma once

#include <stdexcept>
#include <string>

namespace roboswap {

// Error taxonomy shared by all modules. The CLI maps these to exit codes:
// 0 success, 2 invalid config/argument, 3 missing data, 4 numeric failure.
struct InvalidArgument : std::runtime_error { using std::runtime_error::runtime_error; };
struct MissingData : std::runtime_error { using std::runtime_error::runtime_error; };
struct NumericError : std::runtime_error { using std::runtime_error::runtime_error; };
struct InfeasibleTask : std::runtime_error { using std::runtime_error::runtime_error; };
struct UndefinedRegion : std::runtime_error { using std::runtime_error::runtime_error; };
struct IoError : std::runtime_error { using std::runtime_error::runtime_error; };

}  // namespace roboswap
