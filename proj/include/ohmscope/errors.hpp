#pragma once

#include <stdexcept>
#include <string>

namespace ohmscope {

// Error taxonomy. The CLI maps these onto exit codes:
//   usage errors -> 2, data/protocol errors -> 3, numeric failures -> 4.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// numeric / model failures (exit 4)
struct ModelParameterError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct RegionError : Error { using Error::Error; };
struct SingularCombinationError : Error { using Error::Error; };
struct UndefinedCorrelationError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };
struct TransformError : Error { using Error::Error; };
struct TrainingError : Error { using Error::Error; };
struct PredictionError : Error { using Error::Error; };
struct EvaluationError : Error { using Error::Error; };
struct FoldError : Error { using Error::Error; };
struct SingularityError : Error { using Error::Error; };  // reflection conversions

// data / protocol failures (exit 3)
struct AssembleError : Error { using Error::Error; };
struct CorruptProgramError : Error { using Error::Error; };
struct AddressFaultError : Error { using Error::Error; };
struct ContractError : Error { using Error::Error; };
struct DatasetError : Error { using Error::Error; };
struct TransportError : Error { using Error::Error; };
struct ProtocolError : Error {
    using Error::Error;
    ProtocolError(int code, const std::string& msg) : Error(msg), error_code(code) {}
    int error_code = 0;  // instrument ERR code when the peer reported one
};
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace ohmscope
