#pragma once

#include <stdexcept>
#include <string>

namespace emsrag {

// Base class for recoverable failures raised by library operations.
// Precondition violations (bad arguments from the caller) use
// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define EMSRAG_DEFINE_ERROR(NAME)                                      \
    class NAME : public Error {                                        \
    public:                                                            \
        explicit NAME(const std::string& w) : Error(#NAME ": " + w) {} \
    }

EMSRAG_DEFINE_ERROR(BackendUnavailable);
EMSRAG_DEFINE_ERROR(Timeout);
EMSRAG_DEFINE_ERROR(MalformedResponse);
EMSRAG_DEFINE_ERROR(DimensionMismatch);
EMSRAG_DEFINE_ERROR(ZeroVector);
EMSRAG_DEFINE_ERROR(EmptyIndex);
EMSRAG_DEFINE_ERROR(EmptyText);
EMSRAG_DEFINE_ERROR(EmptyDataset);
EMSRAG_DEFINE_ERROR(Divergence);
EMSRAG_DEFINE_ERROR(MissingExpertise);
EMSRAG_DEFINE_ERROR(MissingBundle);
EMSRAG_DEFINE_ERROR(InsufficientTrain);
EMSRAG_DEFINE_ERROR(EmptyQA);
EMSRAG_DEFINE_ERROR(UnparseableList);
EMSRAG_DEFINE_ERROR(UnparseableJudgment);
EMSRAG_DEFINE_ERROR(LengthMismatch);
EMSRAG_DEFINE_ERROR(NormalizerUnavailable);
EMSRAG_DEFINE_ERROR(IoError);
EMSRAG_DEFINE_ERROR(ConfigError);

#undef EMSRAG_DEFINE_ERROR

}  // namespace emsrag
