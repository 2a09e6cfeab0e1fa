#pragma once

#include <stdexcept>
#include <string>

namespace scrawl {

enum class ErrorCode {
    EmptyEntry,
    EmptyCorpus,
    OrderTooLarge,
    UnknownCondition,
    SpawnFailure,
    ChildCrashed,
    SingleClassData,
    Timeout,
    ProtocolError,
    FileMissing,
    WriteFailure,
    ConfigError,
    SourceFailure,
    ScorerFailure,
    OutputIOFailure,
    CorruptRecords,
    ParseError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::EmptyEntry: return "EmptyEntry";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::OrderTooLarge: return "OrderTooLarge";
        case ErrorCode::UnknownCondition: return "UnknownCondition";
        case ErrorCode::SpawnFailure: return "SpawnFailure";
        case ErrorCode::ChildCrashed: return "ChildCrashed";
        case ErrorCode::SingleClassData: return "SingleClassData";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::ProtocolError: return "ProtocolError";
        case ErrorCode::FileMissing: return "FileMissing";
        case ErrorCode::WriteFailure: return "WriteFailure";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::SourceFailure: return "SourceFailure";
        case ErrorCode::ScorerFailure: return "ScorerFailure";
        case ErrorCode::OutputIOFailure: return "OutputIOFailure";
        case ErrorCode::CorruptRecords: return "CorruptRecords";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace scrawl
