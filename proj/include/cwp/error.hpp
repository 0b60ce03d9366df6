#pragma once

#include <stdexcept>
#include <string>

namespace cwp {

enum class Code {
    UndeclaredGate,
    ForwardReference,
    DuplicateId,
    BadConstant,
    MissingOutput,
    MissingStart,
    UnboundVariable,
    BadModulus,
    TooLarge,
    TooLong,
    NotPositive,
    NotVariableFree,
    UnknownLetter,
    BadIndex,
    DimensionMismatch,
    NotInvertible,
    BadBase,
    ExponentTooLarge,
    NotMonicInY,
    ZeroDivisor,
    NotMonic,
    NotTriangular,
    RingMismatch,
    BadLetter,
    BadPartition,
    DegreeMismatch,
    NotSkew,
    NotPowerfulSkew,
    ScheduleTooShort,
    InconsistentCosetSystem,
    BadParams,
    BadKind,
    ParseError,
    IoError,
};

inline const char* code_name(Code c) {
    switch (c) {
        case Code::UndeclaredGate: return "UndeclaredGate";
        case Code::ForwardReference: return "ForwardReference";
        case Code::DuplicateId: return "DuplicateId";
        case Code::BadConstant: return "BadConstant";
        case Code::MissingOutput: return "MissingOutput";
        case Code::MissingStart: return "MissingStart";
        case Code::UnboundVariable: return "UnboundVariable";
        case Code::BadModulus: return "BadModulus";
        case Code::TooLarge: return "TooLarge";
        case Code::TooLong: return "TooLong";
        case Code::NotPositive: return "NotPositive";
        case Code::NotVariableFree: return "NotVariableFree";
        case Code::UnknownLetter: return "UnknownLetter";
        case Code::BadIndex: return "BadIndex";
        case Code::DimensionMismatch: return "DimensionMismatch";
        case Code::NotInvertible: return "NotInvertible";
        case Code::BadBase: return "BadBase";
        case Code::ExponentTooLarge: return "ExponentTooLarge";
        case Code::NotMonicInY: return "NotMonicInY";
        case Code::ZeroDivisor: return "ZeroDivisor";
        case Code::NotMonic: return "NotMonic";
        case Code::NotTriangular: return "NotTriangular";
        case Code::RingMismatch: return "RingMismatch";
        case Code::BadLetter: return "BadLetter";
        case Code::BadPartition: return "BadPartition";
        case Code::DegreeMismatch: return "DegreeMismatch";
        case Code::NotSkew: return "NotSkew";
        case Code::NotPowerfulSkew: return "NotPowerfulSkew";
        case Code::ScheduleTooShort: return "ScheduleTooShort";
        case Code::InconsistentCosetSystem: return "InconsistentCosetSystem";
        case Code::BadParams: return "BadParams";
        case Code::BadKind: return "BadKind";
        case Code::ParseError: return "ParseError";
        case Code::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Code code, const std::string& what)
        : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}

    Code code() const { return code_; }

  private:
    Code code_;
};

[[noreturn]] inline void fail(Code code, const std::string& what) { throw Error(code, what); }

}  // namespace cwp
