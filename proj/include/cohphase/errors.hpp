#pragma once

#include <stdexcept>
#include <string>

namespace cohphase {

// Stable error codes. code_name() strings are part of the CLI diagnostic
// contract (printed on stderr before exiting 2 or 3).
enum class Errc {
    ZeroNonlinearity,
    NonpositiveSpectrum,
    NegativeSpectrum,
    SpectrumGroundNotZero,
    NotConverged,
    DomainExceeded,
    Overflow,
    LexError,
    ParseError,
    ArityError,
    UnboundVariable,
    DomainError,
    InvalidParameter,
    ConfigError,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, long detail = -1)
        : std::runtime_error(std::move(message)), code_(code), detail_(detail) {}

    Errc code() const noexcept { return code_; }

    // Index n or byte offset the error refers to; -1 when not applicable.
    long detail() const noexcept { return detail_; }

    // Errors of the numerical-evaluation class map to CLI exit code 3,
    // everything else to 2.
    bool numeric() const noexcept {
        return code_ == Errc::NotConverged || code_ == Errc::DomainExceeded ||
               code_ == Errc::Overflow;
    }

    const char* code_name() const noexcept {
        switch (code_) {
            case Errc::ZeroNonlinearity:      return "ZeroNonlinearity";
            case Errc::NonpositiveSpectrum:   return "NonpositiveSpectrum";
            case Errc::NegativeSpectrum:      return "NegativeSpectrum";
            case Errc::SpectrumGroundNotZero: return "SpectrumGroundNotZero";
            case Errc::NotConverged:          return "NotConverged";
            case Errc::DomainExceeded:        return "DomainExceeded";
            case Errc::Overflow:              return "Overflow";
            case Errc::LexError:              return "LexError";
            case Errc::ParseError:            return "ParseError";
            case Errc::ArityError:            return "ArityError";
            case Errc::UnboundVariable:       return "UnboundVariable";
            case Errc::DomainError:           return "DomainError";
            case Errc::InvalidParameter:      return "InvalidParameter";
            case Errc::ConfigError:           return "ConfigError";
        }
        return "Error";
    }

private:
    Errc code_;
    long detail_;
};

} // namespace cohphase
