#pragma once

#include <complex>
#include <exception>
#include <string>
#include <utility>

namespace fsid {

// Base class for everything the library throws deliberately.  Carries an
// optional stage label so a multi-step pipeline can mark which step failed
// without losing the original message; `what()` reads "stage: message".
class Error : public std::exception {
public:
    explicit Error(std::string message) : message_(std::move(message)) { rebuild(); }

    const char* what() const noexcept override { return text_.c_str(); }

    const std::string& message() const noexcept { return message_; }
    const std::string& stage() const noexcept { return stage_; }

    // Attaches a stage label once; later calls keep the first (innermost) label.
    void set_stage(const std::string& stage) {
        if (stage_.empty() && !stage.empty()) {
            stage_ = stage;
            rebuild();
        }
    }

private:
    void rebuild() { text_ = stage_.empty() ? message_ : stage_ + ": " + message_; }

    std::string message_;
    std::string stage_;
    std::string text_;
};

// The procedure itself cannot produce a result on this data (CLI exit code 2).
class MethodError : public Error {
public:
    using Error::Error;
};

// Malformed input or output: files, tables, serialization (CLI exit code 1).
class FormatError : public Error {
public:
    using Error::Error;
};

// A coupling harmonic lands within one resolution step of a private harmonic,
// so the shared/private separation cannot work.
class CouplingCollision : public MethodError {
public:
    using MethodError::MethodError;
};

// Spectrum scan step too large relative to the record's resolution.
class GridTooCoarse : public MethodError {
public:
    using MethodError::MethodError;
};

// Input-side Fourier exponent is (numerically) zero; the frequency-response
// ratio at that frequency is undefined.
class ZeroInputExponent : public MethodError {
public:
    using MethodError::MethodError;
};

// The lowest-frequency response ratio sits in the fourth quadrant or too
// close to a coordinate axis, so the astatism order cannot be read off.
// Carries the offending ratio for diagnostics.
class AmbiguousQuadrant : public MethodError {
public:
    AmbiguousQuadrant(std::string message, std::complex<double> w)
        : MethodError(std::move(message)), W(w) {}

    std::complex<double> W;
};

// Fewer matched frequencies than unknown coefficients.
class InsufficientFrequencies : public MethodError {
public:
    using MethodError::MethodError;
};

// The least-squares design matrix is rank deficient.
class RankDeficient : public MethodError {
public:
    using MethodError::MethodError;
};

// No trial order satisfied the consistency/conditioning acceptance rules.
class NoConsistentOrder : public MethodError {
public:
    using MethodError::MethodError;
};

// The identified (or supplied) operator polynomial vanishes at a frequency
// that must be simulated, or a nonzero offset meets a zero static gain.
class PoleOnFrequency : public MethodError {
public:
    using MethodError::MethodError;
};

// Input and output peak sets share no frequencies; nothing to identify from.
class EmptyMatchedSet : public MethodError {
public:
    using MethodError::MethodError;
};

// Timestamp column is not an arithmetic progression.
class NonUniformSampling : public FormatError {
public:
    using FormatError::FormatError;
};

// A data row has the wrong number of cells.
class RaggedColumns : public FormatError {
public:
    using FormatError::FormatError;
};

// A cell could not be parsed as a finite number.
class NonNumericCell : public FormatError {
public:
    using FormatError::FormatError;
};

}  // namespace fsid
