#pragma once

#include <stdexcept>
#include <string>

namespace becphase {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// relative_phase requested at a position where a mode amplitude vanishes.
class ZeroAmplitude : public Error {
public:
    using Error::Error;
};

/// A state with no particles at all cannot feed an engine.
class EmptyCondensate : public Error {
public:
    using Error::Error;
};

/// More detections requested than particles available.
class CondensateExhausted : public Error {
public:
    using Error::Error;
};

/// A forced outcome has probability zero under the current history.
class ZeroProbabilityOutcome : public Error {
public:
    using Error::Error;
};

/// Both local densities vanish at the probed position.
class NoDensityAtPosition : public Error {
public:
    using Error::Error;
};

/// The large-N engine guard (record count vs. min(n_a, n_b)/10) failed.
class SequenceTooLongForApproxEngine : public Error {
public:
    using Error::Error;
};

/// Posterior grid smaller than the exactness threshold for the history length.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

/// A detection or probe window reaches outside its assigned region.
class SpecOutsideRegion : public Error {
public:
    using Error::Error;
};

/// Writing an artifact failed.
class IoFailure : public Error {
public:
    using Error::Error;
};

/// Config parsing / validation failure with a field path.
class ConfigError : public Error {
public:
    enum class Kind { SchemaVersionUnsupported, UnknownField, InvariantViolation };

    ConfigError(Kind kind, std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message),
          kind_(kind),
          path_(std::move(path)) {}

    Kind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    Kind kind_;
    std::string path_;
};

}  // namespace becphase
