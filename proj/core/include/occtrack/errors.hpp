#pragma once

#include <stdexcept>
#include <string>

namespace occtrack {

/// Configuration or scenario-spec validation problem. The CLI maps this to
/// exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Appearance-model failure for a single frame (degenerate search region).
class TrackingFailure : public std::runtime_error {
public:
    explicit TrackingFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Target lost beyond the prediction horizon. The CLI maps this to exit code 3.
class TargetLost : public std::runtime_error {
public:
    TargetLost(const std::string& what, long frame) : std::runtime_error(what), frame_(frame) {}
    long frame() const { return frame_; }

private:
    long frame_;
};

}  // namespace occtrack
