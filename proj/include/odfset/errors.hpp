#pragma once

#include <stdexcept>
#include <string>

namespace odfset {

struct EmptySetError : std::runtime_error {
  explicit EmptySetError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSetError : std::runtime_error {
  explicit DegenerateSetError(const std::string& what) : std::runtime_error(what) {}
};

struct GridMismatchError : std::runtime_error {
  explicit GridMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct BadWeightsError : std::runtime_error {
  explicit BadWeightsError(const std::string& what) : std::runtime_error(what) {}
};

struct NotSeparableError : std::runtime_error {
  explicit NotSeparableError(const std::string& what) : std::runtime_error(what) {}
};

struct NoClosedFormError : std::runtime_error {
  explicit NoClosedFormError(const std::string& what) : std::runtime_error(what) {}
};

struct DimMismatchError : std::runtime_error {
  explicit DimMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyBoundaryError : std::runtime_error {
  explicit EmptyBoundaryError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct MixedInputsError : std::runtime_error {
  explicit MixedInputsError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownExperimentError : std::runtime_error {
  explicit UnknownExperimentError(const std::string& what) : std::runtime_error(what) {}
};

struct BadConfigError : std::runtime_error {
  explicit BadConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace odfset
