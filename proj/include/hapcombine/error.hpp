#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hapcombine {

enum class Errc {
  LengthMismatch,
  InvalidK,
  EmptyEnsemble,
  TooLarge,
  ParseError,
  DuplicateId,
  MissingTruth,
  Alignment,
  Validation,
  InvalidArgument,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidK: return "InvalidK";
    case Errc::EmptyEnsemble: return "EmptyEnsemble";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::MissingTruth: return "MissingTruth";
    case Errc::Alignment: return "Alignment";
    case Errc::Validation: return "Validation";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : Error(Errc::ParseError,
              path + ":" + std::to_string(line) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// A haplotype pair contradicted its genotype under the strict policy.
/// Marker numbers are 1-based.
class ValidationError : public Error {
 public:
  ValidationError(std::string member, std::vector<std::size_t> markers)
      : Error(Errc::Validation, describe(member, markers)),
        member_(std::move(member)),
        markers_(std::move(markers)) {}

  const std::string& member() const noexcept { return member_; }
  const std::vector<std::size_t>& markers() const noexcept { return markers_; }

 private:
  static std::string describe(const std::string& member,
                              const std::vector<std::size_t>& markers) {
    std::string s = "member '" + member + "' contradicts genotype at marker";
    s += markers.size() == 1 ? " " : "s ";
    for (std::size_t i = 0; i < markers.size(); ++i) {
      if (i != 0) s += ",";
      s += std::to_string(markers[i]);
    }
    return s;
  }

  std::string member_;
  std::vector<std::size_t> markers_;
};

}  // namespace hapcombine
