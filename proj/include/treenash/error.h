#ifndef TREENASH_ERROR_H_
#define TREENASH_ERROR_H_

#include <stdexcept>
#include <string>

namespace treenash {

enum class ErrorKind {
  kInvalidGame,
  kNotATree,
  kInvalidPlayerId,
  kInvalidStrategy,
  kMissingNeighborStrategy,
  kInvalidEpsilon,
  kOverflow,
  kSetTooLarge,
  kCapExceeded,
  kNoEquilibriumFound,
  kMissingExtension,
  kInternalSoundnessViolation,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace treenash

#endif  // TREENASH_ERROR_H_
