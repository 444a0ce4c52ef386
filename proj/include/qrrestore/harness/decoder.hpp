#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "qrrestore/image.hpp"

namespace qrrestore::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// External QR decoder invoked through /bin/sh.
///
/// `{path}` in the template is replaced by the quoted image path; without a
/// placeholder the path is appended. A decode succeeds when the command exits
/// with status 0 and prints a non-empty payload.
struct DecoderAdapter {
  std::string command_template;
  double timeout_s = 20.0;

  std::string command_for(const std::filesystem::path& image) const;
  /// Label recorded in sweep metadata.
  std::string id() const { return command_template; }
};

struct DecodeOutcome {
  bool success = false;
  bool timed_out = false;
  int exit_status = -1;
  std::string payload;  // stdout with trailing whitespace removed
};

/// Runs the decoder on an existing file. Throws ConfigError when the command
/// cannot be started or the shell reports it as missing (status 126/127).
DecodeOutcome run_decoder(const DecoderAdapter& d, const std::filesystem::path& image);

/// Writes `img` to a temporary PNG and decodes it. True iff the decode
/// succeeds within the timeout and, when given, the payload matches.
bool score_readability(const GrayImage& img, const DecoderAdapter& d,
                       const std::optional<std::string>& expected_payload = std::nullopt);

}  // namespace qrrestore::harness
