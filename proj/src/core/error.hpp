#pragma once

#include <stdexcept>
#include <string>

namespace nerkit {

enum class errc {
  io,
  missing_file,
  duplicate_doc_id,
  invalid_encoding,
  parse,
  invalid_bio,
  overlap_conflict,
  span_out_of_range,
  missing_class,
  empty_split,
  alignment,
  missing_query_embedding,
  invalid_argument,
};

/// Stable diagnostic name, e.g. "MissingFile". Printed by the CLI and
/// echoed through the C API.
const char* errc_name(errc code);

class error : public std::runtime_error {
 public:
  error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace nerkit
