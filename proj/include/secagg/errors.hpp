#pragma once

#include <stdexcept>
#include <string>

namespace secagg {

// Error taxonomy shared by every module. Tests match on the code, not the text.
enum class Errc {
  non_invertible,
  invalid_range,
  weight_overflow,
  zero_weight_sum,
  invalid_threshold,
  duplicate_index,
  zero_index,
  insufficient_shares,
  index_mismatch,
  invalid_public_key,
  plaintext_overflow,
  missing_ciphertext,
  layout_mismatch,
  decryption_failure,
  slot_overflow,
  length_mismatch,
  missing_pairwise_secret,
  input_overflow,
  missing_vector,
  setup_aborted,
  missing_public_key,
  cohort_too_large,
  missing_update,
  undeliverable_message,
  bad_message,
  config_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace secagg
