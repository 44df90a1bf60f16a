#include "secagg/errors.hpp"

namespace secagg {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::non_invertible: return "NonInvertible";
    case Errc::invalid_range: return "InvalidRange";
    case Errc::weight_overflow: return "WeightOverflow";
    case Errc::zero_weight_sum: return "ZeroWeightSum";
    case Errc::invalid_threshold: return "InvalidThreshold";
    case Errc::duplicate_index: return "DuplicateIndex";
    case Errc::zero_index: return "ZeroIndex";
    case Errc::insufficient_shares: return "InsufficientShares";
    case Errc::index_mismatch: return "IndexMismatch";
    case Errc::invalid_public_key: return "InvalidPublicKey";
    case Errc::plaintext_overflow: return "PlaintextOverflow";
    case Errc::missing_ciphertext: return "MissingCiphertext";
    case Errc::layout_mismatch: return "LayoutMismatch";
    case Errc::decryption_failure: return "DecryptionFailure";
    case Errc::slot_overflow: return "SlotOverflow";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::missing_pairwise_secret: return "MissingPairwiseSecret";
    case Errc::input_overflow: return "InputOverflow";
    case Errc::missing_vector: return "MissingVector";
    case Errc::setup_aborted: return "SetupAborted";
    case Errc::missing_public_key: return "MissingPublicKey";
    case Errc::cohort_too_large: return "CohortTooLarge";
    case Errc::missing_update: return "MissingUpdate";
    case Errc::undeliverable_message: return "UndeliverableMessage";
    case Errc::bad_message: return "BadMessage";
    case Errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace secagg
