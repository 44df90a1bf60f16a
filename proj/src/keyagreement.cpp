#include "secagg/keyagreement.hpp"

#include "secagg/digest.hpp"
#include "secagg/errors.hpp"

namespace secagg {

DHGroup ka_param(SecurityProfile profile, Rng& rng) {
  ProfileSpec spec = profile_spec(profile);
  return gen_dh_group(spec.dh_subgroup_bits, spec.dh_modulus_bits, rng);
}

KeyPair ka_gen(const DHGroup& group, Rng& rng) {
  Bigint secret = rng.below(group.q - Bigint(1)) + Bigint(1);
  return KeyPair{mod_exp(group.g, secret, group.p), secret};
}

PairwiseSecret ka_agree(const DHGroup& group, const Bigint& my_secret,
                        const Bigint& their_public) {
  if (their_public <= Bigint(1) || their_public >= group.p)
    fail(Errc::invalid_public_key, "public value outside (1, p)");
  if (mod_exp(their_public, group.q, group.p) != Bigint(1))
    fail(Errc::invalid_public_key, "public value not in the order-q subgroup");
  Bigint shared = mod_exp(their_public, my_secret, group.p);
  PairwiseSecret out;
  out.key_bytes = sha256(shared.to_bytes_be());
  return out;
}

}  // namespace secagg
