#include "secagg/shamir.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "secagg/errors.hpp"
#include "secagg/modmath.hpp"

namespace secagg {

namespace {

void check_distinct_nonzero(std::span<const uint64_t> indices) {
  std::set<uint64_t> seen;
  for (uint64_t u : indices) {
    if (u == 0) fail(Errc::zero_index, "share index 0 would leak the secret");
    if (!seen.insert(u).second)
      fail(Errc::duplicate_index, "share index " + std::to_string(u) + " repeats");
  }
}

}  // namespace

std::vector<Share> ss_share(const Bigint& secret, unsigned threshold,
                            std::span<const uint64_t> members, const FieldSpec& field, Rng& rng) {
  if (threshold < 1 || threshold > members.size())
    fail(Errc::invalid_threshold,
         "threshold " + std::to_string(threshold) + " outside [1, " +
             std::to_string(members.size()) + "]");
  check_distinct_nonzero(members);

  std::vector<Bigint> coeffs;
  coeffs.reserve(threshold);
  coeffs.push_back(secret % field.prime);
  for (unsigned i = 1; i < threshold; ++i) coeffs.push_back(rng.below(field.prime));

  std::vector<Share> shares;
  shares.reserve(members.size());
  for (uint64_t u : members) {
    // Horner evaluation of the polynomial at x = u
    Bigint x{static_cast<unsigned long long>(u)};
    Bigint acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc * x + *it) % field.prime;
    shares.push_back(Share{u, acc});
  }
  return shares;
}

Bigint ss_recon(std::span<const Share> shares, unsigned threshold, const FieldSpec& field) {
  if (threshold < 1) fail(Errc::invalid_threshold, "threshold must be >= 1");
  if (shares.size() < threshold)
    fail(Errc::insufficient_shares, "have " + std::to_string(shares.size()) + " shares, need " +
                                        std::to_string(threshold));
  std::vector<Share> picked(shares.begin(), shares.end());
  std::sort(picked.begin(), picked.end(),
            [](const Share& a, const Share& b) { return a.index < b.index; });
  picked.resize(threshold);
  std::vector<uint64_t> indices;
  for (const Share& s : picked) indices.push_back(s.index);
  check_distinct_nonzero(indices);

  const Bigint& p = field.prime;
  Bigint secret;
  for (const Share& su : picked) {
    // lambda_u = prod_{v != u} v / (v - u)
    Bigint num(1), den(1);
    Bigint u{static_cast<unsigned long long>(su.index)};
    for (const Share& sv : picked) {
      if (sv.index == su.index) continue;
      Bigint v{static_cast<unsigned long long>(sv.index)};
      num = (num * v) % p;
      den = (den * ((v - u) % p)) % p;
    }
    Bigint lambda = (num * mod_inv(den, p)) % p;
    secret = (secret + lambda * su.value) % p;
  }
  return secret;
}

std::vector<Share> ss_add(std::span<const Share> a, std::span<const Share> b,
                          const FieldSpec& field) {
  if (a.size() != b.size()) fail(Errc::index_mismatch, "share lists differ in size");
  std::vector<Share> out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].index != b[i].index)
      fail(Errc::index_mismatch, "share index " + std::to_string(a[i].index) + " vs " +
                                     std::to_string(b[i].index));
    out.push_back(Share{a[i].index, (a[i].value + b[i].value) % field.prime});
  }
  return out;
}

}  // namespace secagg
