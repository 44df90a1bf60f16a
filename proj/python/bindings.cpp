#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "secagg/benchmark.hpp"
#include "secagg/errors.hpp"
#include "secagg/harness.hpp"

namespace py = pybind11;
using namespace secagg;

namespace pybind11::detail {

// Bigint <-> python int through hex strings.
template <>
struct type_caster<Bigint> {
  PYBIND11_TYPE_CASTER(Bigint, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    PyObject* hex = PyNumber_ToBase(src.ptr(), 16);
    if (!hex) return false;
    std::string text = reinterpret_steal<object>(hex).cast<std::string>();
    value = Bigint(text, 0);  // base 0 understands the 0x prefix and the sign
    return true;
  }

  static handle cast(const Bigint& v, return_value_policy, handle) {
    return PyLong_FromString(v.to_string(16).c_str(), nullptr, 16);
  }
};

}  // namespace pybind11::detail

namespace {

py::bytes to_py_bytes(std::span<const uint8_t> data) {
  return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

PairwiseSecret secret_from_bytes(const py::bytes& b) {
  std::string s = b;
  if (s.size() != 32) fail(Errc::config_error, "pairwise secrets are 32 bytes");
  PairwiseSecret out;
  std::copy(s.begin(), s.end(), out.key_bytes.begin());
  return out;
}

py::dict report_to_dict(const RoundReport& r) {
  py::dict d;
  d["tau"] = r.tau;
  d["train_s"] = r.train_s;
  d["protect_s"] = r.protect_s;
  d["aggregate_s"] = r.aggregate_s;
  d["total_s"] = r.total_s;
  d["metric"] = r.metric;
  d["aggregate_checksum"] = r.aggregate_checksum;
  d["max_param_dev"] = r.max_param_dev;
  return d;
}

}  // namespace

PYBIND11_MODULE(_secagg, m) {
  m.doc() = "Secure-aggregation toolkit: quantization, Shamir sharing, Joye-Libert and "
            "masking-based aggregation, and the federated simulator.";

  py::register_exception<Error>(m, "SecaggError");

  py::class_<Rng>(m, "Rng")
      .def(py::init<uint64_t>(), py::arg("seed"))
      .def("u64", &Rng::u64)
      .def("below", &Rng::below, py::arg("bound"))
      .def("bits", &Rng::bits, py::arg("n"));

  // --- quantizer ---
  py::class_<QuantConfig>(m, "QuantConfig")
      .def(py::init([](unsigned L, unsigned W, unsigned n, double lo, double hi) {
             QuantConfig cfg;
             cfg.input_bits = L;
             cfg.weight_bits = W;
             cfg.cohort_size = n;
             cfg.clip_lo = lo;
             cfg.clip_hi = hi;
             cfg.validate();
             return cfg;
           }),
           py::arg("input_bits"), py::arg("weight_bits"), py::arg("cohort_size"),
           py::arg("clip_lo"), py::arg("clip_hi"))
      .def_readonly("input_bits", &QuantConfig::input_bits)
      .def_readonly("weight_bits", &QuantConfig::weight_bits)
      .def_readonly("cohort_size", &QuantConfig::cohort_size)
      .def_readonly("clip_lo", &QuantConfig::clip_lo)
      .def_readonly("clip_hi", &QuantConfig::clip_hi)
      .def_property_readonly("sum_bits", &QuantConfig::sum_bits);

  py::class_<QuantizedVector>(m, "QuantizedVector")
      .def(py::init([](std::vector<uint64_t> values, unsigned bit_width) {
             return QuantizedVector{std::move(values), bit_width};
           }),
           py::arg("values"), py::arg("bit_width"))
      .def_readonly("values", &QuantizedVector::values)
      .def_readonly("bit_width", &QuantizedVector::bit_width)
      .def("__len__", [](const QuantizedVector& v) { return v.values.size(); });

  m.def("clip", &clip, py::arg("x"), py::arg("lo"), py::arg("hi"));
  m.def(
      "quantize",
      [](const std::vector<double>& theta, const QuantConfig& cfg) { return quantize(theta, cfg); },
      py::arg("theta"), py::arg("cfg"));
  m.def("apply_weight", &apply_weight, py::arg("q"), py::arg("weight"), py::arg("cfg"));
  m.def("dequantize_aggregate", &dequantize_aggregate, py::arg("agg"), py::arg("weight_sum"),
        py::arg("cfg"));

  // --- shamir ---
  py::class_<FieldSpec>(m, "FieldSpec")
      .def(py::init([](Bigint prime) { return FieldSpec{std::move(prime)}; }), py::arg("prime"))
      .def_readonly("prime", &FieldSpec::prime);

  py::class_<Share>(m, "Share")
      .def(py::init([](uint64_t index, Bigint value) { return Share{index, std::move(value)}; }),
           py::arg("index"), py::arg("value"))
      .def_readonly("index", &Share::index)
      .def_readonly("value", &Share::value);

  m.def(
      "ss_share",
      [](const Bigint& secret, unsigned t, const std::vector<uint64_t>& members,
         const FieldSpec& field, Rng& rng) { return ss_share(secret, t, members, field, rng); },
      py::arg("secret"), py::arg("threshold"), py::arg("members"), py::arg("field"),
      py::arg("rng"));
  m.def(
      "ss_recon",
      [](const std::vector<Share>& shares, unsigned t, const FieldSpec& field) {
        return ss_recon(shares, t, field);
      },
      py::arg("shares"), py::arg("threshold"), py::arg("field"));
  m.def(
      "ss_add",
      [](const std::vector<Share>& a, const std::vector<Share>& b, const FieldSpec& field) {
        return ss_add(a, b, field);
      },
      py::arg("a"), py::arg("b"), py::arg("field"));

  // --- modular math / key agreement ---
  m.def("gen_prime", &gen_prime, py::arg("bits"), py::arg("rng"));
  m.def("is_probable_prime", &is_probable_prime, py::arg("n"), py::arg("rounds") = 40);
  m.def("next_prime_above", &next_prime_above, py::arg("lower"));
  m.def("mod_exp", &mod_exp, py::arg("base"), py::arg("exp"), py::arg("modulus"));
  m.def("mod_inv", &mod_inv, py::arg("a"), py::arg("modulus"));
  m.def(
      "hash_to_unit_group",
      [](const py::bytes& tag, const Bigint& n_squared) {
        std::string t = tag;
        return hash_to_unit_group(
            std::span(reinterpret_cast<const uint8_t*>(t.data()), t.size()), n_squared);
      },
      py::arg("tag"), py::arg("n_squared"));

  py::class_<DHGroup>(m, "DHGroup")
      .def(py::init([](Bigint p, Bigint q, Bigint g) {
             return DHGroup{std::move(p), std::move(q), std::move(g)};
           }),
           py::arg("p"), py::arg("q"), py::arg("g"))
      .def_readonly("p", &DHGroup::p)
      .def_readonly("q", &DHGroup::q)
      .def_readonly("g", &DHGroup::g)
      .def("is_valid", &DHGroup::is_valid)
      .def("validate", &DHGroup::validate);

  m.def("gen_dh_group", &gen_dh_group, py::arg("q_bits"), py::arg("p_bits"), py::arg("rng"));

  py::class_<KeyPair>(m, "KeyPair")
      .def_readonly("public_key", &KeyPair::public_key)
      .def_readonly("secret", &KeyPair::secret);

  py::class_<PairwiseSecret>(m, "PairwiseSecret")
      .def(py::init(&secret_from_bytes), py::arg("key_bytes"))
      .def_property_readonly(
          "key_bytes", [](const PairwiseSecret& s) { return to_py_bytes(s.key_bytes); })
      .def("__eq__", [](const PairwiseSecret& a, const PairwiseSecret& b) { return a == b; });

  m.def(
      "ka_param",
      [](const std::string& profile, Rng& rng) { return ka_param(parse_profile(profile), rng); },
      py::arg("profile"), py::arg("rng"));
  m.def("ka_gen", &ka_gen, py::arg("group"), py::arg("rng"));
  m.def("ka_agree", &ka_agree, py::arg("group"), py::arg("my_secret"), py::arg("their_public"));

  // --- joye-libert ---
  py::class_<JLParams>(m, "JLParams")
      .def_static("from_modulus", &JLParams::from_modulus, py::arg("modulus"))
      .def_readonly("modulus", &JLParams::modulus)
      .def_readonly("modulus_squared", &JLParams::modulus_squared)
      .def_readonly("modulus_bits", &JLParams::modulus_bits);

  py::class_<JLUserKey>(m, "JLUserKey")
      .def(py::init([](Bigint sk) { return JLUserKey{std::move(sk)}; }), py::arg("sk"))
      .def_readonly("sk", &JLUserKey::sk);
  py::class_<JLServerKey>(m, "JLServerKey")
      .def(py::init([](Bigint sk) { return JLServerKey{std::move(sk)}; }), py::arg("sk"))
      .def_readonly("sk", &JLServerKey::sk);

  py::class_<JLCiphertext>(m, "JLCiphertext")
      .def_readonly("residues", &JLCiphertext::residues)
      .def_property_readonly(
          "packed", [](const JLCiphertext& ct) { return ct.layout == CipherLayout::packed; })
      .def_readonly("slot_bits", &JLCiphertext::slot_bits)
      .def_readonly("slots_per_residue", &JLCiphertext::slots_per_residue)
      .def_readonly("element_count", &JLCiphertext::element_count)
      .def("__len__", [](const JLCiphertext& ct) { return ct.residues.size(); });

  py::class_<JLKeySet>(m, "JLKeySet")
      .def_readonly("user_keys", &JLKeySet::user_keys)
      .def_readonly("server_key", &JLKeySet::server_key)
      .def_readonly("params", &JLKeySet::params);

  m.def(
      "jl_setup",
      [](const std::string& profile, unsigned n, Rng& rng) {
        return jl_setup(parse_profile(profile), n, rng);
      },
      py::arg("profile"), py::arg("n_users"), py::arg("rng"));
  m.def(
      "round_tag",
      [](uint64_t tau, uint64_t index) { return to_py_bytes(round_tag(tau, index)); },
      py::arg("tau"), py::arg("index"));
  m.def(
      "jl_protect",
      [](const JLParams& pp, const JLUserKey& key, uint64_t tau, const QuantizedVector& x,
         unsigned sum_bits) { return jl_protect(pp, key, tau, x, sum_bits); },
      py::arg("params"), py::arg("key"), py::arg("tau"), py::arg("x"), py::arg("sum_bits"));
  m.def(
      "jl_protect_packed",
      [](const JLParams& pp, const JLUserKey& key, uint64_t tau, const QuantizedVector& x,
         unsigned sum_bits) { return jl_protect_packed(pp, key, tau, x, sum_bits); },
      py::arg("params"), py::arg("key"), py::arg("tau"), py::arg("x"), py::arg("sum_bits"));
  m.def(
      "jl_aggregate",
      [](const JLParams& pp, const JLServerKey& key, uint64_t tau,
         const std::vector<JLCiphertext>& cts, size_t expected) {
        return jl_aggregate(pp, key, tau, cts, expected);
      },
      py::arg("params"), py::arg("server_key"), py::arg("tau"), py::arg("ciphertexts"),
      py::arg("expected_count"));
  m.def(
      "jl_aggregate_packed",
      [](const JLParams& pp, const JLServerKey& key, uint64_t tau,
         const std::vector<JLCiphertext>& cts, size_t expected) {
        return jl_aggregate_packed(pp, key, tau, cts, expected);
      },
      py::arg("params"), py::arg("server_key"), py::arg("tau"), py::arg("ciphertexts"),
      py::arg("expected_count"));

  // --- lom ---
  py::class_<MaskedVector>(m, "MaskedVector")
      .def(py::init([](std::vector<uint64_t> values) { return MaskedVector{std::move(values)}; }),
           py::arg("values"))
      .def_readonly("values", &MaskedVector::values)
      .def("__len__", [](const MaskedVector& v) { return v.values.size(); });

  m.def("mask_stream", &mask_stream, py::arg("secret"), py::arg("tau"), py::arg("d"),
        py::arg("sum_bits"));
  m.def(
      "lom_protect",
      [](unsigned sum_bits, const std::map<uint64_t, PairwiseSecret>& secrets, uint64_t me,
         const std::vector<uint64_t>& cohort, uint64_t tau, const QuantizedVector& x) {
        return lom_protect(LOMParams{sum_bits}, secrets, me, cohort, tau, x);
      },
      py::arg("sum_bits"), py::arg("secrets"), py::arg("me"), py::arg("cohort"), py::arg("tau"),
      py::arg("x"));
  m.def(
      "lom_aggregate",
      [](unsigned sum_bits, const std::vector<MaskedVector>& masked, size_t expected) {
        return lom_aggregate(LOMParams{sum_bits}, masked, expected);
      },
      py::arg("sum_bits"), py::arg("masked"), py::arg("expected_count"));
  m.def(
      "dealer_pairwise_secrets",
      [](const std::vector<uint64_t>& nodes, Rng& rng) {
        return dealer_pairwise_secrets(nodes, rng);
      },
      py::arg("nodes"), py::arg("rng"));

  // --- protocol / harness ---
  m.def(
      "select_cohort",
      [](const std::vector<NodeId>& all_nodes, size_t n, uint64_t tau, uint64_t seed) {
        return select_cohort(all_nodes, n, tau, seed);
      },
      py::arg("all_nodes"), py::arg("n"), py::arg("tau"), py::arg("seed"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
        cfg.validate();
        ExperimentResult result = run_experiment(cfg);
        py::dict out;
        py::list rounds;
        for (const auto& r : result.rounds) rounds.append(report_to_dict(r));
        out["rounds"] = rounds;
        out["final_model"] = result.final_model;
        out["final_metric"] = result.final_metric;
        out["transcript_hash"] = to_py_bytes(result.transcript_hash);
        out["transcript_messages"] = result.transcript.size();
        return out;
      },
      py::arg("config_json"));

  m.def("default_config", [] { return ExperimentConfig{}.to_json_text(); });

  m.def(
      "run_benchmark",
      [](const std::vector<std::string>& schemes, const std::vector<uint64_t>& dims,
         const std::vector<unsigned>& cohorts, const std::string& profile, int samples,
         uint64_t seed) {
        BenchConfig cfg;
        cfg.schemes.clear();
        for (const auto& s : schemes) cfg.schemes.push_back(parse_scheme(s));
        cfg.dims = dims;
        cfg.cohorts = cohorts;
        cfg.profile = parse_profile(profile);
        cfg.samples = samples;
        cfg.seed = seed;
        BenchResult result = run_benchmark(cfg);
        py::list rows;
        for (const auto& r : result.rows) {
          py::dict d;
          d["scheme"] = r.scheme;
          d["d"] = r.d;
          d["n"] = r.n;
          d["profile"] = r.profile;
          d["op"] = r.op;
          d["median_s"] = r.median_s;
          d["p90_s"] = r.p90_s;
          rows.append(d);
        }
        return rows;
      },
      py::arg("schemes"), py::arg("dims"), py::arg("cohorts"), py::arg("profile") = "test",
      py::arg("samples") = 5, py::arg("seed") = 42);

  m.def("selftest", [] {
    py::list out;
    for (const auto& r : selftest()) {
      py::dict d;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      out.append(d);
    }
    return out;
  });
}
