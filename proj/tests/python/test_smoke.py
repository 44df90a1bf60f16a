"""Smoke tests for the python bindings: each core operation exercised once,
with plaintext oracles where the result is checkable by hand."""

import json

import pytest

import secagg


def test_quantize_roundtrip():
    cfg = secagg.QuantConfig(input_bits=3, weight_bits=2, cohort_size=2,
                             clip_lo=0.0, clip_hi=1.0)
    q = secagg.quantize([0.5, 0.0, 1.0], cfg)
    assert q.values == [4, 0, 7]
    w = secagg.apply_weight(q, 3, cfg)
    assert w.values == [12, 0, 21]
    back = secagg.dequantize_aggregate(w, 3, cfg)
    assert back[0] == pytest.approx(0.5)
    assert back[1] == pytest.approx(0.0)


def test_clip():
    assert secagg.clip(5.0, -2.0, 2.0) == 2.0
    with pytest.raises(secagg.SecaggError):
        secagg.clip(0.0, 2.0, 1.0)


def test_shamir_roundtrip_and_addition():
    rng = secagg.Rng(7)
    field = secagg.FieldSpec(prime=2**127 - 1)
    members = [1, 2, 3, 4, 5]
    s1, s2 = 123456789, 987654321
    sh1 = secagg.ss_share(s1, 3, members, field, rng)
    sh2 = secagg.ss_share(s2, 3, members, field, rng)
    assert secagg.ss_recon(sh1[1:4], 3, field) == s1
    total = secagg.ss_add(sh1, sh2, field)
    assert secagg.ss_recon(total, 3, field) == s1 + s2


def test_bigint_boundary_values():
    rng = secagg.Rng(11)
    p = secagg.gen_prime(64, rng)
    assert p.bit_length() == 64
    assert secagg.is_probable_prime(p)
    assert secagg.mod_exp(2, 15, 23) == 16
    assert secagg.mod_inv(4, 1225) == 919
    assert secagg.next_prime_above(10) == 11


def test_key_agreement_symmetry():
    rng = secagg.Rng(13)
    group = secagg.gen_dh_group(32, 96, rng)
    group.validate()
    u, v = secagg.ka_gen(group, rng), secagg.ka_gen(group, rng)
    suv = secagg.ka_agree(group, u.secret, v.public_key)
    svu = secagg.ka_agree(group, v.secret, u.public_key)
    assert suv.key_bytes == svu.key_bytes


def test_jl_end_to_end():
    rng = secagg.Rng(17)
    keys = secagg.jl_setup("test", 3, rng)
    xs = [[1, 2, 3], [10, 20, 30], [100, 200, 300]]
    cts = [
        secagg.jl_protect_packed(keys.params, keys.user_keys[u],
                                 5, secagg.QuantizedVector(xs[u], 16), 20)
        for u in range(3)
    ]
    agg = secagg.jl_aggregate_packed(keys.params, keys.server_key, 5, cts, 3)
    assert agg.values == [111, 222, 333]


def test_jl_toy_modulus():
    pp = secagg.JLParams.from_modulus(35)
    assert pp.modulus_squared == 1225
    ct = secagg.jl_protect(pp, secagg.JLUserKey(2), 0,
                           secagg.QuantizedVector([3], 5), 5)
    agg = secagg.jl_aggregate(pp, secagg.JLServerKey(-2), 0, [ct], 1)
    assert agg.values == [3]


def test_lom_end_to_end():
    rng = secagg.Rng(19)
    nodes = [1, 2, 3, 4]
    secrets = secagg.dealer_pairwise_secrets(nodes, rng)
    xs = {u: [u * 10 + i for i in range(5)] for u in nodes}
    masked = [
        secagg.lom_protect(16, secrets[u], u, nodes, 9,
                           secagg.QuantizedVector(xs[u], 8))
        for u in nodes
    ]
    agg = secagg.lom_aggregate(16, masked, 4)
    expect = [sum(xs[u][i] for u in nodes) for i in range(5)]
    assert agg.values == expect


def test_mask_stream_determinism():
    s = secagg.PairwiseSecret(b"\x42" * 32)
    a = secagg.mask_stream(s, 3, 16, 12)
    b = secagg.mask_stream(s, 3, 16, 12)
    assert a == b
    assert all(v < 2**12 for v in a)


def test_select_cohort():
    cohort = secagg.select_cohort(list(range(1, 181)), 18, 0, 42)
    assert len(cohort) == 18
    assert cohort == sorted(cohort)
    assert cohort == secagg.select_cohort(list(range(1, 181)), 18, 0, 42)


def test_run_experiment_and_determinism():
    cfg = json.loads(secagg.default_config())
    cfg.update(scheme="LOM", n_tot=4, n=3, T=3, d=5, seed=99)
    cfg["task"]["samples_per_node"] = 30
    a = secagg.run_experiment_dict(cfg)
    b = secagg.run_experiment_dict(cfg)
    assert len(a["rounds"]) == 3
    assert a["transcript_hash"] == b["transcript_hash"]
    assert a["final_model"] == b["final_model"]
    assert a["rounds"][0]["total_s"] >= 0


def test_jl_rejects_client_selection():
    cfg = json.loads(secagg.default_config())
    cfg.update(scheme="JL", n_tot=4, n=3, T=1)
    with pytest.raises(secagg.SecaggError):
        secagg.run_experiment_dict(cfg)


def test_selftest_green():
    results = secagg.selftest()
    assert results and all(r["pass"] for r in results)
