import numpy as np
import pytest

from entroverify import (
    QuantumChannel,
    ValidationError,
    apply,
    channel_trace_distance,
    choi_to_kraus,
    density,
    depolarizing,
    diamond_distance,
    extend_apply,
    identity_channel,
    kraus_to_choi,
    kron,
    mix_channels,
    pauli_channel,
    random_channel,
    random_density,
    randomizing,
    replacer,
    tensor_channels,
    trace_distance,
)
from entroverify.serialization import (
    channel_from_dict,
    channel_to_dict,
    load_channel,
    load_state,
    save_channel,
    save_state,
)


class TestChannelType:
    def test_trace_preservation_enforced(self):
        bad = (np.array([[1.0, 0.0], [0.0, 0.5]]),)
        with pytest.raises(ValidationError, match="trace preserving"):
            QuantumChannel(bad, 2, 2)

    def test_choi_properties(self):
        for seed in range(10):
            ch = random_channel(2, 3, seed=seed)
            w = np.linalg.eigvalsh(ch.choi)
            assert w[0] > -1e-9
            assert abs(np.trace(ch.choi).real - 1.0) < 1e-9
            marginal = np.einsum("iaib->ab", ch.choi.reshape(3, 2, 3, 2))
            assert np.abs(marginal - np.eye(2) / 2).max() < 1e-9

    def test_randomizing_choi_is_product(self):
        ch = randomizing(2, 2)
        expected = np.kron(np.eye(2) / 2, np.eye(2) / 2)
        assert np.abs(ch.choi - expected).max() < 1e-12

    def test_trace_preservation_across_seeds(self):
        for seed in range(1000):
            ch = random_channel(2, 2, seed=seed)
            tp = sum(K.conj().T @ K for K in ch.kraus)
            assert np.abs(tp - np.eye(2)).max() < 1e-9


class TestApply:
    def test_identity(self):
        rho = random_density(3, 3, seed=1)
        out = apply(identity_channel(3), rho)
        assert np.abs(out.matrix - rho.matrix).max() < 1e-12

    def test_randomizing_outputs_maximally_mixed(self):
        for seed in range(5):
            rho = random_density(2, 2, seed=seed)
            out = apply(randomizing(2, 3), rho)
            assert np.abs(out.matrix - np.eye(3) / 3).max() < 1e-12

    def test_replacer_outputs_target(self):
        sigma = random_density(3, 2, seed=7)
        ch = replacer(sigma, 2)
        for seed in range(5):
            out = apply(ch, random_density(2, 2, seed=seed))
            assert np.abs(out.matrix - sigma.matrix).max() < 1e-12

    def test_depolarizing_zero_is_identity(self):
        ch = depolarizing(3, 0.0)
        for seed in range(10):
            rho = random_density(3, 3, seed=seed)
            assert np.abs(apply(ch, rho).matrix - rho.matrix).max() < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="dimension"):
            apply(identity_channel(2), random_density(3, 3, seed=0))


class TestExtendApply:
    def test_identity_channel(self):
        rho = density(random_density(4, 4, seed=2).matrix, (2, 2))
        out = extend_apply(identity_channel(2), rho)
        assert np.abs(out.matrix - rho.matrix).max() < 1e-12

    def test_product_input(self):
        a = random_density(2, 2, seed=3)
        r = random_density(3, 3, seed=4)
        ch = random_channel(2, 2, seed=5)
        rho = density(kron(a, r).matrix, (2, 3))
        out = extend_apply(ch, rho)
        expected = kron(apply(ch, a), r)
        assert np.abs(out.matrix - expected.matrix).max() < 1e-10

    def test_reference_marginal_preserved(self):
        rho = density(random_density(6, 6, seed=6).matrix, (2, 3))
        ch = random_channel(2, 3, seed=7)
        out = extend_apply(ch, rho)
        before = np.einsum("aiaj->ij", rho.matrix.reshape(2, 3, 2, 3))
        after = np.einsum("aiaj->ij", out.matrix.reshape(3, 3, 3, 3))
        assert np.abs(after - before).max() < 1e-10


class TestChoiKraus:
    def test_round_trip(self):
        for seed in range(10):
            ch = random_channel(2, 2, seed=seed)
            kraus = choi_to_kraus(ch.choi, 2, 2)
            back = kraus_to_choi(kraus, 2, 2)
            assert np.abs(back - ch.choi).max() < 1e-8

    def test_pauli_channel(self):
        probs = [0.6, 0.2, 0.1, 0.1]
        ch = pauli_channel(probs)
        assert abs(np.trace(ch.choi).real - 1.0) < 1e-12
        with pytest.raises(ValidationError):
            pauli_channel([0.5, 0.5, 0.5, -0.5])


class TestDiamondDistance:
    def test_same_channel_is_zero(self):
        ch = random_channel(2, 2, seed=8)
        bracket = diamond_distance(ch, ch, seed=1)
        assert bracket.lower <= 1e-9 and bracket.upper <= 1e-6

    @pytest.mark.parametrize("p", [0.2, 0.5])
    def test_identity_vs_depolarizing(self, p):
        bracket = diamond_distance(identity_channel(2), depolarizing(2, p), seed=1)
        exact = 0.75 * p
        assert bracket.lower <= exact + 1e-8
        assert bracket.upper >= exact - 1e-8
        assert bracket.upper - bracket.lower < 1e-6
        assert abs(bracket.lower - exact) < 1e-6

    def test_replacer_pair_equals_state_distance(self):
        s1 = random_density(2, 2, seed=9)
        s2 = random_density(2, 2, seed=10)
        bracket = diamond_distance(replacer(s1, 2), replacer(s2, 2), seed=1)
        exact = trace_distance(s1, s2)
        assert abs(bracket.lower - exact) < 1e-8
        assert abs(bracket.upper - exact) < 1e-6

    def test_pauli_pair(self):
        first = pauli_channel([0.7, 0.1, 0.1, 0.1])
        second = pauli_channel([0.4, 0.3, 0.2, 0.1])
        bracket = diamond_distance(first, second, seed=1)
        exact = 0.5 * (0.3 + 0.2 + 0.1)
        assert bracket.lower <= exact + 1e-9 <= bracket.upper + 2e-9
        assert abs(bracket.lower - exact) < 1e-8

    def test_bracket_and_cheap_bounds(self):
        first = random_channel(2, 2, seed=11)
        second = random_channel(2, 2, seed=12)
        bracket = diamond_distance(first, second, seed=1)
        assert 0.0 <= bracket.lower <= bracket.upper <= 1.0 + 1e-9
        choi_dist = trace_distance(first.choi * 2, second.choi * 2) / 2 * 2
        # halved diamond >= halved Choi distance; <= dA * halved Choi distance
        half_choi = trace_distance(first.choi, second.choi)
        assert bracket.lower >= half_choi - 1e-8
        assert bracket.upper <= 2 * half_choi + 1e-6
        assert np.isfinite(choi_dist)

    def test_raw_flag_doubles(self):
        first = random_channel(2, 2, seed=13)
        second = random_channel(2, 2, seed=14)
        halved = diamond_distance(first, second, seed=1)
        raw = diamond_distance(first, second, seed=1, halved=False)
        assert abs(raw.lower - 2 * halved.lower) < 1e-12
        assert abs(raw.upper - 2 * halved.upper) < 1e-12

    def test_mixture_construction(self):
        first = random_channel(2, 2, seed=15)
        kick = random_channel(2, 2, seed=16)
        mixed = mix_channels([first, kick], [0.7, 0.3])
        rho = random_density(2, 2, seed=17)
        expected = 0.7 * apply(first, rho).matrix + 0.3 * apply(kick, rho).matrix
        assert np.abs(apply(mixed, rho).matrix - expected).max() < 1e-12


class TestChannelTraceDistance:
    def test_same_channel(self):
        ch = random_channel(2, 2, seed=18)
        assert channel_trace_distance(ch, ch, seed=1) < 1e-9

    def test_replacer_pair_exact(self):
        s1 = random_density(2, 2, seed=19)
        s2 = random_density(2, 2, seed=20)
        value = channel_trace_distance(replacer(s1, 2), replacer(s2, 2), seed=1)
        assert abs(value - trace_distance(s1, s2)) < 1e-9

    def test_no_ancilla_below_diamond(self):
        for seed in range(5):
            first = random_channel(2, 2, seed=seed)
            second = random_channel(2, 2, seed=seed + 100)
            ctd = channel_trace_distance(first, second, seed=1)
            bracket = diamond_distance(first, second, seed=1)
            assert ctd <= bracket.lower + 1e-8

    def test_ancilla_strictly_helps_for_depolarizing(self):
        ctd = channel_trace_distance(identity_channel(2), depolarizing(2, 0.2), seed=1)
        assert abs(ctd - 0.1) < 1e-8


class TestTensor:
    def test_tensor_of_replacers_is_replacer(self):
        s1 = random_density(2, 2, seed=21)
        s2 = random_density(2, 2, seed=22)
        tensored = tensor_channels(replacer(s1, 2), replacer(s2, 2))
        rho = random_density(4, 4, seed=23)
        out = apply(tensored, rho)
        assert np.abs(out.matrix - np.kron(s1.matrix, s2.matrix)).max() < 1e-10


class TestSerialization:
    def test_channel_round_trip(self, tmp_path):
        ch = random_channel(2, 3, seed=24)
        path = tmp_path / "channel.json"
        save_channel(ch, path)
        back = load_channel(path)
        assert np.abs(back.choi - ch.choi).max() < 1e-12

    def test_state_round_trip(self, tmp_path):
        rho = density(random_density(4, 4, seed=25).matrix, (2, 2))
        path = tmp_path / "state.json"
        save_state(rho, path)
        back = load_state(path)
        assert back.dims == (2, 2)
        assert np.abs(back.matrix - rho.matrix).max() < 1e-12

    def test_load_rejects_grossly_nonphysical(self):
        payload = channel_to_dict(identity_channel(2))
        payload["kraus"][0]["real"][0][0] = 1.5
        with pytest.raises(ValidationError, match="trace preservation"):
            channel_from_dict(payload)

    def test_load_repairs_tiny_defect(self):
        payload = channel_to_dict(identity_channel(2))
        payload["kraus"][0]["real"][0][0] = 1.0 + 3e-9
        ch = channel_from_dict(payload)
        tp = sum(K.conj().T @ K for K in ch.kraus)
        assert np.abs(tp - np.eye(2)).max() < 1e-12
