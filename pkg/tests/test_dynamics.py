import math
import random

import numpy as np
import pytest

from qdisk.exact import GATES, H, SimulationError, X, Z, apply_gate, make_state, probabilities
from qdisk.disks import BLUE, ORANGE, canonical_text, decode, encode_pair, encode_qubit
from qdisk.dynamics import (
    apply_controlled_disk,
    apply_gate_disk,
    cancel,
    naive_probabilities,
    spin_window,
)
from conftest import disk, fig3_disk, fig5_disk, random_state_vector


def text(d) -> list[str]:
    return canonical_text(d).splitlines()


class TestApplyGateDisk:
    def test_hadamard_splits_half_half(self):
        out = apply_gate_disk(disk((0.5, "B", 1), (0.5, "O", 1)), H, 0)
        assert text(out) == [
            "0.250000000 B +",
            "0.250000000 O +",
            "0.250000000 B +",
            "0.250000000 O -",
        ]

    def test_x_relabels_colors(self):
        out = apply_gate_disk(disk((1.0, "B", 1)), X, 0)
        assert text(out) == ["1.000000000 O +"]

    def test_fig9_split(self):
        out = apply_gate_disk(disk((2 / 3, "B", 1), (1 / 3, "O", 1)), H, 0)
        fractions = [r.fraction for r in out.regions]
        signs = [r.sign for r in out.regions]
        colors = [r.colors[0] for r in out.regions]
        assert fractions == pytest.approx([1 / 3, 1 / 3, 1 / 6, 1 / 6], abs=1e-12)
        assert signs == [1, 1, 1, -1]
        assert colors == [BLUE, ORANGE, BLUE, ORANGE]

    def test_target_out_of_range(self):
        with pytest.raises(SimulationError):
            apply_gate_disk(disk((1.0, "B", 1)), H, 1)

    def test_fraction_conservation(self):
        rng = random.Random(4)
        d, _ = encode_pair(random_state_vector(rng, 2))
        for _ in range(6):
            d = apply_gate_disk(d, rng.choice([X, Z, H]), rng.randrange(2))
        assert math.fsum(r.fraction for r in d.regions) == pytest.approx(1.0, abs=1e-9)

    def test_z_flips_orange_signs_only(self):
        d = fig3_disk()
        out = apply_gate_disk(d, Z, 1)
        assert [r.fraction for r in out.regions] == [r.fraction for r in d.regions]
        for before, after in zip(d.regions, out.regions):
            expected = -before.sign if before.colors[1] is ORANGE else before.sign
            assert after.sign == expected


class TestApplyControlledDisk:
    def test_fig7_cnot_outer_control(self):
        d = disk((0.25, "BB", 1), (0.15, "BO", 1), (0.15, "OO", 1), (0.45, "OB", 1))
        out = apply_controlled_disk(d, X, control=0, target=1)
        assert text(out) == [
            "0.250000000 BB +",
            "0.150000000 BO +",
            "0.150000000 OB +",
            "0.450000000 OO +",
        ]

    def test_all_blue_control_is_identity(self):
        d = disk((0.6, "BB", 1), (0.4, "BO", 1))
        assert apply_controlled_disk(d, X, 0, 1) == d

    def test_teleport_setup_cnot(self):
        d = disk((0.35, "BBB", 1), (0.35, "BOO", 1), (0.15, "OBB", 1), (0.15, "OOO", 1))
        out = apply_controlled_disk(d, X, control=0, target=1)
        assert text(out) == [
            "0.350000000 BBB +",
            "0.350000000 BOO +",
            "0.150000000 OOB +",
            "0.150000000 OBO +",
        ]

    def test_control_equals_target(self):
        with pytest.raises(SimulationError):
            apply_controlled_disk(fig3_disk(), X, 1, 1)


class TestSpinWindow:
    def test_single_region_is_certain(self):
        d = disk((1.0, "O", 1))
        outcomes, residual = spin_window(d, [0], 0.73)
        assert outcomes[0].color is ORANGE
        assert outcomes[0].probability == pytest.approx(1.0)
        assert outcomes[0].window_angle == 0.73
        assert residual == d

    def test_fig5_blue_branch(self):
        outcomes, residual = spin_window(fig5_disk(), [0], 0.2)
        assert outcomes[0].color is BLUE
        assert outcomes[0].probability == pytest.approx(0.4, abs=1e-12)
        assert text(residual) == ["0.250000000 BB +", "0.750000000 BO +"]

    def test_fig5_orange_branch(self):
        outcomes, residual = spin_window(fig5_disk(), [0], 0.9)
        assert outcomes[0].color is ORANGE
        assert outcomes[0].probability == pytest.approx(0.6, abs=1e-12)
        fractions = [r.fraction for r in residual.regions]
        assert fractions == pytest.approx([1 / 3, 2 / 3], abs=1e-12)

    def test_boundary_belongs_to_next_region(self):
        outcomes, _ = spin_window(fig5_disk(), [0, 1], 0.1)
        assert [o.color for o in outcomes] == [BLUE, ORANGE]

    def test_empty_qubit_list_is_error(self):
        with pytest.raises(SimulationError):
            spin_window(fig5_disk(), [], 0.5)

    def test_residual_matches_exact_projection(self):
        rng = random.Random(31)
        for _ in range(30):
            gray = random_state_vector(rng, 2)
            d, _ = encode_pair(gray)
            state = make_state([gray[0], gray[1], gray[3], gray[2]])
            draw = rng.random()
            outcomes, residual = spin_window(d, [0], draw)
            from qdisk.exact import collapse

            collapsed = collapse(state, 0, int(outcomes[0].color is ORANGE))
            assert np.allclose(
                np.abs(decode(residual).amplitudes), np.abs(collapsed.amplitudes), atol=1e-9
            )

    def test_frequencies_match_naive_probabilities(self):
        d = apply_gate_disk(disk((2 / 3, "B", 1), (1 / 3, "O", 1)), H, 0)
        grid = 2000
        orange = sum(
            spin_window(d, [0], (k + 0.5) / grid)[0][0].color is ORANGE for k in range(grid)
        )
        assert abs(orange / grid - naive_probabilities(d)[1]) <= 1 / grid


class TestCancel:
    def test_double_hadamard_cancels_completely(self):
        d = disk((0.25, "B", 1), (0.25, "O", 1), (0.25, "B", 1), (0.25, "O", -1))
        out, report = cancel(d)
        assert text(out) == ["1.000000000 B +"]
        assert report.cancelled_pairs == 1
        assert report.removed_fraction == pytest.approx(0.5, abs=1e-12)
        assert report.renormalization_factor == pytest.approx(2.0, abs=1e-9)
        assert report.sound is True

    def test_all_positive_disk_unchanged(self):
        d = fig3_disk()
        out, report = cancel(d)
        assert out == d
        assert report.cancelled_pairs == 0
        assert report.removed_fraction == 0.0
        assert report.sound is True

    def test_fig9_has_no_pair_and_is_unsound(self):
        d = disk((1 / 3, "B", 1), (1 / 3, "O", 1), (1 / 6, "B", 1), (1 / 6, "O", -1))
        out, report = cancel(d)
        assert out == d
        assert report.cancelled_pairs == 0
        assert report.sound is False

    def test_full_cancellation_is_error(self):
        d = disk((0.5, "B", 1), (0.5, "B", -1))
        with pytest.raises(SimulationError):
            cancel(d)

    def test_non_adjacent_pairs_match(self):
        d = disk((0.2, "O", -1), (0.6, "B", 1), (0.2, "O", 1))
        out, report = cancel(d)
        assert text(out) == ["1.000000000 B +"]
        assert report.cancelled_pairs == 1

    def test_order_independence_for_exact_cases(self):
        # all (colors, sign) combinations distinct, so no shuffle can trigger
        # the constructor merge and every ordering feeds cancel the same slices
        base = [
            (0.15, "BB", 1),
            (0.15, "BB", -1),
            (0.1, "OO", 1),
            (0.1, "OO", -1),
            (0.5, "BO", 1),
        ]
        results = set()
        rng = random.Random(8)
        for _ in range(10):
            shuffled = base[:]
            rng.shuffle(shuffled)
            try:
                out, report = cancel(disk(*shuffled))
            except SimulationError:
                pytest.fail("exact cancellation should always succeed")
            assert report.cancelled_pairs == 2
            results.add(frozenset((round(r.fraction, 12), r.colors, r.sign) for r in out.regions))
        assert len(results) == 1

    def test_exactness_criterion(self):
        # at most one uncancelled term per outcome -> sound
        d = disk((0.3, "B", 1), (0.2, "O", 1), (0.3, "B", -1), (0.2, "O", 1))
        out, report = cancel(d)
        assert report.sound is True
        assert naive_probabilities(out) == pytest.approx([0.0, 1.0])


class TestNaiveProbabilities:
    def test_single_region(self):
        assert naive_probabilities(disk((1.0, "B", 1))) == pytest.approx([1.0, 0.0])

    def test_fig3_binary_order(self):
        probs = naive_probabilities(fig3_disk())
        assert probs == pytest.approx([1 / 3, 1 / 6, 1 / 6, 1 / 3], abs=1e-12)

    def test_sign_blind(self):
        probs = naive_probabilities(disk((0.5, "B", 1), (0.5, "O", -1)))
        assert probs == pytest.approx([0.5, 0.5])

    def test_fig9_post_hadamard_reads_half_half(self):
        # the sign-blind area reading deliberately differs from the exact
        # orange fraction (1/sqrt3 - 1/sqrt6)^2
        d = apply_gate_disk(disk((2 / 3, "B", 1), (1 / 3, "O", 1)), H, 0)
        assert naive_probabilities(d) == pytest.approx([0.5, 0.5], abs=1e-12)


class TestGateTrackEquivalence:
    def test_random_sequences_stay_in_lockstep(self):
        rng = random.Random(77)
        for _ in range(100):
            n = rng.choice([1, 2, 3])
            vec = random_state_vector(rng, n)
            state = make_state(vec)
            if n == 1:
                d = encode_qubit(vec[0], vec[1])
            elif n == 2:
                d, _ = encode_pair([vec[0], vec[1], vec[3], vec[2]])
            else:
                d, _ = encode_pair([1.0, 0.0, 0.0, 0.0])
                from qdisk.disks import tensor

                d = tensor(encode_qubit(1.0, 0.0), d)
                state = make_state([1.0] + [0.0] * 7)
            for _ in range(6):
                if n >= 2 and rng.random() < 0.3:
                    control = rng.randrange(n)
                    target = (control + 1 + rng.randrange(n - 1)) % n
                    d = apply_controlled_disk(d, X, control, target)
                    state = apply_gate(state, X, target, control=control)
                else:
                    gate = rng.choice([X, Z, H])
                    target = rng.randrange(n)
                    d = apply_gate_disk(d, gate, target)
                    state = apply_gate(state, gate, target)
                assert np.allclose(decode(d).amplitudes, state.amplitudes, atol=1e-9)

    def test_double_hadamard_soundness_on_basis_states(self):
        for bit in (0, 1):
            start = encode_qubit(1.0 - bit, float(bit))
            out, report = cancel(apply_gate_disk(apply_gate_disk(start, H, 0), H, 0))
            assert canonical_text(out) == canonical_text(start)
            assert report.sound is True
