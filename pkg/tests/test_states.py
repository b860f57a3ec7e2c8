import json
import math

import numpy as np
import pytest

from duality_lab import (
    CutoffPolicy,
    CutoffTooSmall,
    FockCutoff,
    MalformedSpec,
    StateSpec,
    TwoModeState,
    apply_phase,
    build_state,
    embed,
    ginibre_state,
    load_spec,
    save_spec,
    spec_from_dict,
    spec_to_dict,
    swap_modes,
    tensor_diagonal_probabilities,
    validate,
)
from duality_lab.states import poisson_min_cutoff, thermal_min_cutoff

from conftest import poisson_tail


def test_fock_basis_placement():
    state = build_state(StateSpec.fock(1, 0, CutoffPolicy.explicit(1)))
    assert state.rho.shape == (4, 4)
    expected = np.zeros((4, 4))
    expected[2, 2] = 1.0  # flat index i*(n_max+1)+j = 1*2+0
    np.testing.assert_array_equal(state.rho, expected)


def test_noon_state_matrix():
    state = build_state(StateSpec.noon(2, 0.0, CutoffPolicy.explicit(2)))
    c = state.cutoff
    nz = {(c.index(2, 0), c.index(2, 0)), (c.index(2, 0), c.index(0, 2)),
          (c.index(0, 2), c.index(2, 0)), (c.index(0, 2), c.index(0, 2))}
    for r in range(9):
        for s in range(9):
            want = 0.5 if (r, s) in nz else 0.0
            assert state.rho[r, s] == pytest.approx(want, abs=1e-15)


def test_noon_relative_phase_sits_off_diagonal():
    theta = 0.7
    state = build_state(StateSpec.noon(2, theta))
    c = state.cutoff
    assert state.rho[c.index(0, 2), c.index(2, 0)] == pytest.approx(0.5 * np.exp(1j * theta))
    np.testing.assert_allclose(
        tensor_diagonal_probabilities(state),
        tensor_diagonal_probabilities(build_state(StateSpec.noon(2, 0.0))),
        atol=1e-15,
    )


def test_coherent_auto_cutoff_matches_poisson_oracle():
    # frozen from the cumulative-Poisson oracle: mean 1 and tail 1e-12 needs 14
    assert poisson_min_cutoff(1.0, 1e-12) == 14
    assert poisson_tail(1.0, 14) <= 1e-12
    assert poisson_tail(1.0, 13) > 1e-12
    # second frozen case: mean 2.25 (amplitude 1.5) needs 19
    assert poisson_min_cutoff(2.25, 1e-12) == 19
    assert poisson_tail(2.25, 19) <= 1e-12
    assert poisson_tail(2.25, 18) > 1e-12
    # built states reserve 4 extra levels so k <= 4 moments keep tail accuracy
    state = build_state(StateSpec.coherent(1.0, 1.0, CutoffPolicy.auto(1e-12)))
    assert state.n_max == 18
    assert poisson_tail(1.0, state.n_max) <= 1e-12


def test_coherent_diagonal_is_renormalized_poisson_product():
    state = build_state(StateSpec.coherent(1.0, 1.0, CutoffPolicy.auto(1e-12)))
    probs = tensor_diagonal_probabilities(state)
    n = np.arange(state.n_max + 1)
    pois = np.exp(-1.0) / np.array([math.factorial(int(m)) for m in n])
    joint = np.outer(pois, pois)
    joint /= joint.sum()
    np.testing.assert_allclose(probs, joint, atol=1e-14)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert 0.0 <= state.tail_mass < 1e-11
    # a looser tail budget leaves a measurable, still-bounded tail behind
    coarse = build_state(StateSpec.coherent(1.0, 1.0, CutoffPolicy.auto(1e-6)))
    assert 0.0 < coarse.tail_mass < 2e-6


def test_coherent_state_is_rank_one():
    state = build_state(StateSpec.coherent(0.8 + 0.3j, 1.1, CutoffPolicy.auto(1e-10)))
    eigs = np.linalg.eigvalsh(state.rho)
    assert eigs[-1] == pytest.approx(1.0, abs=1e-12)
    assert abs(eigs[:-1]).max() < 1e-12
    assert state.pure is True


def test_thermal_auto_cutoff_bounds_geometric_tail():
    for mean in (0.0, 0.4, 1.7):
        n = thermal_min_cutoff(mean, 1e-9)
        if mean > 0:
            ratio = mean / (1.0 + mean)
            assert ratio ** (n + 1) <= 1e-9
            assert n == 0 or ratio**n > 1e-9
        else:
            assert n == 0
    state = build_state(StateSpec.thermal(0.5, 1.0, CutoffPolicy.auto(1e-9)))
    report = validate(state)
    assert report.passed
    assert state.tail_mass < 2e-9


def test_validate_passes_valid_state_and_reports_trace_defect():
    good = build_state(StateSpec.fock(1, 0, CutoffPolicy.explicit(1)))
    assert validate(good).passed

    bad = TwoModeState(FockCutoff(1), 0.5 * good.rho)
    report = validate(bad)
    assert not report.passed
    assert report.trace_defect == pytest.approx(0.5)
    assert report.hermitian_ok and report.psd_ok and not report.trace_ok


def test_validate_flags_non_hermitian_and_negative_matrices():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    rho[0, 1] = 0.25
    report = validate(TwoModeState(FockCutoff(1), rho))
    assert report.hermiticity_defect == pytest.approx(0.25)
    assert not report.passed

    rho2 = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    report2 = validate(TwoModeState(FockCutoff(1), rho2))
    assert report2.min_eigenvalue == pytest.approx(-0.5)
    assert not report2.psd_ok


def test_ginibre_states_satisfy_invariants():
    rng = np.random.default_rng(7)
    for n_max in (1, 2, 3):
        for _ in range(20):
            assert validate(ginibre_state(FockCutoff(n_max), rng)).passed


def test_every_spec_kind_builds_a_valid_state():
    specs = [
        StateSpec.fock(2, 1),
        StateSpec.noon(3, 1.1),
        StateSpec.coherent(0.6, -0.4 + 0.2j),
        StateSpec.thermal(0.8, 0.2),
        StateSpec.mixture([(0.25, StateSpec.fock(1, 0)), (0.75, StateSpec.thermal(0.5, 0.5))]),
    ]
    for spec in specs:
        report = validate(build_state(spec))
        assert report.passed, spec.kind


def test_mixture_is_weighted_sum_at_common_cutoff():
    parts = [(0.3, StateSpec.fock(2, 0)), (0.7, StateSpec.coherent(0.9, 0.5))]
    mixed = build_state(StateSpec.mixture(parts, CutoffPolicy.auto(1e-10)))
    total = np.zeros_like(mixed.rho)
    for w, comp in parts:
        total = total + w * build_state(comp, at_cutoff=mixed.cutoff).rho
    assert np.max(np.abs(mixed.rho - total)) <= 1e-14


def test_diagonal_probabilities_ignore_global_phase():
    base = StateSpec.coherent(0.7 + 0.1j, 0.4, CutoffPolicy.explicit(8))
    turned = StateSpec.coherent((0.7 + 0.1j) * np.exp(1j * 0.9), 0.4 * np.exp(1j * 0.9), CutoffPolicy.explicit(8))
    np.testing.assert_allclose(
        tensor_diagonal_probabilities(build_state(base)),
        tensor_diagonal_probabilities(build_state(turned)),
        atol=1e-14,
    )


def test_diagonal_probability_examples():
    one_zero = build_state(StateSpec.fock(1, 0, CutoffPolicy.explicit(1)))
    p = tensor_diagonal_probabilities(one_zero)
    assert p[1, 0] == 1.0 and p.sum() == 1.0

    noon = build_state(StateSpec.noon(2))
    p2 = tensor_diagonal_probabilities(noon)
    assert p2[2, 0] == pytest.approx(0.5) and p2[0, 2] == pytest.approx(0.5)


def test_malformed_specs_rejected():
    with pytest.raises(MalformedSpec):
        StateSpec.mixture([(0.5, StateSpec.fock(0, 0)), (0.6, StateSpec.fock(1, 1))])
    with pytest.raises(MalformedSpec):
        StateSpec.mixture([(-0.1, StateSpec.fock(0, 0)), (1.1, StateSpec.fock(1, 1))])
    with pytest.raises(MalformedSpec):
        StateSpec.thermal(-1.0, 0.0)
    with pytest.raises(MalformedSpec):
        StateSpec.noon(0)
    with pytest.raises(MalformedSpec):
        CutoffPolicy.auto(0.0)
    with pytest.raises(CutoffTooSmall):
        build_state(StateSpec.fock(3, 0, CutoffPolicy.explicit(2)))
    with pytest.raises(CutoffTooSmall):
        build_state(StateSpec.noon(2, 0.0, CutoffPolicy.explicit(1)))


def test_raw_spec_validation():
    good = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    state = build_state(StateSpec.raw(good))
    assert validate(state).passed

    lopsided = np.diag([0.5, 0.25, 0.0, 0.0]).astype(complex)
    with pytest.raises(MalformedSpec):
        build_state(StateSpec.raw(lopsided))
    with pytest.raises(MalformedSpec):
        StateSpec.raw(np.eye(3, dtype=complex))  # 3 is not a perfect square


def test_spec_json_round_trip():
    specs = [
        StateSpec.fock(1, 2, CutoffPolicy.explicit(3)),
        StateSpec.noon(2, 0.25),
        StateSpec.coherent(1.0 + 0.5j, -0.3j, CutoffPolicy.auto(1e-10)),
        StateSpec.thermal(0.7, 0.0),
        StateSpec.mixture([(0.5, StateSpec.fock(1, 0)), (0.5, StateSpec.noon(1))]),
        StateSpec.raw(np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)),
    ]
    for spec in specs:
        doc = json.loads(json.dumps(spec_to_dict(spec)))
        again = spec_from_dict(doc)
        np.testing.assert_allclose(build_state(again).rho, build_state(spec).rho, atol=1e-15)


def test_spec_file_round_trip_and_bad_json(tmp_path):
    path = tmp_path / "state.json"
    save_spec(StateSpec.noon(2, 0.1), path)
    state = build_state(load_spec(path))
    assert validate(state).passed

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedSpec):
        load_spec(bad)
    with pytest.raises(MalformedSpec):
        spec_from_dict({"kind": "wibble"})
    with pytest.raises(MalformedSpec):
        spec_from_dict({"kind": "coherent", "alpha": "one", "beta": 0.0})


def test_state_is_immutable():
    state = build_state(StateSpec.fock(0, 0, CutoffPolicy.explicit(1)))
    with pytest.raises(ValueError):
        state.rho[0, 0] = 2.0


def test_swap_embed_and_phase_helpers():
    state = build_state(StateSpec.fock(2, 1, CutoffPolicy.explicit(2)))
    swapped = swap_modes(state)
    assert tensor_diagonal_probabilities(swapped)[1, 2] == pytest.approx(1.0)

    bigger = embed(state, FockCutoff(4))
    assert bigger.n_max == 4
    assert tensor_diagonal_probabilities(bigger)[2, 1] == pytest.approx(1.0)

    rotated = apply_phase(build_state(StateSpec.noon(1)), 0.4)
    c = rotated.cutoff
    # phase lands on the coherence, never the diagonal
    assert rotated.rho[c.index(1, 0), c.index(0, 1)] == pytest.approx(0.5 * np.exp(-1j * 0.4))
    np.testing.assert_allclose(np.diagonal(rotated.rho), np.diagonal(build_state(StateSpec.noon(1)).rho))
