import math

import pytest

import cdsc


def test_or_gate_joint_values():
    net = cdsc.or_gate_model(3, 0.6)
    joint = cdsc.joint_from_net(net)
    probs = {tuple(_state(joint, k)): p for k, p in enumerate(joint.probs)}
    assert probs[(0, 0, 0)] == pytest.approx(0.36, abs=1e-12)
    assert probs[(0, 1, 1)] == pytest.approx(0.24, abs=1e-12)
    assert probs[(1, 0, 1)] == pytest.approx(0.24, abs=1e-12)
    assert probs[(1, 1, 1)] == pytest.approx(0.16, abs=1e-12)
    assert sum(joint.probs) == pytest.approx(1.0, abs=1e-12)


def _state(joint, idx):
    # last variable varies fastest
    cards = [v.cardinality for v in joint.variables]
    out = []
    for c in reversed(cards):
        out.append(idx % c)
        idx //= c
    return list(reversed(out))


def test_exact_ci_and_tv():
    joint = cdsc.joint_from_net(cdsc.or_gate_model(3, 0.6))
    assert cdsc.exact_ci(joint, 0, 1, [])
    assert not cdsc.exact_ci(joint, 0, 1, [2])
    assert cdsc.tv_to_ci_surrogate(joint, 0, 1, [2]) == pytest.approx(0.18, abs=1e-12)


def test_oracle_recovery_finds_the_collider():
    net = cdsc.or_gate_model(3, 0.6)
    pattern = cdsc.run_ic_oracle(net)
    assert pattern.directed == [(0, 2), (1, 2)]
    assert pattern.undirected == []
    assert pattern == cdsc.pattern_of_dag(net.dag)


def test_budget_numbers():
    config = cdsc.TesterConfig()
    config.epsilon = 0.1
    report = cdsc.budget_ic([2, 2, 2], 0.05, 0.1, config)
    base = 16.0 / ((0.05 / 6.0) * cdsc.DEFAULT_GAMMA * 0.05**2)
    assert report.m_expected == pytest.approx(base, rel=1e-9)
    assert report.alpha0_star == pytest.approx(0.05 / 6.0, rel=1e-12)

    bound = cdsc.bound_uniform(3, 2, 0.05, 0.1, config)
    assert bound >= report.m_expected
    assert cdsc.bound_sparsity(3, 2, 0.05, 0.1, 1, config) == bound


def test_ci_test_runs_and_is_deterministic():
    net = cdsc.or_gate_model(3, 0.6)
    config = cdsc.TesterConfig()
    config.epsilon = 0.18
    a = cdsc.ci_test(net, 0, 2, [], config, 3000.0, seed=7)
    b = cdsc.ci_test(net, 0, 2, [], config, 3000.0, seed=7)
    assert not a.independent
    assert a.statistic == b.statistic
    assert a.samples_drawn == b.samples_drawn


def test_sampling_and_serialization_round_trip():
    net = cdsc.or_gate_model(3, 0.6)
    data = cdsc.sample_dataset(net, 50, 4)
    assert data.rows() == 50
    again = cdsc.dataset_from_csv(cdsc.dataset_to_csv(data))
    assert again.values == data.values

    back = cdsc.model_from_json(cdsc.model_to_json(net))
    assert back.dag.edges == net.dag.edges

    expertise = cdsc.ExpertiseSet.cond_size_above(0)
    config = cdsc.TesterConfig()
    config.epsilon = 0.1
    rep = cdsc.budget_with_expertise([2, 2, 2], 0.05, 0.1, expertise, config)
    assert rep.value_of_expertise > 0


def test_errors_surface_as_exceptions():
    with pytest.raises(RuntimeError):
        cdsc.or_gate_model(1, 0.5)
    config = cdsc.TesterConfig()
    config.epsilon = 0.1
    with pytest.raises(RuntimeError):
        cdsc.budget_ic([2], 0.05, 0.1, config)
    assert math.isfinite(cdsc.DEFAULT_GAMMA)
