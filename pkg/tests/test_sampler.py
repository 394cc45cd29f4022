import json

import pytest
from hypothesis import given, strategies as st

from monadlab.analysis import analyze_monad, generic_bounds
from monadlab.exactalg import QQ, GF
from monadlab.monad import GenerationError, check_composition, check_fiberwise, serialize_monad
from monadlab.sampler import (SampleConfig, isotropic_columns, sample, sample_gnc, sample_instanton,
                              split_seed, splitmix64, survey)

from conftest import F101


def test_splitmix64_reference_value():
    assert splitmix64(0) == 0xE220A8397B1DCDAF


@given(st.integers(0, 2**64 - 1), st.integers(0, 1000))
def test_split_seed_is_deterministic_and_64_bit(master, i):
    s = split_seed(master, i)
    assert s == split_seed(master, i)
    assert 0 <= s < 2**64


def test_split_seeds_differ():
    assert len({split_seed(1, i) for i in range(1000)}) == 1000


@given(st.integers(0, 10**9), st.integers(1, 4))
def test_sampling_is_deterministic(seed, k):
    cfg = SampleConfig(charge=k, field=F101, seed=seed)
    assert serialize_monad(sample(cfg)) == serialize_monad(sample(cfg))


@given(st.integers(0, 10**9), st.integers(1, 5))
def test_instanton_samples_are_valid(seed, k):
    m = sample_instanton(SampleConfig(charge=k, field=GF(2147483647), seed=seed))
    assert (m.A, m.B, m.C) == ((-1,) * k, (0,) * (2 * k + 2), (1,) * k)
    assert check_composition(m)
    assert check_fiberwise(m).locally_free


def test_rational_samples_for_small_charge():
    for k in (1, 2):
        m = sample_instanton(SampleConfig(charge=k, field=QQ, seed=3))
        assert m.field is QQ and check_composition(m)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_isotropic_columns(seed, k):
    import random
    h, count = k + 1, k
    n = 2 * h
    cols = isotropic_columns(GF(2147483647), n, count, random.Random(seed))
    assert len(cols) == count
    # sum_i a_i b_{i+h} - a_{i+h} b_i vanishes as a quadric for every pair of columns
    for c1 in cols:
        for c2 in cols:
            for u in range(4):
                for v in range(4):
                    s = sum(c1[u][i] * c2[v][i + h] - c1[u][i + h] * c2[v][i] for i in range(h))
                    s += sum(c1[v][i] * c2[u][i + h] - c1[v][i + h] * c2[u][i] for i in range(h))
                    assert s % 2147483647 == 0


@pytest.mark.parametrize("shape", [(1, 0, 2), (0, 2, 2), (0, 0, 0), (-1, 0, 1)])
def test_gnc_parameter_errors(shape):
    with pytest.raises(ValueError):
        sample_gnc(SampleConfig(shape=shape, field=F101))


def test_gnc_variant_error():
    with pytest.raises(ValueError):
        sample_gnc(SampleConfig(shape=(0, 0, 1), variant="G", field=F101))


def test_instanton_needs_charge():
    with pytest.raises(ValueError):
        sample_instanton(SampleConfig(field=F101))


@pytest.mark.parametrize("variant,twists", [
    ("E", ((-2,), (-1, 0, 0, 1), (2,))),
    ("F", ((-3,), (-2, -1, 0, 1), (2,))),
])
def test_gnc_shapes(variant, twists):
    m = sample_gnc(SampleConfig(shape=(0, 1, 2), variant=variant, field=F101, seed=1))
    assert (m.A, m.B, m.C) == twists


def test_gnc_e_charge_one_shape_is_nullcorrelation_type():
    m = sample_gnc(SampleConfig(shape=(0, 0, 1), variant="E", field=F101, seed=1))
    rep = analyze_monad(m)
    assert rep.classification.buchsbaum_p == 1 and rep.classification.is_instanton


def test_generation_failure_is_reported():
    # one resample over F_2 with degenerate forms gets exhausted quickly
    with pytest.raises(GenerationError) as exc:
        for seed in range(200):
            sample_instanton(SampleConfig(charge=3, field=GF(2), seed=seed, max_resamples=1))
    assert "resamples exhausted" in str(exc.value)


def test_survey_low_charge():
    res = survey(SampleConfig(charge=1, field=F101, seed=4), 5)
    assert res.histogram == {1: 5}
    assert res.outlier_seeds == []
    doc = res.to_json()
    assert doc["schema"] == "monadlab.survey/1"
    assert [t["seed"] for t in doc["trials"]] == [split_seed(4, i) for i in range(5)]


def test_survey_expected_p_uses_generic_lower_bound():
    res = survey(SampleConfig(charge=4, field=F101, seed=1), 3)
    assert res.expected_p == generic_bounds(4).lower_p == 3


def test_survey_is_independent_of_parallelism(monkeypatch):
    cfg = SampleConfig(charge=2, field=F101, seed=9)
    monkeypatch.setenv("MONADLAB_THREADS", "1")
    serial = json.dumps(survey(cfg, 4).to_json())
    monkeypatch.setenv("MONADLAB_THREADS", "2")
    parallel = json.dumps(survey(cfg, 4).to_json())
    assert serial == parallel


def test_survey_needs_trials():
    with pytest.raises(ValueError):
        survey(SampleConfig(charge=1, field=F101), 0)
