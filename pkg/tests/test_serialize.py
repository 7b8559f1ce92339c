import json

import numpy as np
import pytest

import qgidem as qg
from qgidem.core import StructuralError
from qgidem.serialize import (
    cayley_from_dict,
    cayley_to_dict,
    content_hash,
    load_json,
    qg_from_dict,
    qg_to_dict,
    save_json,
    state_from_dict,
    state_to_dict,
)
from helpers import algebra, group, oracle_states


@pytest.mark.parametrize("kind,name", [("fn", "S3"), ("ga", "Q8"), ("fn", "Z1")])
def test_quantum_group_round_trip_exact(kind, name, tmp_path):
    g = algebra(kind, name)
    path = tmp_path / "qg.json"
    save_json(path, qg_to_dict(g))
    loaded = qg_from_dict(load_json(path))
    # repr-based floats round-trip exactly, well past 15 significant digits
    for field in ("mult", "comult", "unit", "counit", "haar", "star", "antipode"):
        assert np.array_equal(getattr(g, field), getattr(loaded, field)), field
    assert qg.validate(loaded).passed


def test_round_trip_preserves_irrational_entries(tmp_path):
    g = qg.dual(algebra("fn", "S3"))
    path = tmp_path / "dual.json"
    save_json(path, qg_to_dict(g))
    loaded = qg_from_dict(load_json(path))
    assert np.array_equal(g.haar, loaded.haar)

    # quotient constructions carry genuinely irrational structure constants
    from qgidem.analysis import quotient_quantum_group
    from qgidem.states import subgroup_state_fn

    ct = group("S3")
    fn = algebra("fn", "S3")
    a3 = [s for s in qg.all_subgroups(ct) if len(s) == 3][0]
    b = quotient_quantum_group(fn, subgroup_state_fn(fn, ct, a3).coeffs).quotient
    save_json(path, qg_to_dict(b))
    loaded = qg_from_dict(load_json(path))
    for field in ("mult", "comult", "unit", "counit", "haar", "star", "antipode"):
        assert np.array_equal(getattr(b, field), getattr(loaded, field)), field
    assert qg.validate(loaded).passed


def test_malformed_quantum_group_errors():
    g = algebra("fn", "Z2")
    data = qg_to_dict(g)
    del data["haar"]
    with pytest.raises(StructuralError, match="missing fields"):
        qg_from_dict(data)
    data = qg_to_dict(g)
    data["mult"][0] = [5, 0, 0, 1.0, 0.0]
    with pytest.raises(StructuralError, match="out of range"):
        qg_from_dict(data)
    data = qg_to_dict(g)
    data["unit"] = [[1.0, 0.0]]
    with pytest.raises(StructuralError, match="expected 2 entries"):
        qg_from_dict(data)


def test_cayley_round_trip():
    ct = group("D4")
    data = cayley_to_dict(ct)
    loaded = cayley_from_dict(data)
    assert np.array_equal(ct.table, loaded.table)
    assert loaded.identity == ct.identity
    data["identity"] = (ct.identity + 1) % 8
    with pytest.raises(ValueError, match="identity"):
        cayley_from_dict(data)


def test_state_round_trip_and_hash_check():
    g = algebra("fn", "S3")
    st = oracle_states("fn", "S3")[2]
    data = state_to_dict(st)
    loaded = state_from_dict(data, g)
    assert np.array_equal(loaded.coeffs, st.coeffs)
    other = algebra("ga", "S3")
    with pytest.raises(ValueError, match="hash mismatch"):
        state_from_dict(data, other)


def test_content_hash_distinguishes_structures():
    assert content_hash(algebra("fn", "S3")) != content_hash(algebra("ga", "S3"))
    assert content_hash(algebra("fn", "S3")) == content_hash(algebra("fn", "S3"))


def test_json_is_plain_data(tmp_path):
    payload = qg_to_dict(algebra("ga", "Z4"))
    text = json.dumps(payload)
    assert "complex" not in text and "(" not in text
