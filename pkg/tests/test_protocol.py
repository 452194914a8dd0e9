import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intentscale.errors import (
    MalformedFrameError,
    ParamRangeError,
    SchemaError,
    UnknownMessageTypeError,
)
from intentscale.service.protocol import (
    ClutchMessage,
    ErrorMessage,
    HelloMessage,
    ParamsMessage,
    PoseMessage,
    SeqCounter,
    StateMessage,
    decode_message,
    encode_message,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=32).map(float)
unit = st.floats(min_value=0.0, max_value=1.0, width=32).map(float)
seqs = st.integers(min_value=0, max_value=2**31)
vec3 = st.tuples(finite, finite, finite)
labels = st.sampled_from(["coarse", "fine", None])


poses = st.builds(PoseMessage, seq=seqs, t=finite, position=vec3)
clutches = st.builds(ClutchMessage, seq=seqs, pressed=st.booleans())
params_msgs = st.builds(ParamsMessage, seq=seqs, v=st.tuples(unit, unit, unit))
ring_dicts = st.fixed_dictionaries(
    {
        "color": st.sampled_from(["red", "green", "blue", "yellow"]),
        "size": st.sampled_from(["small", "large"]),
        "state": st.sampled_from(["free", "grasped", "placed"]),
        "pos": st.lists(finite, min_size=2, max_size=2),
        "radius": finite,
    }
)
states = st.builds(
    StateMessage,
    seq=seqs,
    t=finite,
    s_intent=finite,
    fused=st.tuples(unit, unit),
    label=labels,
    follower=vec3,
    clutched=st.booleans(),
    n_clutch=st.integers(min_value=0, max_value=10**6),
    degraded=st.booleans(),
    params_norm=st.tuples(unit, unit, unit),
    params=st.fixed_dictionaries(
        {"rho": unit, "s_fine": finite, "s_coarse": finite}
    ),
    rings=st.lists(ring_dicts, max_size=4).map(tuple),
)
errors_msgs = st.builds(
    ErrorMessage, seq=seqs, code=st.sampled_from(["decode", "params"]), message=st.text(max_size=40)
)

all_messages = st.one_of(poses, clutches, params_msgs, states, errors_msgs)


def test_clutch_frame_exact_bytes():
    frame = encode_message(ClutchMessage(seq=7, pressed=True))
    assert frame == b'{"type":"clutch","seq":7,"pressed":true}'


def test_params_frame_field_order():
    frame = encode_message(ParamsMessage(seq=2, v=(0.5, 0.25, 1.0)))
    assert frame == b'{"type":"params","seq":2,"v":[0.5,0.25,1.0]}'


@settings(max_examples=300)
@given(all_messages)
def test_round_trip_identity(msg):
    assert decode_message(encode_message(msg)) == msg


def test_state_frame_carries_required_fields():
    msg = StateMessage(
        seq=9,
        t=1.23,
        s_intent=2.1,
        fused=(0.7, 0.3),
        label="coarse",
        follower=(0.1, 0.2, 0.0),
        clutched=True,
        n_clutch=4,
        degraded=False,
        params_norm=(0.1, 0.5, 0.5),
        params={"rho": 0.05, "s_fine": 1.0, "s_coarse": 3.0},
        rings=(),
    )
    doc = json.loads(encode_message(msg))
    for key in ("s_intent", "fused", "follower", "clutched", "n_clutch", "degraded"):
        assert key in doc


def test_decode_rejects_unknown_type():
    with pytest.raises(UnknownMessageTypeError):
        decode_message(b'{"type":"warp","seq":0}')


def test_decode_rejects_malformed_json():
    with pytest.raises(MalformedFrameError):
        decode_message(b'{"type":"clutch","seq":7,')
    with pytest.raises(MalformedFrameError):
        decode_message(b"[1,2,3]")


def test_decode_rejects_out_of_range_params():
    with pytest.raises(ParamRangeError):
        decode_message(b'{"type":"params","seq":0,"v":[1.2,0,0]}')


def test_decode_rejects_missing_fields():
    with pytest.raises(SchemaError):
        decode_message(b'{"type":"pose","seq":0,"t":0.0}')
    with pytest.raises(SchemaError):
        decode_message(b'{"type":"clutch","pressed":true}')


def test_decode_rejects_wrong_shapes():
    with pytest.raises(SchemaError):
        decode_message(b'{"type":"pose","seq":0,"t":0.0,"position":[1,2]}')
    with pytest.raises(SchemaError):
        decode_message(b'{"type":"pose","seq":0,"t":"soon","position":[1,2,3]}')
    with pytest.raises(SchemaError):
        decode_message(b'{"type":"clutch","seq":-1,"pressed":true}')


def test_encode_rejects_non_finite():
    with pytest.raises(SchemaError):
        encode_message(PoseMessage(seq=0, t=float("nan"), position=(0.0, 0.0, 0.0)))
    with pytest.raises(SchemaError):
        encode_message(PoseMessage(seq=0, t=0.0, position=(float("inf"), 0.0, 0.0)))


def test_seq_counter_strictly_increases():
    counter = SeqCounter()
    values = [counter.take() for _ in range(100)]
    assert values == sorted(values)
    assert len(set(values)) == 100
