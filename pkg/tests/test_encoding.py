import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nnru.encoding import block_capacity, decode_message, encode_message
from nnru.errors import DecodeError, EncodingError
from nnru.params import get_preset


def trits(byte):
    digits = []
    for _ in range(6):
        byte, r = divmod(byte, 3)
        digits.append(-1 if r == 2 else r)
    return digits


def flat(blocks):
    return np.concatenate([b.ravel() for b in blocks]).tolist()


def test_empty_message_is_one_prefix_block(toy):
    blocks = encode_message(b"", toy)
    assert len(blocks) == 1
    assert blocks[0].shape == (2, 2, 7)
    assert not blocks[0].any()
    assert decode_message(blocks, toy) == b""
    assert decode_message([], toy) == b""


def test_single_zero_byte(toy):
    digits = flat(encode_message(b"\x00", toy))
    assert digits[24:30] == [0] * 6
    assert digits[:6] == trits(1)


def test_byte_200():
    assert trits(200) == [-1, 0, 1, 1, -1, 0]
    params = get_preset("small")
    digits = flat(encode_message(bytes([200]), params))
    assert digits[24:30] == [-1, 0, 1, 1, -1, 0]


def test_layout_is_row_major(toy):
    data = bytes(range(1, 20))
    digits = flat(encode_message(data, toy))
    cap = block_capacity(toy) * 6
    stream = list(len(data).to_bytes(4, "little")) + list(data)
    expected = []
    for start in range(0, len(stream), block_capacity(toy)):
        chunk = [d for b in stream[start : start + block_capacity(toy)] for d in trits(b)]
        expected += chunk + [0] * (toy.coeff_count - len(chunk))
    assert digits == expected
    assert cap <= toy.coeff_count


@given(st.binary(max_size=300), st.sampled_from(["toy", "small", "reference"]))
def test_round_trip(data, name):
    params = get_preset(name)
    assert decode_message(encode_message(data, params), params) == data


def test_errors(toy):
    with pytest.raises(EncodingError):
        encode_message(b"x", toy.with_(p=5))
    with pytest.raises(EncodingError):
        encode_message(b"x", get_preset("toy-micro"))
    blocks = encode_message(b"hello", toy)
    blocks[1][0, 0, 0] = 2
    with pytest.raises(DecodeError):
        decode_message(blocks, toy)
    # length prefix claims more bytes than present
    bad = encode_message(b"hi", toy)
    with pytest.raises(DecodeError):
        decode_message(bad[:1], toy)
    # all-ones digits in a byte slot give 364 > 255
    blocks = encode_message(b"hello", toy)
    blocks[1].reshape(-1)[:6] = 1
    with pytest.raises(DecodeError):
        decode_message(blocks, toy)
