"""Shared test helpers."""
from pathlib import Path

from nnru.params import get_preset
from nnru.scheme import encrypt, keygen, sample_matrix, sample_message
from nnru.serialization import dumps_ciphertexts, dumps_private_key, dumps_public_key
from nnru.streams import derive_rng

GOLDEN = Path(__file__).parent / "golden"

# (criterion number, passed, detail) rows collected by the acceptance suite
ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


def golden_objects():
    params = get_preset("toy")
    pub, priv = keygen(params, derive_rng(42, "golden"))
    rng = derive_rng(42, "golden-ct")
    blocks = []
    for _ in range(3):
        m = sample_message(params, rng)
        blocks.append(encrypt(pub, m, phi=sample_matrix(params.k, params.n, params.d_phi, rng)))
    return {
        "toy.pub": dumps_public_key(pub),
        "toy.key": dumps_private_key(priv),
        "toy.ct": dumps_ciphertexts(blocks, params),
    }
