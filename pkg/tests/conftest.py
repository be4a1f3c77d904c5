import pytest

from prbgkit.bignum import Natural, hex_decode, hex_encode
from prbgkit.modred import make_context
from prbgkit.rsaprg import RsaprgKey, keygen
from prbgkit.splitmix import SplitMix64


def draw_exact(stream, bits):
    """Random value with exactly `bits` bits."""
    return stream.next_bits(bits) | (1 << (bits - 1))


def random_odd_modulus(bits, seed):
    stream = SplitMix64(seed)
    return Natural(draw_exact(stream, bits) | 1)


@pytest.fixture(scope="session")
def ctx4093():
    # worked toy modulus 2^12 - 3
    return make_context(Natural(4093))


@pytest.fixture(scope="session")
def ctx24():
    return make_context(random_odd_modulus(24, 2024))


@pytest.fixture(scope="session")
def ctx1536():
    return make_context(random_odd_modulus(1536, 2025))


@pytest.fixture(scope="session")
def ctx6144():
    return make_context(random_odd_modulus(6144, 2026))


@pytest.fixture(scope="session")
def toy_key():
    return keygen(24, 9, 1)


KEY6144_SEED = 20260810


@pytest.fixture(scope="session")
def key6144(request):
    """Full-size key; regenerating takes ~30s, so cache the result on disk."""
    cache = request.config.cache
    stored = cache.get("prbgkit/key6144", None)
    if stored and stored.get("seed") == KEY6144_SEED:
        return RsaprgKey(N=hex_decode(stored["N"]), p=hex_decode(stored["p"]),
                         q=hex_decode(stored["q"]))
    key = keygen(6144, 9, KEY6144_SEED)
    cache.set("prbgkit/key6144", {"seed": KEY6144_SEED, "N": hex_encode(key.N),
                                  "p": hex_encode(key.p), "q": hex_encode(key.q)})
    return key
