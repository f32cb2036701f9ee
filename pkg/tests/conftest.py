import random

import pytest


def random_text(rng: random.Random, n: int, sigma: int) -> bytes:
    return bytes(rng.randrange(sigma) for _ in range(n))


@pytest.fixture(scope="session")
def paper_text() -> bytes:
    # 19-symbol string whose greedy parse has 7 phrases; used throughout.
    return b"bbabaababababaababa"


PAPER_PHRASES = [
    (ord("b"), 0),
    (1, 1),
    (ord("a"), 0),
    (2, 2),
    (3, 3),
    (7, 6),
    (10, 5),
]
