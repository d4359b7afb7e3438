import random

import pytest
from hypothesis import strategies as st

from sclcert.words import Word


def naive_reduce(letters):
    # independent oracle: sweep out adjacent inverse pairs until none remain
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i : i + 2]
                changed = True
                break
    return tuple(out)


def letters(rank=2):
    return st.sampled_from([s * i for i in range(1, rank + 1) for s in (1, -1)])


def raw_words(rank=2, max_size=10):
    return st.lists(letters(rank), max_size=max_size)


def words(rank=2, max_size=10):
    return raw_words(rank, max_size).map(Word)


@pytest.fixture
def rng():
    return random.Random(12345)


W = Word.parse
