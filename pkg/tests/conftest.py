import random

import pytest

from qeuclid.verify import rand_coord_poly


@pytest.fixture
def rnd():
    return random.Random(20240817)


@pytest.fixture
def rand_poly(rnd):
    def make(deg=3, nterm=4, with_t=True, sector="x", conv="W"):
        return rand_coord_poly(rnd, deg, nterm, with_t, sector, conv)

    return make
